#include "mulab/polyz.hpp"

#include <algorithm>
#include <functional>

#include "mulab/errors.hpp"

namespace mulab {

int degree(const ZPoly& f) { return static_cast<int>(f.size()) - 1; }
int degree(const QPoly& f) { return static_cast<int>(f.size()) - 1; }
int degree(const FpPoly& f) { return static_cast<int>(f.size()) - 1; }

void trim(ZPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}
void trim(QPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}
void trim(FpPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

namespace {

template <class P>
P add_generic(const P& a, const P& b, int sign) {
    P out(std::max(a.size(), b.size()));
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) out[i] += sign * b[i];
    trim(out);
    return out;
}

template <class P>
P mul_generic(const P& a, const P& b) {
    if (a.empty() || b.empty()) return {};
    P out(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0)
            for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    trim(out);
    return out;
}

mpz_class mod_pos(const mpz_class& x, const mpz_class& M) {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), x.get_mpz_t(), M.get_mpz_t());
    return r;
}

}  // namespace

ZPoly operator+(const ZPoly& a, const ZPoly& b) { return add_generic(a, b, 1); }
ZPoly operator-(const ZPoly& a, const ZPoly& b) { return add_generic(a, b, -1); }
ZPoly operator*(const ZPoly& a, const ZPoly& b) { return mul_generic(a, b); }
ZPoly scale(const ZPoly& a, const mpz_class& s) {
    ZPoly out = a;
    for (auto& c : out) c *= s;
    trim(out);
    return out;
}
ZPoly zpoly_x() { return {0, 1}; }

bool exact_divide(const ZPoly& f, const ZPoly& g, ZPoly& q) {
    if (g.empty() || g.back() != 1) throw Error("NotMonic", "divisor must be monic");
    ZPoly r = f;
    int dg = degree(g);
    q.assign(std::max(0, degree(f) - dg + 1), 0);
    for (int i = degree(r); i >= dg; --i) {
        mpz_class c = r[i];
        if (c == 0) continue;
        q[i - dg] = c;
        for (int j = 0; j <= dg; ++j) r[i - dg + j] -= c * g[j];
    }
    trim(r);
    trim(q);
    return r.empty();
}

ZPoly rem_mod(const ZPoly& f, const ZPoly& g, const mpz_class& M) {
    ZPoly r(f.size());
    for (size_t i = 0; i < f.size(); ++i) r[i] = mod_pos(f[i], M);
    int dg = degree(g);
    for (int i = degree(r); i >= dg; --i) {
        mpz_class c = r[i];
        if (c == 0) continue;
        for (int j = 0; j <= dg; ++j) r[i - dg + j] = mod_pos(r[i - dg + j] - c * g[j], M);
    }
    trim(r);
    return r;
}

ZPoly mul_mod(const ZPoly& a, const ZPoly& b, const mpz_class& M) {
    ZPoly out = a * b;
    for (auto& c : out) c = mod_pos(c, M);
    trim(out);
    return out;
}

QPoly to_q(const ZPoly& f) {
    QPoly out(f.size());
    for (size_t i = 0; i < f.size(); ++i) out[i] = f[i];
    return out;
}
QPoly operator+(const QPoly& a, const QPoly& b) { return add_generic(a, b, 1); }
QPoly operator-(const QPoly& a, const QPoly& b) { return add_generic(a, b, -1); }
QPoly operator*(const QPoly& a, const QPoly& b) { return mul_generic(a, b); }

void divmod(const QPoly& f, const QPoly& g, QPoly& q, QPoly& r) {
    if (g.empty()) throw Error("DivisionByZero", "polynomial division by zero");
    r = f;
    trim(r);
    int dg = degree(g);
    q.assign(std::max(0, degree(r) - dg + 1), 0);
    for (int i = degree(r); i >= dg; --i) {
        if (r[i] == 0) continue;
        mpq_class c = r[i] / g[dg];
        q[i - dg] = c;
        for (int j = 0; j <= dg; ++j) r[i - dg + j] -= c * g[j];
    }
    trim(r);
    trim(q);
}

QPoly rem(const QPoly& f, const QPoly& g) {
    QPoly q, r;
    divmod(f, g, q, r);
    return r;
}

QPoly inverse_mod(const QPoly& a, const QPoly& m) {
    // Extended Euclid tracking the coefficient of a.
    QPoly r0 = m, r1 = rem(a, m), s0, s1{1};
    while (!r1.empty()) {
        QPoly q, r;
        divmod(r0, r1, q, r);
        QPoly s = s0 - q * s1;
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    if (degree(r0) != 0) throw Error("NotInvertible", "polynomial not invertible modulo m");
    mpq_class c = r0[0];
    for (auto& v : s0) v /= c;
    return rem(s0, m);
}

QPoly compose_mod(const QPoly& f, const QPoly& r, const QPoly& m) {
    QPoly acc;
    for (int i = degree(f); i >= 0; --i) acc = rem(acc * r + QPoly{f[i]}, m);
    return acc;
}

FpPoly reduce(const ZPoly& f, i64 q) {
    FpPoly out(f.size());
    for (size_t i = 0; i < f.size(); ++i) out[i] = mpz_mod(f[i], q);
    trim(out);
    return out;
}

FpPoly reduce(const QPoly& f, i64 q) {
    FpPoly out(f.size());
    for (size_t i = 0; i < f.size(); ++i) {
        if (mpz_divisible_ui_p(f[i].get_den_mpz_t(), static_cast<unsigned long>(q)))
            throw Error("BadReduction", "denominator divisible by " + std::to_string(q));
        out[i] = rat_mod(f[i], q);
    }
    trim(out);
    return out;
}

FpPoly add(const FpPoly& a, const FpPoly& b, i64 q) {
    FpPoly out(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) out[i] = (out[i] + b[i]) % q;
    trim(out);
    return out;
}

FpPoly sub(const FpPoly& a, const FpPoly& b, i64 q) {
    FpPoly out(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) out[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) out[i] = mod_norm(out[i] - b[i], q);
    trim(out);
    return out;
}

FpPoly mul(const FpPoly& a, const FpPoly& b, i64 q) {
    if (a.empty() || b.empty()) return {};
    FpPoly out(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i])
            for (size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + mod_mul(a[i], b[j], q)) % q;
    trim(out);
    return out;
}

void divmod(const FpPoly& f, const FpPoly& g, i64 q, FpPoly& quo, FpPoly& r) {
    if (g.empty()) throw Error("DivisionByZero", "polynomial division by zero");
    r = f;
    trim(r);
    int dg = degree(g);
    i64 inv = mod_inv(g.back(), q);
    quo.assign(std::max(0, degree(r) - dg + 1), 0);
    for (int i = degree(r); i >= dg; --i) {
        if (r[i] == 0) continue;
        i64 c = mod_mul(r[i], inv, q);
        quo[i - dg] = c;
        for (int j = 0; j <= dg; ++j) r[i - dg + j] = mod_norm(r[i - dg + j] - mod_mul(c, g[j], q), q);
    }
    trim(r);
    trim(quo);
}

FpPoly rem(const FpPoly& f, const FpPoly& g, i64 q) {
    FpPoly quo, r;
    divmod(f, g, q, quo, r);
    return r;
}

FpPoly make_monic(const FpPoly& f, i64 q) {
    if (f.empty()) return f;
    i64 inv = mod_inv(f.back(), q);
    FpPoly out(f.size());
    for (size_t i = 0; i < f.size(); ++i) out[i] = mod_mul(f[i], inv, q);
    return out;
}

FpPoly gcd(FpPoly a, FpPoly b, i64 q) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        FpPoly r = rem(a, b, q);
        a = std::move(b);
        b = std::move(r);
    }
    return make_monic(a, q);
}

FpPoly derivative(const FpPoly& f, i64 q) {
    FpPoly out;
    for (size_t i = 1; i < f.size(); ++i) out.push_back(mod_mul(f[i], static_cast<i64>(i) % q, q));
    trim(out);
    return out;
}

FpPoly powmod(const FpPoly& base, const mpz_class& e, const FpPoly& m, i64 q) {
    FpPoly result{1}, b = rem(base, m, q);
    result = rem(result, m, q);
    size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (size_t i = bits; i-- > 0;) {
        result = rem(mul(result, result, q), m, q);
        if (mpz_tstbit(e.get_mpz_t(), i)) result = rem(mul(result, b, q), m, q);
    }
    return result;
}

FpPoly inverse_mod(const FpPoly& a, const FpPoly& m, i64 q) {
    FpPoly r0 = m, r1 = rem(a, m, q), s0, s1{1};
    while (!r1.empty()) {
        FpPoly quo, r;
        divmod(r0, r1, q, quo, r);
        FpPoly s = sub(s0, mul(quo, s1, q), q);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    if (degree(r0) != 0) throw Error("NotInvertible", "polynomial not invertible modulo m");
    i64 c = mod_inv(r0[0], q);
    for (auto& v : s0) v = mod_mul(v, c, q);
    return rem(s0, m, q);
}

namespace {

FpPoly random_poly(int deg_bound, i64 q, std::mt19937_64& rng) {
    std::uniform_int_distribution<i64> dist(0, q - 1);
    FpPoly f(static_cast<size_t>(deg_bound));
    for (auto& c : f) c = dist(rng);
    trim(f);
    return f;
}

// Splits a product of distinct irreducibles of common degree d.
void equal_degree_split(const FpPoly& f, int d, i64 q, std::mt19937_64& rng, std::vector<FpPoly>& out) {
    if (degree(f) == d) {
        out.push_back(f);
        return;
    }
    mpz_class qd;
    mpz_ui_pow_ui(qd.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(d));
    for (int attempt = 0; attempt < 1000; ++attempt) {
        FpPoly a = random_poly(degree(f), q, rng);
        if (degree(a) < 1) continue;
        FpPoly b;
        if (q == 2) {
            // Trace map a + a^2 + ... + a^{2^{d-1}}.
            FpPoly t = rem(a, f, q), acc = t;
            for (int i = 1; i < d; ++i) {
                t = rem(mul(t, t, q), f, q);
                acc = add(acc, t, q);
            }
            b = acc;
        } else {
            b = sub(powmod(a, (qd - 1) / 2, f, q), FpPoly{1}, q);
        }
        FpPoly g = gcd(f, b, q);
        if (degree(g) > 0 && degree(g) < degree(f)) {
            FpPoly quo, r;
            divmod(f, g, q, quo, r);
            equal_degree_split(g, d, q, rng, out);
            equal_degree_split(make_monic(quo, q), d, q, rng, out);
            return;
        }
    }
    throw Error("FactorizationFailed", "equal-degree splitting did not converge");
}

}  // namespace

std::vector<FpPoly> factor_squarefree(const FpPoly& f0, i64 q, std::mt19937_64& rng) {
    FpPoly f = make_monic(f0, q);
    std::vector<FpPoly> out;
    FpPoly x{0, 1}, h = rem(x, f, q);
    for (int d = 1; 2 * d <= degree(f); ++d) {
        h = powmod(h, q, f, q);
        FpPoly g = gcd(f, sub(h, x, q), q);
        if (degree(g) > 0) {
            equal_degree_split(g, d, q, rng, out);
            FpPoly quo, r;
            divmod(f, g, q, quo, r);
            f = make_monic(quo, q);
            h = rem(h, f, q);
        }
    }
    if (degree(f) > 0) out.push_back(f);
    std::sort(out.begin(), out.end(), [](const FpPoly& a, const FpPoly& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return out;
}

namespace {

ZPoly lift_coeffs(const FpPoly& f) {
    ZPoly out(f.size());
    for (size_t i = 0; i < f.size(); ++i) out[i] = f[i];
    return out;
}

// Two-factor linear Hensel lifting of f = g h mod q to mod q^k.
void hensel_pair(const ZPoly& f, ZPoly& g, ZPoly& h, i64 q, int k) {
    FpPoly gq = reduce(g, q), hq = reduce(h, q);
    // tau with tau*h = 1 mod (g, q).
    FpPoly tau = inverse_mod(hq, gq, q);
    mpz_class qj = q;
    for (int j = 1; j < k; ++j) {
        ZPoly e = f - g * h;
        for (auto& c : e) c /= qj;  // exact: f = g h mod q^j
        FpPoly eq = reduce(e, q);
        FpPoly dg = rem(mul(tau, eq, q), gq, q);
        FpPoly quo, r;
        divmod(sub(eq, mul(hq, dg, q), q), gq, q, quo, r);
        if (!r.empty()) throw Error("HenselFailure", "inexact division during lifting");
        g = g + scale(lift_coeffs(dg), qj);
        h = h + scale(lift_coeffs(quo), qj);
        qj *= q;
    }
}

}  // namespace

std::vector<ZPoly> hensel_lift(const ZPoly& f, const std::vector<FpPoly>& factors, i64 q, int k) {
    mpz_class M;
    mpz_ui_pow_ui(M.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(k));
    std::vector<ZPoly> out;
    ZPoly rest = f;
    for (size_t i = 0; i + 1 < factors.size(); ++i) {
        FpPoly others{1};
        for (size_t j = i + 1; j < factors.size(); ++j) others = mul(others, factors[j], q);
        ZPoly g = lift_coeffs(factors[i]), h = lift_coeffs(others);
        hensel_pair(rest, g, h, q, k);
        out.push_back(g);
        rest = h;
    }
    out.push_back(rest);
    for (auto& g : out)
        for (auto& c : g) c = mod_pos(c, M);
    return out;
}

std::vector<ZPoly> monic_factors_of_degree(const ZPoly& f, int d, long max_subsets) {
    if (f.empty() || f.back() != 1) throw Error("NotMonic", "polynomial must be monic");
    int n = degree(f);
    if (d <= 0 || d > n) return {};
    if (d == n) return {f};
    std::mt19937_64 rng(0x5eed);
    // Choose the small prime with fewest modular factors among several.
    i64 best_q = 0;
    std::vector<FpPoly> best;
    int tried = 0;
    for (i64 q = 3; tried < 8 && q < 2000; q += 2) {
        if (!is_prime(q)) continue;
        FpPoly fq = reduce(f, q);
        if (degree(fq) != n) continue;
        if (degree(gcd(fq, derivative(fq, q), q)) != 0) continue;
        ++tried;
        auto facs = factor_squarefree(fq, q, rng);
        if (best_q == 0 || facs.size() < best.size()) {
            best_q = q;
            best = facs;
        }
    }
    if (best_q == 0) throw Error("FactorizationInconclusive", "no squarefree reduction found");
    // Coefficients of a degree-d factor are bounded by 2^d times the 2-norm of f.
    mpz_class norm2 = 0;
    for (const auto& c : f) norm2 += c * c;
    mpz_class bound;
    mpz_sqrt(bound.get_mpz_t(), norm2.get_mpz_t());
    bound = (bound + 1) << d;
    int k = 1;
    mpz_class M = best_q;
    while (M <= 2 * bound) {
        M *= best_q;
        ++k;
    }
    auto lifted = hensel_lift(f, best, best_q, k);
    std::vector<ZPoly> out;
    long checked = 0;
    std::vector<size_t> chosen;
    std::function<void(size_t, int)> search = [&](size_t start, int deg_left) {
        if (deg_left == 0) {
            if (++checked > max_subsets) throw Error("FactorizationInconclusive", "recombination bound exceeded");
            ZPoly g{1};
            for (size_t i : chosen) g = mul_mod(g, lifted[i], M);
            mpz_class half = M / 2;
            for (auto& c : g)
                if (c > half) c -= M;
            ZPoly quo;
            if (exact_divide(f, g, quo)) out.push_back(g);
            return;
        }
        for (size_t i = start; i < lifted.size(); ++i) {
            int di = degree(lifted[i]);
            if (di > deg_left) continue;
            chosen.push_back(i);
            search(i + 1, deg_left - di);
            chosen.pop_back();
        }
    };
    search(0, d);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace mulab
