#include "mulab/residual.hpp"

#include <algorithm>
#include <set>

#include "mulab/errors.hpp"

namespace mulab {

ZPoly two_torsion_polynomial(const EllipticCurve& E) { return {E.b6(), 2 * E.b4(), E.b2(), 4}; }

std::vector<ZPoly> division_polynomials(const EllipticCurve& E, int n) {
    mpz_class b2 = E.b2(), b4 = E.b4(), b6 = E.b6(), b8 = E.b8();
    ZPoly B = two_torsion_polynomial(E);
    ZPoly B2 = B * B;
    std::vector<ZPoly> g(std::max(n + 1, 5));
    g[0] = {};
    g[1] = {1};
    g[2] = {1};
    g[3] = {b8, 3 * b6, 3 * b4, b2, 3};
    g[4] = {b4 * b8 - b6 * b6, b2 * b8 - b4 * b6, 10 * b8, 10 * b6, 5 * b4, b2, 2};
    for (int k = 5; k <= n; ++k) {
        int m = k / 2;
        if (k % 2) {
            ZPoly t1 = g[m + 2] * g[m] * g[m] * g[m], t2 = g[m - 1] * g[m + 1] * g[m + 1] * g[m + 1];
            if (m % 2 == 0)
                t1 = t1 * B2;
            else
                t2 = t2 * B2;
            g[k] = t1 - t2;
        } else {
            g[k] = g[m] * (g[m + 2] * g[m - 1] * g[m - 1] - g[m - 2] * g[m + 1] * g[m + 1]);
        }
    }
    g.resize(n + 1);
    return g;
}

ZPoly division_polynomial(const EllipticCurve& E, int p) {
    if (p < 3 || p % 2 == 0) throw Error("BadPrime", "division_polynomial expects an odd prime");
    return division_polynomials(E, p)[p];
}

std::pair<ZPoly, ZPoly> multiplication_map(const EllipticCurve& E, int k) {
    auto g = division_polynomials(E, k + 1);
    ZPoly B = two_torsion_polynomial(E);
    ZPoly psi2 = g[k] * g[k], prod = g[k - 1] * g[k + 1];
    if (k % 2 == 0)
        psi2 = psi2 * B;
    else
        prod = prod * B;
    return {zpoly_x() * psi2 - prod, psi2};
}

bool is_kernel_polynomial(const EllipticCurve& E, const QPoly& h, int p) {
    int d = degree(h);
    if (2 * d + 1 != p) return false;
    for (int k = 2; k <= d; ++k) {
        auto [num, den] = multiplication_map(E, k);
        QPoly xk;
        try {
            xk = rem(to_q(num) * inverse_mod(to_q(den), h), h);
        } catch (const Error&) {
            return false;
        }
        if (!compose_mod(h, xk, h).empty()) return false;
    }
    return true;
}

std::vector<QPoly> kernel_polynomials(const EllipticCurve& E, int p, long max_subsets) {
    ZPoly f = division_polynomial(E, p);
    int D = degree(f), d = (p - 1) / 2;
    mpz_class L = f.back();
    // F(X) = L^{D-1} f(X/L) is monic with integer coefficients.
    ZPoly F(f.size());
    mpz_class pw = 1;
    for (int i = D - 1; i >= 0; --i) {
        F[i] = f[i] * pw;
        pw *= L;
    }
    F[D] = 1;
    std::vector<QPoly> out;
    for (const ZPoly& K : monic_factors_of_degree(F, d, max_subsets)) {
        // Back to x = X / L: k(x) = K(L x) / L^d.
        QPoly h(K.size());
        for (int i = 0; i <= d; ++i) {
            mpq_class c = K[i];
            for (int j = i; j < d; ++j) c /= L;
            h[i] = c;
        }
        if (is_kernel_polynomial(E, h, p)) out.push_back(h);
    }
    return out;
}

std::array<mpq_class, 5> velu_image(const EllipticCurve& E, const QPoly& h) {
    int d = degree(h);
    auto coef = [&](int k) { return d - k >= 0 ? h[d - k] : mpq_class(0); };
    mpq_class s1 = -coef(1), s2 = coef(2), s3 = -coef(3);
    mpq_class b2 = E.b2(), b4 = E.b4(), b6 = E.b6();
    mpq_class t = 6 * (s1 * s1 - 2 * s2) + b2 * s1 + d * b4;
    mpq_class w = 10 * (s1 * s1 * s1 - 3 * s1 * s2 + 3 * s3) + 2 * b2 * (s1 * s1 - 2 * s2) + 3 * b4 * s1 + d * b6;
    const auto& a = E.ainvs;
    return {mpq_class(a[0]), mpq_class(a[1]), mpq_class(a[2]), a[3] - 5 * t, a[4] - b2 * t - 7 * w};
}

mpq_class j_invariant(const std::array<mpq_class, 5>& a) {
    mpq_class b2 = a[0] * a[0] + 4 * a[1], b4 = 2 * a[3] + a[0] * a[2], b6 = a[2] * a[2] + 4 * a[4];
    mpq_class b8 = a[0] * a[0] * a[4] + 4 * a[1] * a[4] - a[0] * a[2] * a[3] + a[1] * a[2] * a[2] - a[3] * a[3];
    mpq_class c4 = b2 * b2 - 24 * b4;
    mpq_class disc = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
    if (disc == 0) throw Error("InvalidModel", "singular model");
    return c4 * c4 * c4 / disc;
}

mpq_class j_invariant(const EllipticCurve& E) {
    std::array<mpq_class, 5> a;
    for (int i = 0; i < 5; ++i) a[i] = E.ainvs[i];
    return j_invariant(a);
}

namespace {

// Arithmetic in F_l[X]/(g) and in K = F_q[Y]/(Y^2 + bY - c).
struct FieldExt {
    i64 l;
    FpPoly g;
    FpPoly b, c;  // b = a1 X + a3, c = X^3 + a2 X^2 + a4 X + a6

    FpPoly m(const FpPoly& u, const FpPoly& v) const { return rem(mul(u, v, l), g, l); }
    FpPoly s(const FpPoly& u, const FpPoly& v) const { return sub(u, v, l); }
    FpPoly a(const FpPoly& u, const FpPoly& v) const { return add(u, v, l); }
    FpPoly k(i64 v) const {
        FpPoly r{mod_norm(v, l)};
        trim(r);
        return r;
    }
    FpPoly inv(const FpPoly& u) const { return inverse_mod(u, g, l); }
};

struct KElt {
    FpPoly u, v;  // u + v Y
    bool operator==(const KElt&) const = default;
};

KElt kmul(const FieldExt& F, const KElt& x, const KElt& y) {
    FpPoly vv = F.m(x.v, y.v);
    return {F.a(F.m(x.u, y.u), F.m(vv, F.c)), F.s(F.a(F.m(x.u, y.v), F.m(x.v, y.u)), F.m(vv, F.b))};
}
KElt kadd(const FieldExt& F, const KElt& x, const KElt& y) { return {F.a(x.u, y.u), F.a(x.v, y.v)}; }
KElt ksub(const FieldExt& F, const KElt& x, const KElt& y) { return {F.s(x.u, y.u), F.s(x.v, y.v)}; }
KElt kscal(const FieldExt& F, const FpPoly& s, const KElt& x) { return {F.m(s, x.u), F.m(s, x.v)}; }
KElt kinv(const FieldExt& F, const KElt& x) {
    // Norm (u + vY)(u + v(-b - Y)) = u^2 - b u v - c v^2 lies in F_q.
    FpPoly N = F.s(F.s(F.m(x.u, x.u), F.m(F.b, F.m(x.u, x.v))), F.m(F.c, F.m(x.v, x.v)));
    if (N.empty()) throw Error("RootLiftFailure", "zero divisor in the quadratic extension");
    FpPoly ni = F.inv(N);
    return {F.m(F.s(x.u, F.m(F.b, x.v)), ni), F.m(F.s({}, x.v), ni)};
}
KElt kpow(const FieldExt& F, KElt x, i64 e) {
    KElt r{{1}, {}};
    while (e > 0) {
        if (e & 1) r = kmul(F, r, x);
        x = kmul(F, x, x);
        e >>= 1;
    }
    return r;
}

struct Pt {
    FpPoly x;  // in F_q
    KElt y;
};

Pt point_add(const FieldExt& F, const std::array<i64, 5>& ai, const Pt& P, const Pt& Q, bool dbl) {
    FpPoly a1 = F.k(ai[0]), a2 = F.k(ai[1]), a3 = F.k(ai[2]), a4 = F.k(ai[3]);
    KElt lam;
    if (dbl) {
        // (3x^2 + 2 a2 x + a4 - a1 y) / (2y + a1 x + a3)
        FpPoly numx = F.a(F.a(F.m(F.k(3), F.m(P.x, P.x)), F.m(F.k(2), F.m(a2, P.x))), a4);
        KElt num = ksub(F, {numx, {}}, kscal(F, a1, P.y));
        KElt den = kadd(F, kscal(F, F.k(2), P.y), {F.a(F.m(a1, P.x), a3), {}});
        lam = kmul(F, num, kinv(F, den));
    } else {
        FpPoly dx = F.s(Q.x, P.x);
        if (dx.empty()) throw Error("RootLiftFailure", "unexpected coincidence of x-coordinates");
        lam = kscal(F, F.inv(dx), ksub(F, Q.y, P.y));
    }
    KElt lam2 = kmul(F, lam, lam);
    KElt x3k = ksub(F, ksub(F, kadd(F, lam2, kscal(F, a1, lam)), {a2, {}}), {F.a(P.x, Q.x), {}});
    if (!x3k.v.empty()) throw Error("RootLiftFailure", "x-coordinate left the base field");
    // y3 = -(lam + a1) x3 - (y1 - lam x1) - a3
    KElt y3 = ksub(F, ksub(F, kscal(F, F.s({}, x3k.u), kadd(F, lam, {a1, {}})), ksub(F, P.y, kscal(F, P.x, lam))),
                   {a3, {}});
    return {x3k.u, y3};
}

}  // namespace

i64 frobenius_scalar(const EllipticCurve& E, const QPoly& h, i64 ell, i64 p) {
    if (E.conductor % ell == 0 || ell == p) throw Error("BadReduction", "ell must be a good prime different from p");
    FpPoly hb = reduce(h, ell);
    if (degree(hb) != degree(h)) throw Error("BadReduction", "kernel polynomial drops degree mod ell");
    std::mt19937_64 rng(static_cast<unsigned long>(ell));
    auto facs = factor_squarefree(hb, ell, rng);
    FieldExt F{ell, facs.front(), {}, {}};
    const auto& ai = E.ainvs;
    FpPoly X = rem(FpPoly{0, 1}, F.g, ell);
    F.b = F.a(F.m(F.k(ai[0]), X), F.k(ai[2]));
    F.c = F.a(F.a(F.a(F.m(X, F.m(X, X)), F.m(F.k(ai[1]), F.m(X, X))), F.m(F.k(ai[3]), X)), F.k(ai[4]));
    Pt P{X, {{}, {1}}};
    Pt frob{powmod(X, ell, F.g, ell), kpow(F, P.y, ell)};
    Pt Q = P;
    for (i64 lam = 1; lam < p; ++lam) {
        if (lam == 2)
            Q = point_add(F, ai, P, P, true);
        else if (lam > 2)
            Q = point_add(F, ai, Q, P, false);
        if (Q.x == frob.x && Q.y == frob.y) return lam;
    }
    throw Error("RootLiftFailure", "Frobenius does not act by a scalar on the kernel");
}

DirichletCharacter line_character(const EllipticCurve& E, const QPoly& h, i64 p, i64 ell_bound) {
    i64 M = E.conductor * p;
    std::vector<std::pair<i64, i64>> data;
    for (i64 ell : primes_up_to(ell_bound)) {
        if (M % ell == 0) continue;
        // Denominators of kernel polynomials are powers of p, so every good ell reduces.
        data.emplace_back(ell, frobenius_scalar(E, h, ell, p));
    }
    std::vector<DirichletCharacter> hits;
    for (const auto& chi : enumerate_characters(M, p - 1, p, 1)) {
        bool ok = true;
        for (auto [ell, lam] : data)
            if (chi(ell) != lam) {
                ok = false;
                break;
            }
        if (ok) hits.push_back(chi);
    }
    if (hits.size() != 1)
        throw Error("CharacterNotIdentified", std::to_string(hits.size()) + " characters match the Frobenius data");
    return hits.front();
}

SSPair semisimplification(const std::map<i64, i64>& a_table, i64 p, i64 conductor, i64 ell_bound) {
    i64 M = conductor * p;
    SSPair out;
    out.ell_bound = ell_bound;
    DirichletCharacter chibar = DirichletCharacter::mod_p_cyclotomic(p).extend_to(M);
    std::vector<std::pair<i64, i64>> data;
    for (auto [ell, a] : a_table) {
        if (ell > ell_bound || M % ell == 0) continue;
        data.emplace_back(ell, mod_norm(a, p));
    }
    for (i64 ell : primes_up_to(ell_bound))
        if (M % ell != 0 && !a_table.count(ell)) throw Error("MissingAp", "a_" + std::to_string(ell) + " not supplied");
    std::vector<std::pair<DirichletCharacter, DirichletCharacter>> found;
    for (const auto& phi1 : enumerate_characters(M, p - 1, p, 1)) {
        DirichletCharacter phi2 = chibar * phi1.inverse();
        bool ok = true;
        for (auto [ell, a] : data)
            if ((phi1(ell) + phi2(ell)) % p != a) {
                ok = false;
                break;
            }
        if (!ok) continue;
        bool dup = false;
        for (const auto& [f1, f2] : found)
            if ((f1 == phi1 && f2 == phi2) || (f1 == phi2 && f2 == phi1)) dup = true;
        if (!dup) found.emplace_back(phi1, phi2);
    }
    if (found.size() > 1) throw Error("AmbiguousPair", "several character pairs fit; raise the ell bound");
    if (found.size() == 1) {
        out.reducible = true;
        // Order the pair with the odd character first.
        auto [f1, f2] = found.front();
        if (!is_odd(f1) && is_odd(f2)) std::swap(f1, f2);
        out.phi1 = f1;
        out.phi2 = f2;
    }
    return out;
}

std::string to_string(Alignment a) {
    switch (a) {
        case Alignment::Aligned:
            return "aligned";
        case Alignment::Skew:
            return "skew";
        default:
            return "irreducible";
    }
}

Alignment classify_alignment(const std::vector<StableLine>& lines, i64 p, int k_weight) {
    if (lines.empty()) throw Error("InsufficientLineData", "no stable line available");
    i64 target = DirichletCharacter::mod_p_cyclotomic(p).pow(k_weight - 1).conductor();
    int target_vp = vp(target, p);
    for (const auto& line : lines)
        if (is_odd(line.chi) && vp(line.chi.conductor(), p) == target_vp) return Alignment::Aligned;
    return Alignment::Skew;
}

std::string character_name(const DirichletCharacter& chi) {
    if (chi.is_trivial()) return "1";
    i64 p = chi.prime();
    DirichletCharacter base = DirichletCharacter::mod_p_cyclotomic(p).extend_to(std::lcm(chi.modulus(), p));
    DirichletCharacter c = chi.extend_to(std::lcm(chi.modulus(), p));
    if (chi.precision() == 1)
        for (i64 k = 1; k < p - 1; ++k)
            if (base.pow(k) == c) return k == 1 ? "chi" : "chi^" + std::to_string(k);
    return chi.describe();
}

AlignmentDegree alignment_degree(const std::map<i64, i64>& a_table, i64 p, int N, i64 conductor,
                                 const DirichletCharacter& phi1, int /*k_weight*/, i64 ell_bound) {
    AlignmentDegree out;
    if (!is_odd(phi1)) throw Error("NotAligned", "the aligned line character must be odd");
    DirichletCharacter chibar = DirichletCharacter::mod_p_cyclotomic(p).extend_to(std::lcm(phi1.modulus(), p));
    DirichletCharacter f1 = phi1.extend_to(std::lcm(phi1.modulus(), p));
    std::vector<std::pair<i64, i64>> data;
    for (auto [ell, a] : a_table)
        if (ell <= ell_bound && (conductor * p) % ell != 0) data.emplace_back(ell, a);
    for (int n = 1; n <= N; ++n) {
        i64 pn = ipow(p, n), period = pn / p * (p - 1);
        bool found = false;
        for (i64 i = 0; i < period && !found; ++i) {
            // alpha = phi1 chi_bar^{-i}; its Teichmuller lift is alpha(l)^{p^{n-1}} mod p^n.
            DirichletCharacter alpha = f1 * chibar.pow(mod_norm(-i, p - 1));
            bool ok = true;
            for (auto [ell, a] : data) {
                i64 t = mod_pow(alpha(ell), pn / p, pn);
                i64 v1 = mod_mul(mod_pow(ell, i, pn), t, pn);
                i64 v2 = mod_mul(ell % pn, mod_inv(v1, pn), pn);
                if ((v1 + v2) % pn != mod_norm(a, pn)) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                found = true;
                out.n_max = n;
                out.evidence.push_back("n=" + std::to_string(n) + ": i=" + std::to_string(i) +
                                       ", alpha=" + character_name(alpha));
            }
        }
        if (!found) break;
    }
    return out;
}

ModPnRepresentation isogeny_transform(const ModPnRepresentation& rho) {
    i64 p = rho.p, m = rho.modulus();
    int m1 = rho.n;
    for (const auto& g : rho.images) {
        if (mod_norm(g.c, p) != 0) throw Error("NotReduciblyAligned", "a lower-left entry is a unit");
        m1 = std::min(m1, vp(mod_norm(g.c, m), p, rho.n));
    }
    if (m1 >= rho.n) throw Error("PrecisionLoss", "lower-left entries vanish at working precision");
    ModPnRepresentation out = rho;
    i64 pm = ipow(p, m1);
    for (auto& g : out.images) {
        // D^{m1} g D^{-m1}, D = diag(p, 1): (a, b, c, d) -> (a, p^m1 b, c / p^m1, d).
        i64 c = mod_norm(g.c, m) / pm;
        g = reduce(Mat2{g.a, mod_mul(g.b, pm, m), c, g.d}, m);
    }
    return out;
}

Alignment classify_matrix_representation(const ModPnRepresentation& rho, bool line_character_odd) {
    for (const auto& g : rho.images)
        if (mod_norm(g.c, rho.p) != 0) return Alignment::Skew;
    return line_character_odd ? Alignment::Aligned : Alignment::Skew;
}

ResidualDescriptor residual_descriptor(const EllipticCurve& E, i64 p, int N, i64 ell_bound,
                                       const std::optional<std::vector<QPoly>>& kernels) {
    ResidualDescriptor d;
    d.label = E.label;
    d.p = p;
    d.conductor = E.conductor;
    d.ell_bound = ell_bound;
    std::map<i64, i64> at;
    for (i64 ell : primes_up_to(ell_bound)) at[ell] = E.a_ell(ell);
    SSPair ss = semisimplification(at, p, E.conductor, ell_bound);
    d.reducible = ss.reducible;
    if (!ss.reducible) return d;
    d.phi1 = ss.phi1;
    d.phi2 = ss.phi2;
    d.kernels = kernels ? *kernels : kernel_polynomials(E, static_cast<int>(p));
    for (const auto& h : d.kernels) d.lines.push_back({line_character(E, h, p, std::min<i64>(ell_bound, 100)), true});
    for (size_t i = 0; i < d.lines.size(); ++i)
        for (size_t j = i + 1; j < d.lines.size(); ++j)
            if (!(d.lines[i].chi == d.lines[j].chi)) d.split = true;
    d.classification = classify_alignment(d.lines, p, 2);
    if (d.classification == Alignment::Aligned) {
        for (const auto& line : d.lines)
            if (is_odd(line.chi) && vp(line.chi.conductor(), p) == 1) {
                d.degree = alignment_degree(at, p, N, E.conductor, line.chi, 2, ell_bound);
                break;
            }
    }
    return d;
}

}  // namespace mulab
