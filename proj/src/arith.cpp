#include "mulab/arith.hpp"

#include <string>

#include "mulab/errors.hpp"

namespace mulab {

i64 mod_pow(i64 a, i64 e, i64 m) {
    if (m == 1) return 0;
    i64 r = 1;
    a = mod_norm(a, m);
    while (e > 0) {
        if (e & 1) r = mod_mul(r, a, m);
        a = mod_mul(a, a, m);
        e >>= 1;
    }
    return r;
}

i64 gcd64(i64 a, i64 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        i64 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

i64 mod_inv(i64 a, i64 m) {
    i64 g = m, x = 0, x1 = 1, r = mod_norm(a, m);
    while (r) {
        i64 q = g / r;
        i64 t = g - q * r;
        g = r;
        r = t;
        t = x - q * x1;
        x = x1;
        x1 = t;
    }
    if (g != 1) throw Error("NotInvertible", std::to_string(a) + " mod " + std::to_string(m));
    return mod_norm(x, m);
}

i64 ipow(i64 b, int e) {
    i64 r = 1;
    while (e-- > 0) r *= b;
    return r;
}

bool is_prime(i64 n) {
    if (n < 2) return false;
    for (i64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<i64> primes_up_to(i64 bound) {
    std::vector<i64> out;
    if (bound < 2) return out;
    std::vector<bool> comp(static_cast<size_t>(bound + 1), false);
    for (i64 i = 2; i <= bound; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (i64 j = i * i; j <= bound; j += i) comp[j] = true;
    }
    return out;
}

std::vector<std::pair<i64, int>> factor_small(i64 n) {
    std::vector<std::pair<i64, int>> f;
    if (n < 0) n = -n;
    for (i64 d = 2; d * d <= n; ++d) {
        if (n % d) continue;
        int e = 0;
        while (n % d == 0) {
            n /= d;
            ++e;
        }
        f.emplace_back(d, e);
    }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

int vp(i64 x, i64 p, int cap) {
    if (x == 0) return cap;
    int v = 0;
    while (x % p == 0 && v < cap) {
        x /= p;
        ++v;
    }
    return v;
}

int vp(const mpz_class& x, i64 p, int cap) {
    if (x == 0) return cap;
    mpz_class y = x;
    int v = 0;
    while (mpz_divisible_ui_p(y.get_mpz_t(), static_cast<unsigned long>(p)) && v < cap) {
        y /= p;
        ++v;
    }
    return v;
}

int vp(const mpq_class& x, i64 p) {
    if (x == 0) throw Error("ZeroValuation", "valuation of 0");
    return vp(mpz_class(x.get_num()), p) - vp(mpz_class(x.get_den()), p);
}

i64 mpz_mod(const mpz_class& x, i64 m) {
    mpz_class r;
    mpz_fdiv_r_ui(r.get_mpz_t(), x.get_mpz_t(), static_cast<unsigned long>(m));
    return r.get_si();
}

i64 rat_mod(const mpq_class& x, i64 m) {
    i64 den = mpz_mod(x.get_den(), m);
    return mod_mul(mpz_mod(x.get_num(), m), mod_inv(den, m), m);
}

i64 primitive_root_mod_prime_power(i64 p, int k) {
    i64 phi = p - 1;
    auto fac = factor_small(phi);
    for (i64 g = 2; g < p; ++g) {
        bool ok = true;
        for (auto [q, e] : fac)
            if (mod_pow(g, phi / q, p) == 1) ok = false;
        if (!ok) continue;
        if (k >= 2 && mod_pow(g, p - 1, p * p) == 1) g += p;  // lift the generator off the bad class
        return g;
    }
    return 1;  // p = 2
}

}  // namespace mulab
