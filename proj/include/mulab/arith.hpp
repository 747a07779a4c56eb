#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace mulab {

using i64 = std::int64_t;
using i128 = __int128;

inline i64 mod_norm(i64 x, i64 m) {
    x %= m;
    return x < 0 ? x + m : x;
}
inline i64 mod_mul(i64 a, i64 b, i64 m) { return static_cast<i64>((static_cast<i128>(a) * b) % m); }
i64 mod_pow(i64 a, i64 e, i64 m);
// Inverse of a modulo m; throws Error("NotInvertible") when gcd(a, m) != 1.
i64 mod_inv(i64 a, i64 m);
i64 ipow(i64 b, int e);
i64 gcd64(i64 a, i64 b);

bool is_prime(i64 n);
std::vector<i64> primes_up_to(i64 bound);
// Prime factorization as (prime, exponent) pairs in increasing order.
std::vector<std::pair<i64, int>> factor_small(i64 n);

// p-adic valuations; the zero input returns `cap`.
int vp(i64 x, i64 p, int cap = 1 << 20);
int vp(const mpz_class& x, i64 p, int cap = 1 << 20);
// Valuation of a nonzero rational.
int vp(const mpq_class& x, i64 p);

// Reduce a rational with denominator prime to m into Z/m.
i64 rat_mod(const mpq_class& x, i64 m);
i64 mpz_mod(const mpz_class& x, i64 m);

// Generators of the cyclic group (Z/p^k)^x for odd p.
i64 primitive_root_mod_prime_power(i64 p, int k);

}  // namespace mulab
