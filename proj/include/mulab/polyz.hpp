#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <gmpxx.h>

#include "mulab/arith.hpp"

namespace mulab {

// Dense polynomials, coefficient i is the coefficient of x^i; the zero
// polynomial is the empty vector.
using ZPoly = std::vector<mpz_class>;
using QPoly = std::vector<mpq_class>;
using FpPoly = std::vector<i64>;

int degree(const ZPoly& f);
int degree(const QPoly& f);
int degree(const FpPoly& f);

// Integer polynomials.
void trim(ZPoly& f);
ZPoly operator+(const ZPoly& a, const ZPoly& b);
ZPoly operator-(const ZPoly& a, const ZPoly& b);
ZPoly operator*(const ZPoly& a, const ZPoly& b);
ZPoly scale(const ZPoly& a, const mpz_class& s);
ZPoly zpoly_x();
// Exact quotient f / g over Z with g monic; false if g does not divide f.
bool exact_divide(const ZPoly& f, const ZPoly& g, ZPoly& q);
// Remainder modulo a monic g with coefficients reduced into [0, M).
ZPoly rem_mod(const ZPoly& f, const ZPoly& g, const mpz_class& M);
ZPoly mul_mod(const ZPoly& a, const ZPoly& b, const mpz_class& M);

// Rational polynomials.
void trim(QPoly& f);
QPoly to_q(const ZPoly& f);
QPoly operator+(const QPoly& a, const QPoly& b);
QPoly operator-(const QPoly& a, const QPoly& b);
QPoly operator*(const QPoly& a, const QPoly& b);
void divmod(const QPoly& f, const QPoly& g, QPoly& q, QPoly& r);
QPoly rem(const QPoly& f, const QPoly& g);
// Inverse of a modulo m; throws NotInvertible when gcd(a, m) != 1.
QPoly inverse_mod(const QPoly& a, const QPoly& m);
// f(r) reduced modulo m.
QPoly compose_mod(const QPoly& f, const QPoly& r, const QPoly& m);

// Polynomials over F_q (q prime, coefficients in [0, q)).
void trim(FpPoly& f);
FpPoly reduce(const ZPoly& f, i64 q);
// Reduction of a rational polynomial; throws BadReduction on a denominator divisible by q.
FpPoly reduce(const QPoly& f, i64 q);
FpPoly add(const FpPoly& a, const FpPoly& b, i64 q);
FpPoly sub(const FpPoly& a, const FpPoly& b, i64 q);
FpPoly mul(const FpPoly& a, const FpPoly& b, i64 q);
void divmod(const FpPoly& f, const FpPoly& g, i64 q, FpPoly& quo, FpPoly& r);
FpPoly rem(const FpPoly& f, const FpPoly& g, i64 q);
FpPoly gcd(FpPoly a, FpPoly b, i64 q);
FpPoly make_monic(const FpPoly& f, i64 q);
FpPoly derivative(const FpPoly& f, i64 q);
FpPoly powmod(const FpPoly& base, const mpz_class& e, const FpPoly& m, i64 q);
FpPoly inverse_mod(const FpPoly& a, const FpPoly& m, i64 q);

// Monic irreducible factors of a squarefree polynomial over F_q
// (distinct-degree then equal-degree splitting; works in characteristic 2).
std::vector<FpPoly> factor_squarefree(const FpPoly& f, i64 q, std::mt19937_64& rng);

// Lifts f = prod g_i mod q (f monic, g_i monic and pairwise coprime mod q)
// to a factorization modulo q^k.
std::vector<ZPoly> hensel_lift(const ZPoly& f, const std::vector<FpPoly>& factors, i64 q, int k);

// All monic integer factors of degree d of a squarefree monic integer
// polynomial, found by recombining lifted modular factors. Throws
// FactorizationInconclusive when more than max_subsets products would be
// trial-divided.
std::vector<ZPoly> monic_factors_of_degree(const ZPoly& f, int d, long max_subsets = 200000);

}  // namespace mulab
