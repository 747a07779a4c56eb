#pragma once

#include <array>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "mulab/arith.hpp"

namespace mulab {

// Integral Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6,
// assumed minimal (point counts at bad primes rely on it).
struct EllipticCurve {
    std::string label;
    std::array<i64, 5> ainvs{};
    i64 conductor = 0;

    mpz_class b2() const;
    mpz_class b4() const;
    mpz_class b6() const;
    mpz_class b8() const;
    mpz_class c4() const;
    mpz_class discriminant() const;

    // a_l = l - #{affine points mod l}; valid for good and bad l.
    i64 a_ell(i64 ell) const;
    // Isogeny class part of an LMFDB/Cremona label ("11a1" -> "11a").
    std::string isogeny_class() const;
};

// a_n for 1 <= n <= bound (index 0 unused), built multiplicatively.
std::vector<i64> an_table(const EllipticCurve& E, i64 bound);

// Least positive real period of the Neron lattice, via the AGM.
long double real_period(const EllipticCurve& E);

// sum_{n <= terms} a_n / n * exp(2 pi i n z), the antiderivative of
// 2 pi i f(z) dz vanishing at i*infinity.
std::complex<long double> eichler_integral(const std::vector<i64>& an, std::complex<long double> z);

// L(E,1) via 2 sum a_n/n exp(-2 pi n / sqrt(N)); meaningful for root number +1.
long double l_value_at_one(const EllipticCurve& E, const std::vector<i64>& an);

}  // namespace mulab
