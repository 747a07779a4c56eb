#include "mulab/curve.hpp"

#include <cmath>

#include "mulab/errors.hpp"

namespace mulab {

namespace {
const long double kPi = 3.141592653589793238462643383279502884L;
}

mpz_class EllipticCurve::b2() const { return mpz_class(ainvs[0]) * ainvs[0] + 4 * mpz_class(ainvs[1]); }
mpz_class EllipticCurve::b4() const { return 2 * mpz_class(ainvs[3]) + mpz_class(ainvs[0]) * ainvs[2]; }
mpz_class EllipticCurve::b6() const { return mpz_class(ainvs[2]) * ainvs[2] + 4 * mpz_class(ainvs[4]); }
mpz_class EllipticCurve::b8() const {
    mpz_class a1 = ainvs[0], a2 = ainvs[1], a3 = ainvs[2], a4 = ainvs[3], a6 = ainvs[4];
    return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
}
mpz_class EllipticCurve::c4() const { return b2() * b2() - 24 * b4(); }
mpz_class EllipticCurve::discriminant() const {
    mpz_class B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
    return -B2 * B2 * B8 - 8 * B4 * B4 * B4 - 27 * B6 * B6 + 9 * B2 * B4 * B6;
}

i64 EllipticCurve::a_ell(i64 l) const {
    i64 a[5];
    for (int i = 0; i < 5; ++i) a[i] = mod_norm(ainvs[i], l);
    i64 count = 0;
    if (l == 2) {
        for (i64 x = 0; x < 2; ++x)
            for (i64 y = 0; y < 2; ++y) {
                i64 lhs = y * y + a[0] * x * y + a[2] * y;
                i64 rhs = x * x * x + a[1] * x * x + a[3] * x + a[4];
                if ((lhs - rhs) % 2 == 0) ++count;
            }
        return l - count;
    }
    // Solutions in y of y^2 + b y - f = 0 number 1 + legendre(b^2 + 4f).
    std::vector<signed char> chi(static_cast<size_t>(l), -1);
    chi[0] = 0;
    for (i64 y = 1; y < l; ++y) chi[y * y % l] = 1;
    for (i64 x = 0; x < l; ++x) {
        i64 b = (a[0] * x + a[2]) % l;
        i64 f = (((x + a[1]) * x % l + a[3]) * x + a[4]) % l;
        count += 1 + chi[(b * b + 4 * f) % l];
    }
    return l - count;
}

std::string EllipticCurve::isogeny_class() const {
    std::string s = label;
    while (!s.empty() && std::isdigit(static_cast<unsigned char>(s.back()))) s.pop_back();
    return s;
}

std::vector<i64> an_table(const EllipticCurve& E, i64 bound) {
    std::vector<i64> an(static_cast<size_t>(bound + 1), 0);
    if (bound < 1) return an;
    std::vector<i64> spf(static_cast<size_t>(bound + 1), 0);  // smallest prime factor
    for (i64 i = 2; i <= bound; ++i)
        if (!spf[i])
            for (i64 j = i; j <= bound; j += i)
                if (!spf[j]) spf[j] = i;
    an[1] = 1;
    for (i64 n = 2; n <= bound; ++n) {
        i64 q = spf[n], m = n, k = 0;
        while (m % q == 0) {
            m /= q;
            ++k;
        }
        if (m > 1) {
            an[n] = an[m] * an[n / m];
            continue;
        }
        // n = q^k
        i64 aq = (k == 1) ? E.a_ell(q) : an[q];
        if (k == 1) {
            an[n] = aq;
        } else if (E.conductor % q == 0) {
            an[n] = aq * an[n / q];
        } else {
            an[n] = aq * an[n / q] - q * an[n / q / q];
        }
    }
    return an;
}

long double real_period(const EllipticCurve& E) {
    // Roots of 4x^3 + b2 x^2 + 2 b4 x + b6.
    long double B2 = E.b2().get_d(), B4 = E.b4().get_d(), B6 = E.b6().get_d();
    auto f = [&](long double x) { return ((4 * x + B2) * x + 2 * B4) * x + B6; };
    auto df = [&](long double x) { return (12 * x + 2 * B2) * x + 2 * B4; };
    // Largest real root: start right of every root and run Newton (convex there).
    long double x = 1 + std::fabs(B2) + std::fabs(B4) + std::fabs(B6);
    for (int it = 0; it < 500; ++it) {
        long double step = f(x) / df(x);
        x -= step;
        if (std::fabs(step) <= 1e-18L * (1 + std::fabs(x))) break;
    }
    long double e1 = x;
    // Deflate: 4x^3 + B2 x^2 + 2B4 x + B6 = (x - e1)(4x^2 + bx + c)
    long double b = B2 + 4 * e1, c = 2 * B4 + b * e1;
    long double disc = b * b - 16 * c;
    bool positive_disc = E.discriminant() > 0;
    if (positive_disc) {
        long double s = std::sqrt(std::max(disc, 0.0L));
        long double e2 = (-b + s) / 8, e3 = (-b - s) / 8;
        long double a0 = std::sqrt(e1 - e3), b0 = std::sqrt(e1 - e2);
        for (int it = 0; it < 100; ++it) {
            long double an = (a0 + b0) / 2, bn = std::sqrt(a0 * b0);
            a0 = an;
            b0 = bn;
        }
        return kPi / a0;
    }
    std::complex<long double> z((-b) / 8, std::sqrt(std::max(-disc, 0.0L)) / 8);
    long double r = std::abs(std::complex<long double>(e1, 0) - z);
    long double a0 = 2 * std::sqrt(r), b0 = std::sqrt(2 * r + 2 * (e1 - z.real()));
    for (int it = 0; it < 100; ++it) {
        long double an = (a0 + b0) / 2, bn = std::sqrt(a0 * b0);
        a0 = an;
        b0 = bn;
    }
    return 2 * kPi / a0;
}

std::complex<long double> eichler_integral(const std::vector<i64>& an, std::complex<long double> z) {
    std::complex<long double> q = std::exp(std::complex<long double>(0, 2 * kPi) * z);
    std::complex<long double> qn = 1, s = 0;
    for (size_t n = 1; n < an.size(); ++n) {
        qn *= q;
        if (an[n]) s += static_cast<long double>(an[n]) / static_cast<long double>(n) * qn;
        if (std::abs(qn) < 1e-30L) break;
    }
    return s;
}

long double l_value_at_one(const EllipticCurve& E, const std::vector<i64>& an) {
    long double r = std::exp(-2 * kPi / std::sqrt(static_cast<long double>(E.conductor)));
    long double rn = 1, s = 0;
    for (size_t n = 1; n < an.size(); ++n) {
        rn *= r;
        s += static_cast<long double>(an[n]) / static_cast<long double>(n) * rn;
        if (rn < 1e-30L) break;
    }
    return 2 * s;
}

}  // namespace mulab
