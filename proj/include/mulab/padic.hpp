#pragma once

#include <string>
#include <vector>

#include "mulab/arith.hpp"

namespace mulab {

// A valuation read at finite precision: either an exact integer or the
// statement "at least N" when the value vanished at working precision.
struct Valuation {
    int value = 0;
    bool exhausted = false;

    std::string str() const { return exhausted ? ">=" + std::to_string(value) : std::to_string(value); }
    bool operator==(const Valuation&) const = default;
};

class PAdicElement {
public:
    PAdicElement(i64 p, int N, i64 value);

    i64 prime() const { return p_; }
    int precision() const { return N_; }
    i64 value() const { return v_; }
    i64 modulus() const { return mod_; }

    PAdicElement operator+(const PAdicElement& o) const;
    PAdicElement operator-(const PAdicElement& o) const;
    PAdicElement operator*(const PAdicElement& o) const;
    PAdicElement operator-() const;
    PAdicElement inverse() const;  // units only
    PAdicElement pow(i64 e) const;
    // Reduce to a lower precision.
    PAdicElement reduce(int M) const;
    bool operator==(const PAdicElement& o) const;

private:
    void check_compatible(const PAdicElement& o) const;
    i64 p_;
    int N_;
    i64 mod_;
    i64 v_;
};

Valuation valuation(const PAdicElement& x);

// Unit root of x^2 - a_p x + p in Z/p^N.
PAdicElement hensel_unit_root(i64 a_p, i64 p, int N);

// Element of (Z/p^N)[T]/(T^MT).
class IwasawaPolynomial {
public:
    IwasawaPolynomial(i64 p, int N, int MT);
    IwasawaPolynomial(i64 p, int N, int MT, const std::vector<i64>& coeffs);

    i64 prime() const { return p_; }
    int precision() const { return N_; }
    int truncation() const { return MT_; }
    i64 modulus() const { return mod_; }
    const std::vector<i64>& coeffs() const { return c_; }
    i64 operator[](int i) const { return c_[static_cast<size_t>(i)]; }
    void set(int i, i64 v);
    bool is_zero() const;

    IwasawaPolynomial operator+(const IwasawaPolynomial& o) const;
    IwasawaPolynomial operator-(const IwasawaPolynomial& o) const;
    IwasawaPolynomial operator*(const IwasawaPolynomial& o) const;
    IwasawaPolynomial scaled(i64 s) const;
    bool operator==(const IwasawaPolynomial& o) const;

private:
    void check_compatible(const IwasawaPolynomial& o) const;
    i64 p_;
    int N_;
    int MT_;
    i64 mod_;
    std::vector<i64> c_;
};

struct MuLambda {
    int mu;
    int lambda;
    bool operator==(const MuLambda&) const = default;
};

MuLambda mu_lambda_of_polynomial(const IwasawaPolynomial& f);

}  // namespace mulab
