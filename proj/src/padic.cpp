#include "mulab/padic.hpp"

#include <algorithm>

#include "mulab/errors.hpp"

namespace mulab {

PAdicElement::PAdicElement(i64 p, int N, i64 value) : p_(p), N_(N), mod_(ipow(p, N)), v_(mod_norm(value, ipow(p, N))) {
    if (N < 1) throw Error("InvalidPrecision", "N must be positive");
}

void PAdicElement::check_compatible(const PAdicElement& o) const {
    if (p_ != o.p_ || N_ != o.N_)
        throw Error("PrecisionMismatch", "mixing Z/" + std::to_string(p_) + "^" + std::to_string(N_) + " with Z/" +
                                             std::to_string(o.p_) + "^" + std::to_string(o.N_));
}

PAdicElement PAdicElement::operator+(const PAdicElement& o) const {
    check_compatible(o);
    return {p_, N_, v_ + o.v_};
}
PAdicElement PAdicElement::operator-(const PAdicElement& o) const {
    check_compatible(o);
    return {p_, N_, v_ - o.v_};
}
PAdicElement PAdicElement::operator*(const PAdicElement& o) const {
    check_compatible(o);
    return {p_, N_, mod_mul(v_, o.v_, mod_)};
}
PAdicElement PAdicElement::operator-() const { return {p_, N_, -v_}; }

PAdicElement PAdicElement::inverse() const {
    if (v_ % p_ == 0) throw Error("NotUnit", std::to_string(v_) + " is not a unit mod " + std::to_string(p_));
    return {p_, N_, mod_inv(v_, mod_)};
}

PAdicElement PAdicElement::pow(i64 e) const {
    if (e < 0) return inverse().pow(-e);
    return {p_, N_, mod_pow(v_, e, mod_)};
}

PAdicElement PAdicElement::reduce(int M) const {
    if (M > N_) throw Error("PrecisionMismatch", "cannot raise precision by reduction");
    return {p_, M, v_};
}

bool PAdicElement::operator==(const PAdicElement& o) const { return p_ == o.p_ && N_ == o.N_ && v_ == o.v_; }

Valuation valuation(const PAdicElement& x) {
    if (x.value() == 0) return {x.precision(), true};
    return {vp(x.value(), x.prime()), false};
}

PAdicElement hensel_unit_root(i64 a_p, i64 p, int N) {
    if (mod_norm(a_p, p) == 0) throw Error("NotOrdinary", "p divides a_p");
    i64 m = ipow(p, N);
    // Mod p the polynomial is x(x - a_p); Newton iteration from a_p converges
    // because the derivative 2x - a_p is a unit at that root.
    i64 x = mod_norm(a_p, m);
    for (int prec = 1; prec < 2 * N + 2; prec *= 2) {
        i64 f = mod_norm(mod_mul(x, x, m) - mod_mul(a_p, x, m) + p, m);
        i64 df = mod_norm(2 * x - a_p, m);
        x = mod_norm(x - mod_mul(f, mod_inv(df, m), m), m);
    }
    return {p, N, x};
}

IwasawaPolynomial::IwasawaPolynomial(i64 p, int N, int MT) : p_(p), N_(N), MT_(MT), mod_(ipow(p, N)), c_(static_cast<size_t>(MT), 0) {
    if (MT < 1) throw Error("InvalidPrecision", "T-truncation must be positive");
}

IwasawaPolynomial::IwasawaPolynomial(i64 p, int N, int MT, const std::vector<i64>& coeffs) : IwasawaPolynomial(p, N, MT) {
    for (size_t i = 0; i < coeffs.size() && i < c_.size(); ++i) c_[i] = mod_norm(coeffs[i], mod_);
}

void IwasawaPolynomial::set(int i, i64 v) { c_.at(static_cast<size_t>(i)) = mod_norm(v, mod_); }

bool IwasawaPolynomial::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](i64 v) { return v == 0; });
}

void IwasawaPolynomial::check_compatible(const IwasawaPolynomial& o) const {
    if (p_ != o.p_ || N_ != o.N_ || MT_ != o.MT_) throw Error("PrecisionMismatch", "incompatible Iwasawa polynomials");
}

IwasawaPolynomial IwasawaPolynomial::operator+(const IwasawaPolynomial& o) const {
    check_compatible(o);
    IwasawaPolynomial r(*this);
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = mod_norm(c_[i] + o.c_[i], mod_);
    return r;
}

IwasawaPolynomial IwasawaPolynomial::operator-(const IwasawaPolynomial& o) const {
    check_compatible(o);
    IwasawaPolynomial r(*this);
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = mod_norm(c_[i] - o.c_[i], mod_);
    return r;
}

IwasawaPolynomial IwasawaPolynomial::operator*(const IwasawaPolynomial& o) const {
    check_compatible(o);
    IwasawaPolynomial r(p_, N_, MT_);
    for (int i = 0; i < MT_; ++i) {
        if (!c_[i]) continue;
        for (int j = 0; i + j < MT_; ++j) r.c_[i + j] = (r.c_[i + j] + mod_mul(c_[i], o.c_[j], mod_)) % mod_;
    }
    return r;
}

IwasawaPolynomial IwasawaPolynomial::scaled(i64 s) const {
    IwasawaPolynomial r(*this);
    for (auto& v : r.c_) v = mod_mul(v, mod_norm(s, mod_), mod_);
    return r;
}

bool IwasawaPolynomial::operator==(const IwasawaPolynomial& o) const {
    return p_ == o.p_ && N_ == o.N_ && MT_ == o.MT_ && c_ == o.c_;
}

MuLambda mu_lambda_of_polynomial(const IwasawaPolynomial& f) {
    int best = f.precision(), idx = -1;
    for (int i = 0; i < f.truncation(); ++i) {
        int v = vp(f[i], f.prime(), f.precision());
        if (v < best) {
            best = v;
            idx = i;
        }
    }
    if (idx < 0) throw Error("PrecisionExhausted", "all coefficients vanish mod p^" + std::to_string(f.precision()));
    return {best, idx};
}

}  // namespace mulab
