#pragma once

#include <array>
#include <string>
#include <vector>

#include "mulab/arith.hpp"

namespace mulab {

// 2x2 matrix (a b; c d) over Z/m, stored row-major.
struct Mat2 {
    i64 a = 1, b = 0, c = 0, d = 1;
    bool operator==(const Mat2&) const = default;
    auto operator<=>(const Mat2&) const = default;
};

inline Mat2 reduce(const Mat2& A, i64 m) {
    return {mod_norm(A.a, m), mod_norm(A.b, m), mod_norm(A.c, m), mod_norm(A.d, m)};
}
inline Mat2 mul(const Mat2& X, const Mat2& Y, i64 m) {
    return {(mod_mul(X.a, Y.a, m) + mod_mul(X.b, Y.c, m)) % m, (mod_mul(X.a, Y.b, m) + mod_mul(X.b, Y.d, m)) % m,
            (mod_mul(X.c, Y.a, m) + mod_mul(X.d, Y.c, m)) % m, (mod_mul(X.c, Y.b, m) + mod_mul(X.d, Y.d, m)) % m};
}
inline Mat2 add(const Mat2& X, const Mat2& Y, i64 m) {
    return {(X.a + Y.a) % m, (X.b + Y.b) % m, (X.c + Y.c) % m, (X.d + Y.d) % m};
}
inline Mat2 scale(const Mat2& X, i64 s, i64 m) {
    s = mod_norm(s, m);
    return {mod_mul(X.a, s, m), mod_mul(X.b, s, m), mod_mul(X.c, s, m), mod_mul(X.d, s, m)};
}
inline i64 det(const Mat2& X, i64 m) { return mod_norm(mod_mul(X.a, X.d, m) - mod_mul(X.b, X.c, m), m); }
inline i64 trace(const Mat2& X, i64 m) { return (X.a + X.d) % m; }
// Inverse modulo m; throws NotInvertible when the determinant is not a unit.
inline Mat2 inv(const Mat2& X, i64 m) {
    i64 di = mod_inv(det(X, m), m);
    return reduce(Mat2{mod_mul(X.d, di, m), -mod_mul(X.b, di, m), -mod_mul(X.c, di, m), mod_mul(X.a, di, m)}, m);
}
inline Mat2 conj(const Mat2& A, const Mat2& X, i64 m) { return mul(mul(A, X, m), inv(A, m), m); }
inline std::string to_string(const Mat2& X) {
    return "[[" + std::to_string(X.a) + "," + std::to_string(X.b) + "],[" + std::to_string(X.c) + "," +
           std::to_string(X.d) + "]]";
}

// Images of labeled group elements (usually generators) in GL_2(Z/p^n).
struct ModPnRepresentation {
    i64 p = 0;
    int n = 1;
    std::vector<Mat2> images;
    std::vector<std::string> labels;
    i64 modulus() const { return ipow(p, n); }
};

}  // namespace mulab
