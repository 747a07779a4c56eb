#pragma once

#include <vector>

#include <gmpxx.h>

#include "mulab/arith.hpp"

namespace mulab {

using QMatrix = std::vector<std::vector<mpq_class>>;
using QVector = std::vector<mpq_class>;

struct Rref {
    QMatrix R;                 // reduced rows (nonzero rows only)
    std::vector<size_t> pivots;  // pivot column of each row
};

Rref rref(QMatrix A, size_t cols);
// Basis of {x : A x = 0}.
std::vector<QVector> nullspace(const QMatrix& A, size_t cols);
QMatrix transpose(const QMatrix& A);
QMatrix matmul(const QMatrix& A, const QMatrix& B);
QMatrix identity(size_t n);

// Dense matrices over F_p with small p.
using FpMatrix = std::vector<std::vector<i64>>;
struct FpRref {
    FpMatrix R;
    std::vector<size_t> pivots;
};
FpRref rref_fp(FpMatrix A, size_t cols, i64 p);
std::vector<std::vector<i64>> nullspace_fp(const FpMatrix& A, size_t cols, i64 p);
size_t rank_fp(const FpMatrix& A, size_t cols, i64 p);
// Some solution of A x = b, or empty when inconsistent.
bool solve_fp(const FpMatrix& A, const std::vector<i64>& b, size_t cols, i64 p, std::vector<i64>& x);

}  // namespace mulab
