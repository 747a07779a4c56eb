#include "mulab/linalg.hpp"

namespace mulab {

Rref rref(QMatrix A, size_t cols) {
    Rref out;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < A.size(); ++c) {
        size_t piv = r;
        while (piv < A.size() && A[piv][c] == 0) ++piv;
        if (piv == A.size()) continue;
        std::swap(A[r], A[piv]);
        mpq_class inv = 1 / A[r][c];
        for (size_t j = c; j < cols; ++j) A[r][j] *= inv;
        for (size_t i = 0; i < A.size(); ++i) {
            if (i == r || A[i][c] == 0) continue;
            mpq_class f = A[i][c];
            for (size_t j = c; j < cols; ++j)
                if (A[r][j] != 0) A[i][j] -= f * A[r][j];
        }
        out.pivots.push_back(c);
        ++r;
    }
    A.resize(r);
    out.R = std::move(A);
    return out;
}

std::vector<QVector> nullspace(const QMatrix& A, size_t cols) {
    Rref e = rref(A, cols);
    std::vector<bool> is_piv(cols, false);
    for (size_t c : e.pivots) is_piv[c] = true;
    std::vector<QVector> basis;
    for (size_t f = 0; f < cols; ++f) {
        if (is_piv[f]) continue;
        QVector v(cols, 0);
        v[f] = 1;
        for (size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.R[i][f];
        basis.push_back(v);
    }
    return basis;
}

QMatrix transpose(const QMatrix& A) {
    if (A.empty()) return {};
    QMatrix T(A[0].size(), QVector(A.size()));
    for (size_t i = 0; i < A.size(); ++i)
        for (size_t j = 0; j < A[0].size(); ++j) T[j][i] = A[i][j];
    return T;
}

QMatrix matmul(const QMatrix& A, const QMatrix& B) {
    if (A.empty()) return {};
    size_t n = A.size(), k = B.size(), m = B.empty() ? 0 : B[0].size();
    QMatrix C(n, QVector(m, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t t = 0; t < k; ++t) {
            if (A[i][t] == 0) continue;
            for (size_t j = 0; j < m; ++j) C[i][j] += A[i][t] * B[t][j];
        }
    return C;
}

QMatrix identity(size_t n) {
    QMatrix I(n, QVector(n, 0));
    for (size_t i = 0; i < n; ++i) I[i][i] = 1;
    return I;
}

FpRref rref_fp(FpMatrix A, size_t cols, i64 p) {
    FpRref out;
    size_t r = 0;
    for (auto& row : A)
        for (auto& x : row) x = mod_norm(x, p);
    for (size_t c = 0; c < cols && r < A.size(); ++c) {
        size_t piv = r;
        while (piv < A.size() && A[piv][c] == 0) ++piv;
        if (piv == A.size()) continue;
        std::swap(A[r], A[piv]);
        i64 inv = mod_inv(A[r][c], p);
        for (size_t j = c; j < cols; ++j) A[r][j] = A[r][j] * inv % p;
        for (size_t i = 0; i < A.size(); ++i) {
            if (i == r || A[i][c] == 0) continue;
            i64 f = A[i][c];
            for (size_t j = c; j < cols; ++j)
                if (A[r][j]) A[i][j] = mod_norm(A[i][j] - f * A[r][j], p);
        }
        out.pivots.push_back(c);
        ++r;
    }
    A.resize(r);
    out.R = std::move(A);
    return out;
}

std::vector<std::vector<i64>> nullspace_fp(const FpMatrix& A, size_t cols, i64 p) {
    FpRref e = rref_fp(A, cols, p);
    std::vector<bool> is_piv(cols, false);
    for (size_t c : e.pivots) is_piv[c] = true;
    std::vector<std::vector<i64>> basis;
    for (size_t f = 0; f < cols; ++f) {
        if (is_piv[f]) continue;
        std::vector<i64> v(cols, 0);
        v[f] = 1;
        for (size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = mod_norm(-e.R[i][f], p);
        basis.push_back(v);
    }
    return basis;
}

size_t rank_fp(const FpMatrix& A, size_t cols, i64 p) { return rref_fp(A, cols, p).pivots.size(); }

bool solve_fp(const FpMatrix& A, const std::vector<i64>& b, size_t cols, i64 p, std::vector<i64>& x) {
    FpMatrix aug = A;
    for (size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
    FpRref e = rref_fp(aug, cols + 1, p);
    x.assign(cols, 0);
    for (size_t i = 0; i < e.pivots.size(); ++i) {
        if (e.pivots[i] == cols) return false;
        x[e.pivots[i]] = e.R[i][cols];
    }
    return true;
}

}  // namespace mulab
