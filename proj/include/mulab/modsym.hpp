#pragma once

#include <array>
#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "mulab/arith.hpp"
#include "mulab/curve.hpp"
#include "mulab/linalg.hpp"

namespace mulab {

// A quotient of the free Q-space on P^1(Z/N) by Manin relations.
// Every generator is expressed in the basis of free generators.
struct ManinQuotient {
    std::vector<size_t> basis_generators;  // generator index of each basis vector
    std::vector<QVector> gen_vectors;      // image of each generator
    size_t dim() const { return basis_generators.size(); }
};

// Weight-2 modular symbols for Gamma_0(N).
class ManinSymbolSpace {
public:
    explicit ManinSymbolSpace(i64 N);

    i64 level() const { return N_; }
    size_t num_generators() const { return gens_.size(); }
    const std::pair<i64, i64>& generator(size_t i) const { return gens_[i]; }
    // Index of the class of (c:d); requires gcd(c, d, N) = 1.
    size_t index(i64 c, i64 d) const;

    // Full space (two- and three-term relations) and its plus quotient
    // (additionally (c:d) = (-c:d)).
    const ManinQuotient& full() const { return full_; }
    const ManinQuotient& plus() const { return plus_; }

    // Kernel of the boundary map on the full space, as vectors in full()
    // coordinates.
    const std::vector<QVector>& cuspidal_basis() const { return cuspidal_; }
    size_t cuspidal_dimension() const { return cuspidal_.size(); }
    size_t num_cusps() const { return cusp_reps_.size(); }

    // Sum of Heilbronn images of a generator, in the coordinates of q.
    QVector hecke_image(const ManinQuotient& q, size_t generator, i64 ell) const;
    // Matrix (columns are images of basis vectors) of T_ell on q.
    QMatrix hecke_on_quotient(const ManinQuotient& q, i64 ell) const;

    // Sum of Manin symbols representing the path {oo, a/m}, as generator
    // multiplicities.
    std::map<size_t, i64> path_from_infinity(i64 a, i64 m) const;

private:
    size_t cusp_class(const mpz_class& num, const mpz_class& den);
    i64 N_;
    std::vector<std::pair<i64, i64>> gens_;
    std::vector<i64> index_;  // c*N + d -> generator, or -1
    ManinQuotient full_, plus_;
    std::vector<QVector> cuspidal_;
    std::vector<std::pair<mpz_class, mpz_class>> cusp_reps_;
};

// Standard genus formula for X_0(N), and cusp count.
i64 genus_x0(i64 N);
i64 cusp_count_x0(i64 N);

// Merel's Heilbronn matrices of determinant ell: (a, b, c, d).
std::vector<std::array<i64, 4>> heilbronn_matrices(i64 ell);

// Matrix of T_ell on the cuspidal subspace, in the basis cuspidal_basis().
QMatrix hecke_operator(const ManinSymbolSpace& S, i64 ell);

struct EigenSymbol {
    i64 level = 0;
    std::map<i64, i64> a_table;      // eigenvalues the symbol was matched against
    std::vector<mpq_class> gen_values;  // value of the functional on each generator
    mpq_class scale;                 // factor applied to the raw dual vector
    mpz_class denominator;           // every value lies in (1/denominator) Z
    std::string normalization_id;
};

// Dual Hecke eigenvector on the plus quotient, matched against a_l for
// primes l not dividing N, scaled so values are L-normalized for the real
// period of the given curve.
EigenSymbol eigen_symbol(const ManinSymbolSpace& S, const EllipticCurve& E, const std::map<i64, i64>& a_table);

// Unnormalized variant: the raw dual vector, first nonzero coordinate 1.
EigenSymbol eigen_symbol_raw(const ManinSymbolSpace& S, const std::map<i64, i64>& a_table);

mpq_class evaluate_symbol(const ManinSymbolSpace& S, const EigenSymbol& es, i64 a, i64 m);

// Numerical value of Re(2 pi i int_{i oo}^{a/c} f dz) for c divisible by N
// and gcd(a, c) = 1, via the Gamma_0(N) path from (-d+i)/c to (a+i)/c.
long double numeric_plus_value(const std::vector<i64>& an, i64 a, i64 c);

}  // namespace mulab
