#pragma once

#include <string>
#include <vector>

#include "mulab/modsym.hpp"
#include "mulab/padic.hpp"

namespace mulab {

// theta_n = sum_{a in (Z/p^{n+1})^x} [a/p^{n+1}]^+ sigma_a projected to
// Gamma_n = Gal(Q_n/Q) ~ Z/p^n. coeffs[j] is the coefficient of gamma^j,
// gamma the image of 1+p. Stored values are p^shift * theta mod p^N, so
// symbol denominators divisible by p are absorbed into the shift.
// Layer -1 is the single value [0]^+ (the base of the norm recursion).
struct MazurTateElement {
    std::string label;
    std::string normalization_id;
    i64 p = 0;
    int N = 0;
    int n = 0;
    int shift = 0;
    std::vector<i64> coeffs;

    i64 modulus() const;
    bool operator==(const MazurTateElement&) const = default;
};

MazurTateElement theta_element(const ManinSymbolSpace& S, const EigenSymbol& es, i64 p, int n, int N,
                               const std::string& label = "");

// Natural projection from layer n to layer n-1 (n >= 1).
MazurTateElement project(const MazurTateElement& theta);
// Norm inflation nu from layer n-1 to layer n: every coefficient is spread
// over its preimages (from layer -1 the factor is p-1, the size of the
// torsion subgroup that the projection collapses).
MazurTateElement inflate(const MazurTateElement& theta);

// A truncated power series together with the power of p it is scaled by:
// the represented element is poly / p^shift.
struct RegularizedL {
    IwasawaPolynomial poly;
    int shift = 0;
    int layer = 0;
};

// L_n = alpha^{-(n+1)} (theta_n - alpha^{-1} nu(theta_{n-1})), written in
// T = gamma - 1 with T-truncation p^n.
RegularizedL regularized_Lp(const MazurTateElement& theta_n, const MazurTateElement& theta_prev,
                            const PAdicElement& alpha);

// Augmentation (value at T = 0), as a residue mod p^N together with the shift.
i64 augmentation(const RegularizedL& L);

struct LayerReading {
    int layer = 0;
    bool exhausted = false;  // L_n vanished at working precision
    MuLambda ml{0, 0};
};

struct AnalyticInvariants {
    int mu = 0;
    int lambda = 0;
    int stabilized_at = 0;
    std::vector<LayerReading> per_layer;
};

// Reads (mu, lambda) of each layer. A layer only sees lambda below its
// T-truncation, so early layers can agree on a wrong reading; the result is
// taken from the final run of agreeing layers, which must have length >= 2,
// and stabilized_at is the first layer of that run. Throws NotStabilized
// otherwise, and InvariantViolation when mu increases along the tower.
AnalyticInvariants analytic_iwasawa_invariants(const std::vector<RegularizedL>& Ls);

// Working precision used for layers up to n_max: the requested N plus room
// for alpha-division at a_p = 1 mod p and the symbol denominator shift.
int working_precision(int N, int n_max, int shift);
// Shift that clears p from the symbol denominators.
int denominator_shift(const EigenSymbol& es, i64 p);

std::string theta_to_json(const MazurTateElement& theta);
MazurTateElement theta_from_json(const std::string& text);

}  // namespace mulab
