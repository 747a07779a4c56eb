#pragma once

#include <string>
#include <vector>

#include "mulab/arith.hpp"

namespace mulab {

// Entry of a relation matrix: integer coefficients of a power series in T.
using SeriesCoeffs = std::vector<i64>;
using SeriesMatrix = std::vector<std::vector<SeriesCoeffs>>;

// M = Lambda^cols / (row space of the relation matrix), Lambda = Z_p[[T]].
struct LambdaPresentation {
    i64 p = 0;
    int N = 0;   // p-adic precision
    int MT = 0;  // T-adic truncation
    SeriesMatrix rows;

    size_t num_rows() const { return rows.size(); }
    size_t num_cols() const { return rows.empty() ? 0 : rows.front().size(); }
};

LambdaPresentation load_presentation(const std::string& path);
LambdaPresentation parse_presentation(const std::string& json_text);

struct SmithRank {
    int rank = 0;
    std::vector<int> exponents;  // T-adic elementary exponents, ascending
};

// Rank and elementary T-exponents of a matrix over F_p[[T]] truncated at
// T^MT. Entries are reduced mod p. The computation is repeated at 2*MT and
// TruncationUnresolved is raised when the two disagree.
SmithRank smith_rank_over_power_series_field_char_p(const SeriesMatrix& A, i64 p, int MT);

// q_1..q_N: q_k = rank over F_p[[T]] of p^{k-1}M / p^k M.
std::vector<int> graded_ranks(const LambdaPresentation& P);

struct MuProfile {
    std::vector<int> mu_vector;  // (mu_1, ..., mu_t), or (0) when mu = 0
    int mu = 0;
    int t = 0;
    int r = 0;
    bool operator==(const MuProfile&) const = default;
};

MuProfile mu_profile(const LambdaPresentation& P);

// True when some maximal minor is visibly nonzero mod (p^N, T^MT).
bool torsion_certified(const LambdaPresentation& P);

}  // namespace mulab
