#include "mulab/lambda_structure.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mulab/errors.hpp"

namespace mulab {

namespace {

using Series = std::vector<i64>;

Series truncate(const SeriesCoeffs& c, int MT, i64 m) {
    Series s(static_cast<size_t>(MT), 0);
    for (size_t i = 0; i < c.size() && i < s.size(); ++i) s[i] = mod_norm(c[i], m);
    return s;
}

Series mul(const Series& a, const Series& b, i64 m) {
    size_t n = a.size();
    Series r(n, 0);
    for (size_t i = 0; i < n; ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; i + j < n; ++j)
            if (b[j]) r[i + j] = (r[i + j] + mod_mul(a[i], b[j], m)) % m;
    }
    return r;
}

int t_valuation(const Series& s) {
    for (size_t i = 0; i < s.size(); ++i)
        if (s[i]) return static_cast<int>(i);
    return static_cast<int>(s.size());
}

// Inverse of a unit power series over F_p.
Series inverse_mod_p(const Series& u, i64 p) {
    size_t n = u.size();
    Series r(n, 0);
    i64 inv0 = mod_inv(u[0], p);
    r[0] = inv0;
    for (size_t k = 1; k < n; ++k) {
        i64 acc = 0;
        for (size_t j = 1; j <= k; ++j) acc = (acc + u[j] * r[k - j]) % p;
        r[k] = mod_norm(-acc * inv0, p);
    }
    return r;
}

SmithRank smith_once(const SeriesMatrix& A, i64 p, int MT) {
    std::vector<std::vector<Series>> M;
    for (const auto& row : A) {
        std::vector<Series> r;
        for (const auto& e : row) r.push_back(truncate(e, MT, p));
        M.push_back(r);
    }
    size_t rows = M.size(), cols = rows ? M[0].size() : 0;
    std::vector<bool> row_used(rows, false), col_used(cols, false);
    SmithRank out;
    while (true) {
        int best = MT;
        size_t pr = 0, pc = 0;
        for (size_t i = 0; i < rows; ++i) {
            if (row_used[i]) continue;
            for (size_t j = 0; j < cols; ++j) {
                if (col_used[j]) continue;
                int v = t_valuation(M[i][j]);
                if (v < best) {
                    best = v;
                    pr = i;
                    pc = j;
                }
            }
        }
        if (best >= MT) break;
        // Unit part of the pivot, known modulo T^(MT - best).
        Series u(static_cast<size_t>(MT), 0);
        for (int k = best; k < MT; ++k) u[k - best] = M[pr][pc][k];
        Series uinv = inverse_mod_p(u, p);
        for (size_t i = 0; i < rows; ++i) {
            if (i == pr || row_used[i] || t_valuation(M[i][pc]) >= MT) continue;
            Series e(static_cast<size_t>(MT), 0);
            for (int k = best; k < MT; ++k) e[k - best] = M[i][pc][k];
            Series q = mul(e, uinv, p);
            for (size_t j = 0; j < cols; ++j) {
                if (col_used[j]) continue;
                Series d = mul(q, M[pr][j], p);
                for (int k = 0; k < MT; ++k) M[i][j][k] = mod_norm(M[i][j][k] - d[k], p);
            }
        }
        row_used[pr] = true;
        col_used[pc] = true;
        out.exponents.push_back(best);
    }
    std::sort(out.exponents.begin(), out.exponents.end());
    out.rank = static_cast<int>(out.exponents.size());
    return out;
}

int content(const Series& s, i64 p, int N) {
    int c = N;
    for (i64 v : s)
        if (v) c = std::min(c, vp(v, p, N));
    return c;
}

// Elementary p-exponents of the presentation over the localization of
// Lambda at (p), whose residue field is F_p((T)). Exponents >= N are
// reported as N (indistinguishable from zero at this precision).
std::vector<int> p_exponents(const LambdaPresentation& P, int MT) {
    i64 p = P.p;
    int N = P.N;
    i64 m = ipow(p, N);
    std::vector<std::vector<Series>> M;
    for (const auto& row : P.rows) {
        std::vector<Series> r;
        for (const auto& e : row) r.push_back(truncate(e, MT, m));
        M.push_back(r);
    }
    size_t rows = M.size(), cols = P.num_cols();
    std::vector<bool> row_used(rows, false), col_used(cols, false);
    std::vector<int> exps;
    while (true) {
        int best = N, best_t = MT;
        size_t pr = 0, pc = 0;
        for (size_t i = 0; i < rows; ++i) {
            if (row_used[i]) continue;
            for (size_t j = 0; j < cols; ++j) {
                if (col_used[j]) continue;
                int c = content(M[i][j], p, N);
                if (c > best) continue;
                // Among entries of minimal content prefer the one whose unit
                // part has the smallest T-valuation mod p: it loses the least
                // truncated information when used as a multiplier.
                int tv = MT;
                for (int k = 0; k < MT; ++k)
                    if (vp(M[i][j][k], p, N) == c) {
                        tv = k;
                        break;
                    }
                if (c < best || tv < best_t) {
                    best = c;
                    best_t = tv;
                    pr = i;
                    pc = j;
                }
            }
        }
        if (best >= N) break;
        i64 pa = ipow(p, best);
        Series u(static_cast<size_t>(MT));
        for (int k = 0; k < MT; ++k) u[k] = M[pr][pc][k] / pa;
        for (size_t i = 0; i < rows; ++i) {
            if (i == pr || row_used[i]) continue;
            if (content(M[i][pc], p, N) >= N) continue;
            Series w(static_cast<size_t>(MT));
            for (int k = 0; k < MT; ++k) w[k] = M[i][pc][k] / pa;
            for (size_t j = 0; j < cols; ++j) {
                if (col_used[j]) continue;
                Series a = mul(u, M[i][j], m);
                Series b = mul(w, M[pr][j], m);
                for (int k = 0; k < MT; ++k) M[i][j][k] = mod_norm(a[k] - b[k], m);
            }
        }
        row_used[pr] = true;
        col_used[pc] = true;
        exps.push_back(best);
    }
    // Columns without a pivot: free, or p-torsion beyond the working precision.
    size_t missing = cols - exps.size();
    for (size_t k = 0; k < missing; ++k) exps.push_back(N);
    std::sort(exps.begin(), exps.end());
    return exps;
}

std::vector<int> ranks_from_exponents(const std::vector<int>& exps, int N) {
    std::vector<int> q(static_cast<size_t>(N), 0);
    for (int k = 1; k <= N; ++k)
        for (int e : exps)
            if (e >= k) ++q[k - 1];
    return q;
}

void validate(const LambdaPresentation& P) {
    if (P.p < 3 || !is_prime(P.p)) throw Error("InvalidPresentation", "p must be an odd prime");
    if (P.N < 1 || P.MT < 1) throw Error("InvalidPresentation", "N and MT must be positive");
    if (P.rows.empty() || P.num_cols() == 0) throw Error("InvalidPresentation", "empty relation matrix");
    for (const auto& r : P.rows)
        if (r.size() != P.num_cols()) throw Error("InvalidPresentation", "ragged relation matrix");
}

}  // namespace

SmithRank smith_rank_over_power_series_field_char_p(const SeriesMatrix& A, i64 p, int MT) {
    SmithRank a = smith_once(A, p, MT);
    SmithRank b = smith_once(A, p, 2 * MT);
    if (a.rank != b.rank || a.exponents != b.exponents)
        throw Error("TruncationUnresolved", "pivot structure changes between T^" + std::to_string(MT) + " and T^" +
                                                std::to_string(2 * MT));
    return a;
}

std::vector<int> graded_ranks(const LambdaPresentation& P) {
    validate(P);
    auto q = ranks_from_exponents(p_exponents(P, P.MT), P.N);
    auto q2 = ranks_from_exponents(p_exponents(P, 2 * P.MT), P.N);
    if (q != q2) throw Error("TruncationUnresolved", "graded ranks change when the T-truncation is doubled");
    for (size_t k = 1; k < q.size(); ++k)
        if (q[k] > q[k - 1]) throw Error("InvariantViolation", "graded ranks are not non-increasing");
    // The first graded piece is M/pM, presented by the relation matrix mod p.
    SmithRank s = smith_rank_over_power_series_field_char_p(P.rows, P.p, P.MT);
    if (q[0] != static_cast<int>(P.num_cols()) - s.rank)
        throw Error("InvariantViolation", "q_1 disagrees with the F_p[[T]] rank of the reduction");
    return q;
}

MuProfile mu_profile(const LambdaPresentation& P) {
    auto q = graded_ranks(P);
    int N = P.N;
    if (q[N - 1] > 0)
        throw Error("PrecisionInsufficient", "q_N = " + std::to_string(q[N - 1]) + " > 0; profile is only a lower bound at N = " +
                                                 std::to_string(N));
    MuProfile out;
    std::vector<int> mu(static_cast<size_t>(N), 0);
    for (int i = 1; i <= N; ++i) mu[i - 1] = q[i - 1] - (i < N ? q[i] : 0);
    for (int i = 1; i <= N; ++i)
        if (mu[i - 1] > 0) out.t = i;
    if (out.t == 0) {
        out.mu_vector = {0};
    } else {
        out.mu_vector.assign(mu.begin(), mu.begin() + out.t);
    }
    for (int i = 1; i <= out.t; ++i) {
        out.mu += i * mu[i - 1];
        out.r += mu[i - 1];
    }
    int check_mu = 0, check_r = 0;
    for (size_t i = 0; i < out.mu_vector.size(); ++i) {
        check_mu += static_cast<int>(i + 1) * out.mu_vector[i];
        check_r += out.mu_vector[i];
    }
    if (check_mu != out.mu || check_r != out.r || (out.t > 0 && out.mu_vector.back() == 0))
        throw Error("InvariantViolation", "mu-profile bookkeeping failed");
    return out;
}

bool torsion_certified(const LambdaPresentation& P) {
    validate(P);
    auto e = p_exponents(P, P.MT);
    return std::all_of(e.begin(), e.end(), [&](int x) { return x < P.N; });
}

LambdaPresentation parse_presentation(const std::string& json_text) {
    LambdaPresentation P;
    try {
        auto j = nlohmann::json::parse(json_text);
        P.p = j.at("p").get<i64>();
        P.N = j.at("N").get<int>();
        P.MT = j.at("MT").get<int>();
        for (const auto& row : j.at("rows")) {
            std::vector<SeriesCoeffs> r;
            for (const auto& e : row) r.push_back(e.get<SeriesCoeffs>());
            P.rows.push_back(r);
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error("ParseError", e.what());
    }
    validate(P);
    return P;
}

LambdaPresentation load_presentation(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("ParseError", "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_presentation(ss.str());
}

}  // namespace mulab
