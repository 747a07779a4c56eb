#include "mulab/modsym.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mulab/errors.hpp"

namespace mulab {

namespace {

const long double kPi = 3.141592653589793238462643383279502884L;

ManinQuotient build_quotient(size_t n, const QMatrix& relations) {
    Rref e = rref(relations, n);
    std::vector<bool> is_piv(n, false);
    for (size_t c : e.pivots) is_piv[c] = true;
    ManinQuotient q;
    std::vector<size_t> free_pos(n, 0);
    for (size_t j = 0; j < n; ++j)
        if (!is_piv[j]) {
            free_pos[j] = q.basis_generators.size();
            q.basis_generators.push_back(j);
        }
    q.gen_vectors.assign(n, QVector(q.dim(), 0));
    for (size_t j = 0; j < n; ++j)
        if (!is_piv[j]) q.gen_vectors[j][free_pos[j]] = 1;
    for (size_t r = 0; r < e.pivots.size(); ++r) {
        size_t j = e.pivots[r];
        for (size_t k = 0; k < q.dim(); ++k) q.gen_vectors[j][k] = -e.R[r][q.basis_generators[k]];
    }
    return q;
}

mpz_class inverse_mod(const mpz_class& a, const mpz_class& m) {
    if (m == 0) return a > 0 ? 1 : -1;
    if (m == 1) return 0;
    mpz_class r;
    mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

// Coordinates of w in the span of the given basis vectors.
QVector coordinates(const std::vector<QVector>& basis, const QVector& w) {
    size_t dim = w.size(), k = basis.size();
    QMatrix A(dim, QVector(k + 1, 0));
    for (size_t i = 0; i < dim; ++i) {
        for (size_t j = 0; j < k; ++j) A[i][j] = basis[j][i];
        A[i][k] = w[i];
    }
    Rref e = rref(A, k + 1);
    QVector x(k, 0);
    for (size_t r = 0; r < e.pivots.size(); ++r) {
        if (e.pivots[r] == k) throw Error("NotInSpan", "vector outside the subspace");
        x[e.pivots[r]] = e.R[r][k];
    }
    return x;
}

// Best rational approximation with bounded denominator.
mpq_class rationalize(long double x, long max_den) {
    long double v = x;
    mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    for (int it = 0; it < 40; ++it) {
        long double fl = std::floor(v);
        mpz_class a(static_cast<double>(fl));
        mpz_class h2 = a * h1 + h0, k2 = a * k1 + k0;
        if (k2 > max_den) break;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        long double frac = v - fl;
        if (frac < 1e-15L) break;
        v = 1 / frac;
    }
    mpq_class r(h1, k1);
    r.canonicalize();
    return r;
}

}  // namespace

i64 genus_x0(i64 N) {
    i64 mu = N;
    for (auto [q, e] : factor_small(N)) mu = mu / q * (q + 1);
    i64 nu2 = 0, nu3 = 0;
    if (N % 4 != 0) {
        nu2 = 1;
        for (auto [q, e] : factor_small(N)) nu2 *= (q == 2) ? 1 : (q % 4 == 1 ? 2 : 0);
    }
    if (N % 9 != 0) {
        nu3 = 1;
        for (auto [q, e] : factor_small(N)) nu3 *= (q == 3) ? 1 : (q % 3 == 1 ? 2 : 0);
    }
    i64 cusps = cusp_count_x0(N);
    // g = 1 + mu/12 - nu2/4 - nu3/3 - cusps/2, computed over 12.
    return (12 + mu - 3 * nu2 - 4 * nu3 - 6 * cusps) / 12;
}

i64 cusp_count_x0(i64 N) {
    i64 total = 0;
    for (i64 d = 1; d <= N; ++d) {
        if (N % d) continue;
        i64 g = gcd64(d, N / d), phi = g;
        for (auto [q, e] : factor_small(g)) phi = phi / q * (q - 1);
        total += phi;
    }
    return total;
}

std::vector<std::array<i64, 4>> heilbronn_matrices(i64 ell) {
    std::vector<std::array<i64, 4>> H;
    for (i64 a = 1; a <= ell; ++a)
        for (i64 d = 1; d <= ell; ++d)
            for (i64 b = 0; b < a; ++b) {
                i64 rest = a * d - ell;
                if (rest < 0) continue;
                if (b == 0) {
                    if (rest == 0)
                        for (i64 c = 0; c < d; ++c) H.push_back({a, 0, c, d});
                    continue;
                }
                if (rest % b) continue;
                i64 c = rest / b;
                if (c < d) H.push_back({a, b, c, d});
            }
    return H;
}

ManinSymbolSpace::ManinSymbolSpace(i64 N) : N_(N) {
    if (N < 1) throw Error("BadLevel", "level must be positive");
    index_.assign(static_cast<size_t>(N * N), -1);
    std::vector<i64> units;
    for (i64 u = 1; u <= N; ++u)
        if (gcd64(u, N) == 1) units.push_back(u % N);
    std::map<std::pair<i64, i64>, size_t> seen;
    for (i64 c = 0; c < N; ++c)
        for (i64 d = 0; d < N; ++d) {
            if (gcd64(gcd64(c, d), N) != 1 && N > 1) continue;
            std::pair<i64, i64> best{N, N};
            for (i64 u : units) best = std::min(best, std::pair<i64, i64>{u * c % N, u * d % N});
            auto it = seen.find(best);
            if (it == seen.end()) {
                it = seen.emplace(best, gens_.size()).first;
                gens_.push_back(best);
            }
            index_[c * N + d] = static_cast<i64>(it->second);
        }
    size_t n = gens_.size();
    QMatrix rel_full, rel_plus;
    for (const auto& [c, d] : gens_) {
        QVector two(n, 0), three(n, 0), star(n, 0);
        two[index(c, d)] += 1;
        two[index(d, -c)] += 1;
        three[index(c, d)] += 1;
        three[index(d, -c - d)] += 1;
        three[index(-c - d, c)] += 1;
        star[index(c, d)] += 1;
        star[index(-c, d)] -= 1;
        rel_full.push_back(two);
        rel_full.push_back(three);
        rel_plus.push_back(two);
        rel_plus.push_back(three);
        rel_plus.push_back(star);
    }
    full_ = build_quotient(n, rel_full);
    plus_ = build_quotient(n, rel_plus);

    // Boundary map on generators: (c:d) is g{0, oo} for g = [a b; c d] in SL_2(Z),
    // with boundary [a/c] - [b/d].
    std::vector<std::vector<std::pair<size_t, int>>> boundary(n);
    for (size_t g = 0; g < n; ++g) {
        i64 c0 = gens_[g].first == 0 ? N : gens_[g].first;
        i64 d0 = gens_[g].second;
        if (N == 1) {
            c0 = 0;
            d0 = 1;
        }
        while (gcd64(c0, d0) != 1) d0 += N;
        mpz_class C = c0, D = d0, A, B, gg;
        mpz_gcdext(gg.get_mpz_t(), A.get_mpz_t(), B.get_mpz_t(), D.get_mpz_t(), C.get_mpz_t());
        B = -B;  // A d - B c = 1
        size_t k1 = cusp_class(A, C), k2 = cusp_class(B, D);
        boundary[g] = {{k1, 1}, {k2, -1}};
    }
    size_t nc = cusp_reps_.size();
    QMatrix bmat(nc, QVector(full_.dim(), 0));
    for (size_t k = 0; k < full_.dim(); ++k)
        for (auto [cusp, s] : boundary[full_.basis_generators[k]]) bmat[cusp][k] += s;
    cuspidal_ = nullspace(bmat, full_.dim());
}

size_t ManinSymbolSpace::index(i64 c, i64 d) const {
    i64 cc = mod_norm(c, N_), dd = mod_norm(d, N_);
    i64 v = index_[static_cast<size_t>(cc * N_ + dd)];
    if (v < 0) throw Error("NotInP1", "(" + std::to_string(c) + ":" + std::to_string(d) + ") is not in P^1(Z/N)");
    return static_cast<size_t>(v);
}

size_t ManinSymbolSpace::cusp_class(const mpz_class& num0, const mpz_class& den0) {
    mpz_class num = num0, den = den0;
    if (den < 0) {
        num = -num;
        den = -den;
    }
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (g != 0) {
        num /= g;
        den /= g;
    }
    mpz_class NN = N_;
    for (size_t i = 0; i < cusp_reps_.size(); ++i) {
        const auto& [p1, q1] = cusp_reps_[i];
        mpz_class s1 = inverse_mod(p1, q1), s2 = inverse_mod(num, den);
        mpz_class modulus;
        mpz_class prod = q1 * den;
        mpz_gcd(modulus.get_mpz_t(), prod.get_mpz_t(), NN.get_mpz_t());
        mpz_class diff = s1 * den - s2 * q1;
        if (modulus == 0 || mpz_divisible_p(diff.get_mpz_t(), modulus.get_mpz_t())) return i;
    }
    cusp_reps_.emplace_back(num, den);
    return cusp_reps_.size() - 1;
}

QVector ManinSymbolSpace::hecke_image(const ManinQuotient& q, size_t generator, i64 ell) const {
    QVector out(q.dim(), 0);
    auto [c, d] = gens_[generator];
    for (const auto& h : heilbronn_matrices(ell)) {
        size_t j = index(c * h[0] + d * h[2], c * h[1] + d * h[3]);
        const QVector& v = q.gen_vectors[j];
        for (size_t k = 0; k < out.size(); ++k)
            if (v[k] != 0) out[k] += v[k];
    }
    return out;
}

QMatrix ManinSymbolSpace::hecke_on_quotient(const ManinQuotient& q, i64 ell) const {
    if (N_ % ell == 0) throw Error("BadPrime", "Hecke operator requires ell not dividing the level");
    QMatrix T(q.dim(), QVector(q.dim(), 0));
    for (size_t k = 0; k < q.dim(); ++k) {
        QVector col = hecke_image(q, q.basis_generators[k], ell);
        for (size_t i = 0; i < q.dim(); ++i) T[i][k] = col[i];
    }
    return T;
}

std::map<size_t, i64> ManinSymbolSpace::path_from_infinity(i64 a, i64 m) const {
    if (m <= 0) throw Error("BadCusp", "denominator must be positive");
    a = mod_norm(a, m);
    std::map<size_t, i64> out;
    // Convergents p_j/q_j of a/m; ps/qs carry p_{-2}/q_{-2} = 0/1 and p_{-1}/q_{-1} = 1/0.
    std::vector<mpz_class> qs{1, 0};
    mpz_class x = a, y = m;
    while (y != 0) {
        mpz_class qt;
        mpz_fdiv_q(qt.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
        qs.push_back(qt * qs.back() + qs[qs.size() - 2]);
        mpz_class r = x - qt * y;
        x = y;
        y = r;
    }
    // {oo, a/m} = sum_{j >= 0} ((-1)^{j-1} q_j : q_{j-1}).
    for (size_t t = 2; t < qs.size(); ++t) {
        size_t j = t - 2;
        i64 qj = mpz_mod(qs[t], N_), qprev = mpz_mod(qs[t - 1], N_);
        i64 c = (j % 2 == 0) ? -qj : qj;
        out[index(c, qprev)] += 1;
    }
    return out;
}

QMatrix hecke_operator(const ManinSymbolSpace& S, i64 ell) {
    const auto& B = S.cuspidal_basis();
    if (B.empty()) return {};
    QMatrix Tfull = S.hecke_on_quotient(S.full(), ell);
    size_t g = B.size();
    QMatrix out(g, QVector(g, 0));
    for (size_t k = 0; k < g; ++k) {
        QVector img(S.full().dim(), 0);
        for (size_t i = 0; i < img.size(); ++i)
            for (size_t j = 0; j < img.size(); ++j)
                if (Tfull[i][j] != 0 && B[k][j] != 0) img[i] += Tfull[i][j] * B[k][j];
        QVector x = coordinates(B, img);
        for (size_t i = 0; i < g; ++i) out[i][k] = x[i];
    }
    return out;
}

EigenSymbol eigen_symbol_raw(const ManinSymbolSpace& S, const std::map<i64, i64>& a_table) {
    const ManinQuotient& Q = S.plus();
    size_t d = Q.dim();
    std::vector<QVector> K;
    for (size_t i = 0; i < d; ++i) {
        QVector e(d, 0);
        e[i] = 1;
        K.push_back(e);
    }
    EigenSymbol es;
    es.level = S.level();
    int used_after_one = 0;
    for (auto [ell, a] : a_table) {
        if (S.level() % ell == 0 || !is_prime(ell)) continue;
        if (K.size() <= 1 && used_after_one >= 3) break;
        QMatrix T = S.hecke_on_quotient(Q, ell);
        // Constraint (T^t - a) phi = 0 restricted to phi in span(K).
        QMatrix M(d, QVector(K.size(), 0));
        for (size_t k = 0; k < K.size(); ++k)
            for (size_t i = 0; i < d; ++i) {
                mpq_class s = -a * K[k][i];
                for (size_t j = 0; j < d; ++j)
                    if (T[j][i] != 0) s += T[j][i] * K[k][j];
                M[i][k] = s;
            }
        auto ns = nullspace(M, K.size());
        std::vector<QVector> next;
        for (const auto& x : ns) {
            QVector v(d, 0);
            for (size_t k = 0; k < K.size(); ++k)
                if (x[k] != 0)
                    for (size_t i = 0; i < d; ++i) v[i] += x[k] * K[k][i];
            next.push_back(v);
        }
        K = next;
        es.a_table[ell] = a;
        if (K.size() <= 1) ++used_after_one;
        if (K.empty()) break;
    }
    if (K.empty()) throw Error("EigenspaceNotRational", "no rational eigenvector matches the a_l table");
    if (K.size() > 1) throw Error("EigenspaceNotOneDimensional", "eigenspace has dimension " + std::to_string(K.size()));
    QVector phi = K[0];
    mpq_class lead = 0;
    for (auto& v : phi)
        if (v != 0) {
            lead = v;
            break;
        }
    for (auto& v : phi) v /= lead;
    es.gen_values.assign(S.num_generators(), 0);
    for (size_t g = 0; g < S.num_generators(); ++g)
        for (size_t k = 0; k < d; ++k) es.gen_values[g] += phi[k] * Q.gen_vectors[g][k];
    es.scale = 1;
    es.denominator = 1;
    for (const auto& v : es.gen_values) mpz_lcm(es.denominator.get_mpz_t(), es.denominator.get_mpz_t(), v.get_den_mpz_t());
    es.normalization_id = "raw";
    return es;
}

long double numeric_plus_value(const std::vector<i64>& an, i64 a, i64 c) {
    i64 d = mod_inv(a, c);
    std::complex<long double> tau(-static_cast<long double>(d) / c, 1.0L / c);
    std::complex<long double> gtau(static_cast<long double>(mod_norm(a, c)) / c, 1.0L / c);
    // F is 1-periodic, so reducing a mod c leaves F(gamma tau) unchanged.
    return (eichler_integral(an, gtau) - eichler_integral(an, tau)).real();
}

EigenSymbol eigen_symbol(const ManinSymbolSpace& S, const EllipticCurve& E, const std::map<i64, i64>& a_table) {
    EigenSymbol es = eigen_symbol_raw(S, a_table);
    long double omega = real_period(E);
    i64 N = S.level();
    // Compare exact raw values with numerically integrated ones along
    // several Gamma_0(N) paths; each gives an estimate of the scale factor.
    std::vector<long double> estimates;
    for (i64 k = 1; k <= 12 && estimates.size() < 3; ++k) {
        i64 c = N * k;
        auto an = an_table(E, 14 * c + 200);
        for (i64 a = 1; a < c && estimates.size() < 3; ++a) {
            if (gcd64(a, c) != 1) continue;
            mpq_class raw = evaluate_symbol(S, es, a, c);
            if (raw == 0) continue;
            long double num = numeric_plus_value(an, a, c);
            estimates.push_back(num / (omega * static_cast<long double>(raw.get_d())));
        }
    }
    if (estimates.empty()) throw Error("NormalizationFailed", "every probed symbol value vanished");
    mpq_class s = rationalize(estimates[0], 100000);
    for (long double e : estimates)
        if (std::fabs(e - static_cast<long double>(s.get_d())) > 1e-7L * std::max(1.0L, std::fabs(e)))
            throw Error("NormalizationFailed", "period estimates do not rationalize consistently");
    es.scale = s;
    for (auto& v : es.gen_values) v *= s;
    es.denominator = 1;
    for (const auto& v : es.gen_values) mpz_lcm(es.denominator.get_mpz_t(), es.denominator.get_mpz_t(), v.get_den_mpz_t());
    es.normalization_id = "neron-real-period/" + E.label + "/" + s.get_str();
    return es;
}

mpq_class evaluate_symbol(const ManinSymbolSpace& S, const EigenSymbol& es, i64 a, i64 m) {
    if (gcd64(a, m) != 1) throw Error("BadCusp", "gcd(a, m) must be 1");
    mpq_class total = 0;
    for (auto [g, mult] : S.path_from_infinity(a, m)) total += mult * es.gen_values[g];
    return total;
}

}  // namespace mulab
