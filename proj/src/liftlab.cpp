#include "mulab/liftlab.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mulab/errors.hpp"
#include "mulab/linalg.hpp"

namespace mulab {

namespace {

constexpr size_t kNone = static_cast<size_t>(-1);

const Mat2 kId{1, 0, 0, 1};

Mat2 lift_entries(const Mat2& A, i64 m) { return reduce(A, m); }

// 1 + p^n X with X over F_p, as a matrix mod p^{n+1}.
Mat2 one_plus(const Mat2& X, i64 pn, i64 m) { return reduce(add(kId, scale(X, pn, m), m), m); }

}  // namespace

// ----- Finite groups

struct GroupBuilder {
    template <class K, class F>
    static FiniteGroup build(const std::vector<K>& gens, const K& id, F compose, size_t bound) {
        FiniteGroup G;
        std::map<K, size_t> index;
        std::vector<K> elts{id};
        index[id] = 0;
        G.parent_.push_back(0);
        G.pgen_.push_back(kNone);
        for (size_t q = 0; q < elts.size(); ++q) {
            for (size_t s = 0; s < gens.size(); ++s) {
                K e = compose(elts[q], gens[s]);
                if (index.count(e)) continue;
                if (elts.size() >= bound) throw Error("SizeBound", "group order exceeds " + std::to_string(bound));
                index[e] = elts.size();
                elts.push_back(e);
                G.parent_.push_back(q);
                G.pgen_.push_back(s);
            }
        }
        size_t n = elts.size();
        for (size_t i = 0; i < n; ++i) G.bfs_.push_back(i);
        for (const auto& g : gens) G.gens_.push_back(index.at(compose(id, g)));
        G.table_.assign(n * n, 0);
        for (size_t a = 0; a < n; ++a)
            for (size_t b = 0; b < n; ++b) G.table_[a * n + b] = index.at(compose(elts[a], elts[b]));
        G.inv_.assign(n, kNone);
        for (size_t a = 0; a < n; ++a)
            for (size_t b = 0; b < n; ++b)
                if (G.table_[a * n + b] == 0) {
                    G.inv_[a] = b;
                    break;
                }
        for (size_t a = 0; a < n; ++a)
            if (G.inv_[a] == kNone) throw Error("NotAGroup", "element without inverse");
        if (n <= 200 && !G.verify_associativity()) throw Error("NotAGroup", "multiplication is not associative");
        return G;
    }
};

FiniteGroup FiniteGroup::from_permutations(const std::vector<std::vector<int>>& gens, size_t bound) {
    if (gens.empty()) throw Error("InvalidScenario", "no generators");
    size_t deg = gens[0].size();
    std::vector<int> id(deg);
    for (size_t i = 0; i < deg; ++i) id[i] = static_cast<int>(i);
    for (const auto& g : gens) {
        if (g.size() != deg) throw Error("InvalidScenario", "permutations of different degrees");
        std::vector<int> sorted = g;
        std::sort(sorted.begin(), sorted.end());
        if (sorted != id) throw Error("InvalidScenario", "generator is not a permutation");
    }
    auto compose = [](const std::vector<int>& a, const std::vector<int>& b) {
        std::vector<int> c(a.size());
        for (size_t i = 0; i < a.size(); ++i) c[i] = a[b[i]];
        return c;
    };
    return GroupBuilder::build(gens, id, compose, bound);
}

FiniteGroup FiniteGroup::from_matrices(const std::vector<Mat2>& gens, i64 modulus, size_t bound) {
    std::vector<Mat2> g;
    for (const auto& A : gens) {
        Mat2 B = reduce(A, modulus);
        if (gcd64(det(B, modulus), modulus) != 1) throw Error("InvalidScenario", "singular generator matrix");
        g.push_back(B);
    }
    auto compose = [modulus](const Mat2& a, const Mat2& b) { return mulab::mul(a, b, modulus); };
    return GroupBuilder::build(g, reduce(kId, modulus), compose, bound);
}

FiniteGroup FiniteGroup::subgroup(const std::vector<size_t>& gens, std::vector<size_t>& embedding) const {
    auto compose = [this](size_t a, size_t b) { return mul(a, b); };
    FiniteGroup H = GroupBuilder::build(gens, size_t{0}, compose, order() + 1);
    // Recover the embedding by replaying the spanning tree.
    embedding.assign(H.order(), 0);
    for (size_t h : H.bfs_order())
        if (h != 0) embedding[h] = mul(embedding[H.tree_parent(h)], gens[H.tree_generator(h)]);
    return H;
}

size_t FiniteGroup::word(const std::vector<int>& w) const {
    size_t r = 0;
    for (int i : w) {
        if (i < 0 || static_cast<size_t>(i) >= gens_.size())
            throw Error("InvalidScenario", "generator index out of range in word");
        r = mul(r, gens_[i]);
    }
    return r;
}

bool FiniteGroup::verify_associativity() const {
    size_t n = order();
    for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b)
            for (size_t c = 0; c < n; ++c)
                if (mul(mul(a, b), c) != mul(a, mul(b, c))) return false;
    return true;
}

std::vector<Mat2> extend_images(const FiniteGroup& G, const std::vector<Mat2>& gen_images, i64 m) {
    if (gen_images.size() != G.num_generators()) throw Error("InvalidScenario", "wrong number of generator images");
    std::vector<Mat2> img(G.order());
    img[0] = reduce(kId, m);
    for (size_t g : G.bfs_order())
        if (g != 0) img[g] = mul(img[G.tree_parent(g)], reduce(gen_images[G.tree_generator(g)], m), m);
    return img;
}

bool is_homomorphism(const FiniteGroup& G, const std::vector<Mat2>& gen_images, i64 m) {
    auto img = extend_images(G, gen_images, m);
    for (size_t g = 0; g < G.order(); ++g)
        for (size_t s = 0; s < G.num_generators(); ++s)
            if (img[G.mul(g, G.generators()[s])] != mul(img[g], reduce(gen_images[s], m), m)) return false;
    return true;
}

std::vector<i64> extend_character(const FiniteGroup& G, const std::vector<i64>& gen_values, i64 m) {
    if (gen_values.size() != G.num_generators()) throw Error("InvalidScenario", "wrong number of character values");
    std::vector<i64> val(G.order());
    val[0] = 1 % m;
    for (size_t g : G.bfs_order())
        if (g != 0) val[g] = mod_mul(val[G.tree_parent(g)], mod_norm(gen_values[G.tree_generator(g)], m), m);
    for (size_t g = 0; g < G.order(); ++g)
        for (size_t s = 0; s < G.num_generators(); ++s)
            if (val[G.mul(g, G.generators()[s])] != mod_mul(val[g], mod_norm(gen_values[s], m), m))
                throw Error("NotMultiplicative", "determinant values do not define a character");
    return val;
}

std::vector<i64> teichmuller_determinant(const FiniteGroup& G, const std::vector<Mat2>& rhobar_gens, i64 p, int N) {
    i64 m = ipow(p, N);
    std::vector<i64> vals;
    for (const auto& A : rhobar_gens) vals.push_back(mod_pow(det(reduce(A, p), p), ipow(p, N - 1), m));
    return extend_character(G, vals, m);
}

// ----- Adjoint module

AdjointModule::AdjointModule(const FiniteGroup& G, const std::vector<Mat2>& rhobar_gens, i64 p, Submodule which)
    : p_(p), which_(which) {
    if (!is_homomorphism(G, rhobar_gens, p)) throw Error("NotHomomorphism", "residual images do not define a representation");
    rhobar_all_ = extend_images(G, rhobar_gens, p);
    const Mat2 E12{0, 1, 0, 0}, H{1, 0, 0, p - 1}, E21{0, 0, 1, 0};
    switch (which) {
        case Submodule::Ad0: basis_ = {E12, H, E21}; break;
        case Submodule::N: basis_ = {E12}; break;
        case Submodule::B: basis_ = {E12, H}; break;
    }
    act_.resize(G.order());
    for (size_t g = 0; g < G.order(); ++g) {
        auto& A = act_[g];
        A.assign(dim(), std::vector<i64>(dim(), 0));
        for (size_t j = 0; j < dim(); ++j) {
            auto c = coords(conj(rhobar_all_[g], basis_[j], p));
            for (size_t i = 0; i < dim(); ++i) A[i][j] = c[i];
        }
    }
}

std::vector<i64> AdjointModule::coords(const Mat2& v0) const {
    Mat2 v = reduce(v0, p_);
    if ((v.a + v.d) % p_ != 0) throw Error("NotInSubmodule", "matrix has nonzero trace");
    switch (which_) {
        case Submodule::Ad0: return {v.b, v.a, v.c};
        case Submodule::N:
            if (v.a || v.c) throw Error("NotInSubmodule", "matrix is not strictly upper triangular");
            return {v.b};
        case Submodule::B:
            if (v.c) throw Error("NotInSubmodule", "matrix is not upper triangular");
            return {v.b, v.a};
    }
    return {};
}

Mat2 AdjointModule::matrix(const std::vector<i64>& c) const {
    Mat2 r{0, 0, 0, 0};
    for (size_t i = 0; i < dim(); ++i) r = add(r, scale(basis_[i], c[i], p_), p_);
    return r;
}

std::vector<i64> AdjointModule::act(size_t g, const std::vector<i64>& v) const {
    std::vector<i64> r(dim(), 0);
    for (size_t i = 0; i < dim(); ++i)
        for (size_t j = 0; j < dim(); ++j) r[i] = (r[i] + act_[g][i][j] * v[j]) % p_;
    return r;
}

// ----- Cochains and cohomology

bool Cochain::is_zero() const {
    return std::all_of(values.begin(), values.end(), [](i64 x) { return x == 0; });
}

namespace {

// f(g) as a linear function of generator values: one dim x (r*dim) matrix per element.
std::vector<FpMatrix> tree_maps(const FiniteGroup& G, const AdjointModule& M) {
    size_t d = M.dim(), r = G.num_generators(), cols = r * d;
    i64 p = M.prime();
    std::vector<FpMatrix> F(G.order(), FpMatrix(d, std::vector<i64>(cols, 0)));
    for (size_t g : G.bfs_order()) {
        if (g == 0) continue;
        size_t par = G.tree_parent(g), s = G.tree_generator(g);
        F[g] = F[par];
        const auto& A = M.action(par);
        for (size_t i = 0; i < d; ++i)
            for (size_t j = 0; j < d; ++j) F[g][i][s * d + j] = (F[g][i][s * d + j] + A[i][j]) % p;
    }
    return F;
}

std::vector<std::vector<i64>> independent_extension(const std::vector<std::vector<i64>>& base,
                                                    const std::vector<std::vector<i64>>& candidates, size_t cols,
                                                    i64 p, std::vector<size_t>& chosen) {
    FpMatrix acc = base;
    size_t rk = rank_fp(acc, cols, p);
    std::vector<std::vector<i64>> out;
    for (size_t i = 0; i < candidates.size(); ++i) {
        acc.push_back(candidates[i]);
        size_t r2 = rank_fp(acc, cols, p);
        if (r2 > rk) {
            rk = r2;
            out.push_back(candidates[i]);
            chosen.push_back(i);
        } else {
            acc.pop_back();
        }
    }
    return out;
}

std::vector<i64> combine(const std::vector<std::vector<i64>>& basis, const std::vector<i64>& coeffs, size_t len,
                         i64 p) {
    std::vector<i64> v(len, 0);
    for (size_t i = 0; i < basis.size(); ++i)
        if (coeffs[i])
            for (size_t j = 0; j < len; ++j) v[j] = (v[j] + coeffs[i] * basis[i][j]) % p;
    return v;
}

// Advances a base-p counter; false after the last value.
bool next_counter(std::vector<i64>& c, i64 p) {
    for (auto& x : c) {
        if (++x < p) return true;
        x = 0;
    }
    return false;
}

long checked_power(i64 p, size_t e, long bound) {
    long r = 1;
    for (size_t i = 0; i < e; ++i) {
        if (r > bound / p) throw Error("SizeBound", "search space exceeds " + std::to_string(bound));
        r *= p;
    }
    return r;
}

}  // namespace

std::vector<std::vector<i64>> cocycle_space(const FiniteGroup& G, const AdjointModule& M) {
    size_t d = M.dim(), r = G.num_generators(), cols = r * d;
    i64 p = M.prime();
    if (cols == 0) return {};
    auto F = tree_maps(G, M);
    FpMatrix rows;
    for (size_t g = 0; g < G.order(); ++g) {
        const auto& A = M.action(g);
        for (size_t s = 0; s < r; ++s) {
            size_t gs = G.mul(g, G.generators()[s]);
            for (size_t i = 0; i < d; ++i) {
                std::vector<i64> row(cols);
                for (size_t c = 0; c < cols; ++c) row[c] = mod_norm(F[gs][i][c] - F[g][i][c], p);
                for (size_t j = 0; j < d; ++j) row[s * d + j] = mod_norm(row[s * d + j] - A[i][j], p);
                if (std::any_of(row.begin(), row.end(), [](i64 x) { return x != 0; })) rows.push_back(row);
            }
        }
    }
    if (rows.empty()) {
        std::vector<std::vector<i64>> id(cols, std::vector<i64>(cols, 0));
        for (size_t i = 0; i < cols; ++i) id[i][i] = 1;
        return id;
    }
    return nullspace_fp(rows, cols, p);
}

Cochain extend_cocycle(const FiniteGroup& G, const AdjointModule& M, const std::vector<i64>& u) {
    auto F = tree_maps(G, M);
    size_t d = M.dim();
    Cochain c{1, G.order(), d, std::vector<i64>(G.order() * d, 0)};
    for (size_t g = 0; g < G.order(); ++g)
        for (size_t i = 0; i < d; ++i) {
            i64 s = 0;
            for (size_t k = 0; k < u.size(); ++k) s = (s + F[g][i][k] * u[k]) % M.prime();
            c.values[g * d + i] = s;
        }
    return c;
}

Cochain coboundary(const FiniteGroup& G, const AdjointModule& M, const Cochain& f) {
    size_t n = G.order(), d = M.dim();
    i64 p = M.prime();
    Cochain c{2, n, d, std::vector<i64>(n * n * d, 0)};
    for (size_t g = 0; g < n; ++g)
        for (size_t h = 0; h < n; ++h) {
            std::vector<i64> fh(f.values.begin() + h * d, f.values.begin() + (h + 1) * d);
            auto gfh = M.act(g, fh);
            size_t gh = G.mul(g, h);
            for (size_t i = 0; i < d; ++i)
                c.values[(g * n + h) * d + i] = mod_norm(gfh[i] - f.values[gh * d + i] + f.values[g * d + i], p);
        }
    return c;
}

CohomologyResult cohomology(const FiniteGroup& G, const AdjointModule& M, int degree, size_t max_entries) {
    size_t n = G.order(), d = M.dim();
    i64 p = M.prime();
    CohomologyResult res;
    if (degree == 1) {
        size_t r = G.num_generators(), cols = r * d;
        auto Z = cocycle_space(G, M);
        std::vector<std::vector<i64>> B;
        for (size_t j = 0; j < d; ++j) {
            std::vector<i64> e(d, 0), u(cols, 0);
            e[j] = 1;
            for (size_t s = 0; s < r; ++s) {
                auto ge = M.act(G.generators()[s], e);
                for (size_t i = 0; i < d; ++i) u[s * d + i] = mod_norm(ge[i] - e[i], p);
            }
            B.push_back(u);
        }
        res.dim_cocycles = static_cast<int>(Z.size());
        res.dim_coboundaries = cols ? static_cast<int>(rank_fp(B, cols, p)) : 0;
        res.dimension = res.dim_cocycles - res.dim_coboundaries;
        std::vector<size_t> chosen;
        for (const auto& z : independent_extension(B, Z, cols, p, chosen)) res.basis.push_back(extend_cocycle(G, M, z));
        return res;
    }
    if (degree != 2) throw Error("InvalidDegree", "cohomology degree must be 1 or 2");
    size_t cols = n * n * d, rows_count = n * n * n * d;
    if (rows_count * cols > max_entries)
        throw Error("SizeBound", "degree-2 cochain system too large for group of order " + std::to_string(n));
    FpMatrix rows;
    rows.reserve(rows_count);
    auto col = [&](size_t g, size_t h, size_t i) { return (g * n + h) * d + i; };
    for (size_t g = 0; g < n; ++g) {
        const auto& A = M.action(g);
        for (size_t h = 0; h < n; ++h)
            for (size_t k = 0; k < n; ++k)
                for (size_t i = 0; i < d; ++i) {
                    std::vector<i64> row(cols, 0);
                    for (size_t j = 0; j < d; ++j) row[col(h, k, j)] = (row[col(h, k, j)] + A[i][j]) % p;
                    auto bump = [&](size_t c, i64 v) { row[c] = mod_norm(row[c] + v, p); };
                    bump(col(G.mul(g, h), k, i), -1);
                    bump(col(g, G.mul(h, k), i), 1);
                    bump(col(g, h, i), -1);
                    rows.push_back(std::move(row));
                }
    }
    auto Z = nullspace_fp(rows, cols, p);
    std::vector<std::vector<i64>> B;
    for (size_t g0 = 0; g0 < n; ++g0)
        for (size_t i0 = 0; i0 < d; ++i0) {
            Cochain f{1, n, d, std::vector<i64>(n * d, 0)};
            f.values[g0 * d + i0] = 1;
            B.push_back(coboundary(G, M, f).values);
        }
    res.dim_cocycles = static_cast<int>(Z.size());
    res.dim_coboundaries = static_cast<int>(rank_fp(B, cols, p));
    res.dimension = res.dim_cocycles - res.dim_coboundaries;
    std::vector<size_t> chosen;
    for (auto& z : independent_extension(B, Z, cols, p, chosen)) res.basis.push_back(Cochain{2, n, d, z});
    return res;
}

// ----- Obstructions and lifting

std::vector<Mat2> set_theoretic_lift(const FiniteGroup& G, const ModPnRepresentation& rho_n,
                                     const std::vector<i64>& nu, std::mt19937_64* rng) {
    i64 p = rho_n.p, pn = rho_n.modulus(), m = pn * p;
    auto img = extend_images(G, rho_n.images, pn);
    std::vector<Mat2> tau(G.order());
    for (size_t g = 0; g < G.order(); ++g) {
        Mat2 A = lift_entries(img[g], m);
        if (rng) {
            std::uniform_int_distribution<i64> U(0, p - 1);
            A = add(A, scale(Mat2{U(*rng), U(*rng), U(*rng), U(*rng)}, pn, m), m);
        }
        i64 delta = mod_norm(nu[g] - det(A, m), m);
        if (delta % pn) throw Error("DeterminantMismatch", "det rho_n differs from the target character");
        i64 t = mod_mul((delta / pn) % p, mod_inv(mod_mul(2, det(A, p), p), p), p);
        tau[g] = add(A, scale(A, t * pn, m), m);
    }
    return tau;
}

Cochain obstruction_cochain(const FiniteGroup& G, const ModPnRepresentation& rho_n, const std::vector<Mat2>& tau) {
    i64 p = rho_n.p, pn = rho_n.modulus(), m = pn * p;
    std::vector<Mat2> rbar;
    for (const auto& A : rho_n.images) rbar.push_back(reduce(A, p));
    AdjointModule M(G, rbar, p, Submodule::Ad0);
    size_t n = G.order(), d = M.dim();
    std::vector<Mat2> tinv(n);
    for (size_t g = 0; g < n; ++g) tinv[g] = inv(tau[g], m);
    Cochain c{2, n, d, std::vector<i64>(n * n * d, 0)};
    for (size_t g = 0; g < n; ++g)
        for (size_t h = 0; h < n; ++h) {
            Mat2 O = mul(mul(tau[G.mul(g, h)], tinv[h], m), tinv[g], m);
            Mat2 D = reduce(Mat2{O.a - 1, O.b, O.c, O.d - 1}, m);
            if (D.a % pn || D.b % pn || D.c % pn || D.d % pn)
                throw Error("NotHomomorphism", "rho_n is not a homomorphism mod p^n");
            auto v = M.coords(Mat2{D.a / pn, D.b / pn, D.c / pn, D.d / pn});
            for (size_t i = 0; i < d; ++i) c.values[(g * n + h) * d + i] = v[i];
        }
    return c;
}

Cochain obstruction_class(const FiniteGroup& G, const ModPnRepresentation& rho_n, const std::vector<i64>& nu,
                          std::mt19937_64* rng) {
    return obstruction_cochain(G, rho_n, set_theoretic_lift(G, rho_n, nu, rng));
}

bool solve_coboundary(const FiniteGroup& G, const AdjointModule& M, const Cochain& c, Cochain* f) {
    size_t n = G.order(), d = M.dim(), cols = n * d;
    i64 p = M.prime();
    FpMatrix A;
    std::vector<i64> b;
    for (size_t g = 0; g < n; ++g) {
        const auto& act = M.action(g);
        for (size_t h = 0; h < n; ++h) {
            size_t gh = G.mul(g, h);
            for (size_t i = 0; i < d; ++i) {
                std::vector<i64> row(cols, 0);
                for (size_t j = 0; j < d; ++j) row[h * d + j] = (row[h * d + j] + act[i][j]) % p;
                row[gh * d + i] = mod_norm(row[gh * d + i] - 1, p);
                row[g * d + i] = (row[g * d + i] + 1) % p;
                A.push_back(std::move(row));
                b.push_back(c.values[(g * n + h) * d + i]);
            }
        }
    }
    std::vector<i64> x;
    if (!solve_fp(A, b, cols, p, x)) return false;
    if (f) *f = Cochain{1, n, d, x};
    return true;
}

ModPnRepresentation twist(const ModPnRepresentation& rho, const AdjointModule& M, const std::vector<i64>& gen_values,
                          int n) {
    i64 pn = ipow(rho.p, n), m = rho.modulus();
    ModPnRepresentation out = rho;
    size_t d = M.dim();
    for (size_t s = 0; s < rho.images.size(); ++s) {
        std::vector<i64> v(gen_values.begin() + s * d, gen_values.begin() + (s + 1) * d);
        out.images[s] = mul(one_plus(M.matrix(v), pn, m), rho.images[s], m);
    }
    return out;
}

namespace {

bool upper_triangular_up_to_strict(const std::vector<Mat2>& imgs, i64 p, i64 m) {
    for (i64 a = 0; a < m; a += p) {
        bool ok = true;
        for (const auto& M : imgs) {
            i64 lambda = mod_norm(M.a + mod_mul(M.b, a, m), m);
            if (mod_norm(M.c + mod_mul(M.d, a, m) - mod_mul(lambda, a, m), m) != 0) {
                ok = false;
                break;
            }
        }
        if (ok) return true;
    }
    return false;
}

bool condition_holds(const LocalCondition& c, const std::vector<Mat2>& imgs, i64 p, int n) {
    i64 pn = ipow(p, n), m = pn * p;
    if (c.type == "any") return true;
    if (c.type == "trivial")
        return std::all_of(imgs.begin(), imgs.end(), [&](const Mat2& A) { return reduce(A, m) == reduce(kId, m); });
    if (c.type == "upper-triangular") return upper_triangular_up_to_strict(imgs, p, m);
    if (c.type == "prescribed") {
        if (c.images.size() != imgs.size()) throw Error("InvalidScenario", "prescribed images do not match subgroup");
        Mat2 X{0, 0, 0, 0};
        for (X.a = 0; X.a < p; ++X.a)
            for (X.b = 0; X.b < p; ++X.b)
                for (X.c = 0; X.c < p; ++X.c)
                    for (X.d = 0; X.d < p; ++X.d) {
                        Mat2 A = one_plus(X, pn, m);
                        bool ok = true;
                        for (size_t i = 0; i < imgs.size() && ok; ++i)
                            ok = conj(A, imgs[i], m) == reduce(c.images[i], m);
                        if (ok) return true;
                    }
        return false;
    }
    throw Error("InvalidScenario", "unknown condition type '" + c.type + "'");
}

const std::vector<size_t>& subgroup_gens(const std::map<std::string, std::vector<size_t>>& subgroups,
                                         const std::string& label) {
    auto it = subgroups.find(label);
    if (it == subgroups.end()) throw Error("InvalidScenario", "unknown subgroup label '" + label + "'");
    return it->second;
}

bool all_conditions(const FiniteGroup& G, const ModPnRepresentation& lift, const std::vector<LocalCondition>& conds,
                    const std::map<std::string, std::vector<size_t>>& subgroups, int n) {
    auto all = extend_images(G, lift.images, lift.modulus());
    for (const auto& c : conds) {
        std::vector<Mat2> imgs;
        for (size_t e : subgroup_gens(subgroups, c.subgroup)) imgs.push_back(all[e]);
        if (!condition_holds(c, imgs, lift.p, n)) return false;
    }
    return true;
}

// Whether some lift of the restriction to the labeled subgroup meets the condition.
bool locally_satisfiable(const FiniteGroup& G, const ModPnRepresentation& lift, const LocalCondition& c,
                         const std::map<std::string, std::vector<size_t>>& subgroups, int n, long bound) {
    const auto& gens = subgroup_gens(subgroups, c.subgroup);
    std::vector<size_t> emb;
    FiniteGroup H = G.subgroup(gens, emb);
    auto all = extend_images(G, lift.images, lift.modulus());
    ModPnRepresentation local{lift.p, lift.n, {}, {}};
    std::vector<Mat2> rbar;
    for (size_t e : gens) {
        local.images.push_back(all[e]);
        rbar.push_back(reduce(all[e], lift.p));
    }
    AdjointModule MH(H, rbar, lift.p, Submodule::Ad0);
    auto Z = cocycle_space(H, MH);
    checked_power(lift.p, Z.size(), bound);
    std::vector<i64> coeff(Z.size(), 0);
    size_t len = gens.size() * MH.dim();
    do {
        auto t = twist(local, MH, combine(Z, coeff, len, lift.p), n);
        if (condition_holds(c, t.images, lift.p, n)) return true;
    } while (next_counter(coeff, lift.p));
    return false;
}

}  // namespace

LiftOutcome lift_step(const FiniteGroup& G, const ModPnRepresentation& rho_n, const std::vector<i64>& nu,
                      const std::vector<LocalCondition>& conditions,
                      const std::map<std::string, std::vector<size_t>>& subgroups, long max_twists) {
    i64 p = rho_n.p, pn = rho_n.modulus(), m = pn * p;
    int n = rho_n.n;
    if (!is_homomorphism(G, rho_n.images, pn)) throw Error("NotHomomorphism", "rho_n is not a homomorphism");
    std::vector<Mat2> rbar;
    for (const auto& A : rho_n.images) rbar.push_back(reduce(A, p));
    AdjointModule M(G, rbar, p, Submodule::Ad0);
    auto tau = set_theoretic_lift(G, rho_n, nu);
    LiftOutcome out;
    out.obstruction = obstruction_cochain(G, rho_n, tau);
    Cochain f;
    if (!solve_coboundary(G, M, out.obstruction, &f)) {
        out.obstructed = true;
        return out;
    }
    ModPnRepresentation base{p, n + 1, {}, rho_n.labels};
    size_t d = M.dim();
    for (size_t s = 0; s < G.num_generators(); ++s) {
        size_t g = G.generators()[s];
        std::vector<i64> v(f.values.begin() + g * d, f.values.begin() + (g + 1) * d);
        base.images.push_back(mul(one_plus(M.matrix(v), pn, m), tau[g], m));
    }
    if (!is_homomorphism(G, base.images, m)) throw Error("InternalError", "corrected lift is not a homomorphism");
    out.lift = base;
    if (conditions.empty()) return out;
    auto Z = cocycle_space(G, M);
    checked_power(p, Z.size(), max_twists);
    std::vector<i64> coeff(Z.size(), 0);
    size_t len = G.num_generators() * d;
    do {
        ++out.twists_tried;
        auto t = twist(base, M, combine(Z, coeff, len, p), n);
        if (all_conditions(G, t, conditions, subgroups, n)) {
            out.lift = t;
            return out;
        }
    } while (next_counter(coeff, p));
    for (const auto& c : conditions)
        if (!locally_satisfiable(G, base, c, subgroups, n, max_twists))
            throw Error("ConditionNotLiftable", "no local lift on '" + c.subgroup + "' satisfies " + c.type);
    throw Error("LocalTwistUnrealizable", "local twists exist but no global cocycle realizes them all");
}

LiftEnumeration enumerate_lifts(const FiniteGroup& G, const ModPnRepresentation& rho_n, const std::vector<i64>& nu,
                                long max_candidates) {
    i64 p = rho_n.p, pn = rho_n.modulus(), m = pn * p;
    size_t r = G.num_generators();
    std::vector<std::vector<Mat2>> cands(r);
    for (size_t s = 0; s < r; ++s) {
        Mat2 A = lift_entries(reduce(rho_n.images[s], pn), m);
        i64 target = mod_norm(nu[G.generators()[s]], m);
        Mat2 X{0, 0, 0, 0};
        for (X.a = 0; X.a < p; ++X.a)
            for (X.b = 0; X.b < p; ++X.b)
                for (X.c = 0; X.c < p; ++X.c)
                    for (X.d = 0; X.d < p; ++X.d) {
                        Mat2 B = add(A, scale(X, pn, m), m);
                        if (det(B, m) == target) cands[s].push_back(B);
                    }
    }
    long total = 1;
    for (const auto& c : cands) {
        if (c.empty()) return {};
        if (total > max_candidates / static_cast<long>(c.size()))
            throw Error("SizeBound", "lift enumeration exceeds " + std::to_string(max_candidates) + " candidates");
        total *= static_cast<long>(c.size());
    }
    LiftEnumeration res;
    std::vector<size_t> idx(r, 0);
    std::vector<Mat2> imgs(r);
    for (long t = 0; t < total; ++t) {
        for (size_t s = 0; s < r; ++s) imgs[s] = cands[s][idx[s]];
        if (is_homomorphism(G, imgs, m)) res.lifts.push_back({p, rho_n.n + 1, imgs, rho_n.labels});
        for (size_t s = 0; s < r; ++s) {
            if (++idx[s] < cands[s].size()) break;
            idx[s] = 0;
        }
    }
    std::set<std::vector<Mat2>> seen;
    for (const auto& L : res.lifts) {
        if (seen.count(L.images)) continue;
        res.classes.push_back(L);
        Mat2 X{0, 0, 0, 0};
        for (X.a = 0; X.a < p; ++X.a)
            for (X.b = 0; X.b < p; ++X.b)
                for (X.c = 0; X.c < p; ++X.c)
                    for (X.d = 0; X.d < p; ++X.d) {
                        Mat2 A = one_plus(X, pn, m);
                        std::vector<Mat2> c;
                        for (const auto& B : L.images) c.push_back(conj(A, B, m));
                        seen.insert(c);
                    }
    }
    return res;
}

TorsorReport verify_torsor(const FiniteGroup& G, const ModPnRepresentation& rho_n, const std::vector<i64>& nu) {
    i64 p = rho_n.p;
    std::vector<Mat2> rbar;
    for (const auto& A : rho_n.images) rbar.push_back(reduce(A, p));
    AdjointModule M(G, rbar, p, Submodule::Ad0);
    TorsorReport rep;
    auto E = enumerate_lifts(G, rho_n, nu);
    rep.num_lifts = E.lifts.size();
    rep.num_classes = E.classes.size();
    auto H1 = cohomology(G, M, 1);
    rep.dim_Z1 = H1.dim_cocycles;
    rep.dim_H1 = H1.dimension;
    rep.obstruction_zero = solve_coboundary(G, M, obstruction_class(G, rho_n, nu));
    if (E.lifts.empty()) {
        rep.consistent = !rep.obstruction_zero;
        return rep;
    }
    std::set<std::vector<Mat2>> all;
    for (const auto& L : E.lifts) all.insert(L.images);
    auto Z = cocycle_space(G, M);
    std::set<std::vector<Mat2>> orbit;
    bool inside = true;
    std::vector<i64> coeff(Z.size(), 0);
    size_t len = G.num_generators() * M.dim();
    do {
        auto t = twist(E.lifts[0], M, combine(Z, coeff, len, p), rho_n.n);
        inside = inside && all.count(t.images);
        orbit.insert(t.images);
    } while (next_counter(coeff, p));
    long expected = checked_power(p, Z.size(), 1L << 40);
    rep.simply_transitive = inside && static_cast<long>(orbit.size()) == expected &&
                            static_cast<long>(all.size()) == expected;
    rep.consistent = rep.obstruction_zero && rep.simply_transitive &&
                     static_cast<long>(rep.num_classes) == checked_power(p, H1.dimension, 1L << 40);
    return rep;
}

// ----- Trivial primes and tame local conditions

bool trivial_prime_check(i64 v, i64 p, const std::vector<Mat2>& rhobar_restriction) {
    if (mod_norm(v, p) != 1 || mod_norm(v, p * p) == 1) return false;
    return std::all_of(rhobar_restriction.begin(), rhobar_restriction.end(),
                       [&](const Mat2& A) { return reduce(A, p) == kId; });
}

bool LocalTameData::relation_holds() const {
    i64 m = ipow(p, n);
    Mat2 lhs = mul(mul(sigma, tau, m), inv(sigma, m), m);
    Mat2 rhs = reduce(kId, m);
    for (i64 i = 0; i < mod_norm(v, m); ++i) rhs = mul(rhs, tau, m);
    return lhs == rhs;
}

LocalType parse_local_type(const std::string& s) {
    static const std::map<std::string, LocalType> names{
        {"D", LocalType::D},         {"Dnr", LocalType::Dnr},     {"Dram", LocalType::Dram},
        {"1", LocalType::Type1},     {"2", LocalType::Type2},     {"3", LocalType::Type3},
        {"4", LocalType::Type4},     {"type1", LocalType::Type1}, {"type2", LocalType::Type2},
        {"type3", LocalType::Type3}, {"type4", LocalType::Type4}, {"unramified-diagonal", LocalType::UnramifiedDiagonal}};
    auto it = names.find(s);
    if (it == names.end()) throw Error("InvalidLocalType", s);
    return it->second;
}

std::string to_string(LocalType t) {
    switch (t) {
        case LocalType::D: return "D";
        case LocalType::Dnr: return "Dnr";
        case LocalType::Dram: return "Dram";
        case LocalType::Type1: return "type1";
        case LocalType::Type2: return "type2";
        case LocalType::Type3: return "type3";
        case LocalType::Type4: return "type4";
        case LocalType::UnramifiedDiagonal: return "unramified-diagonal";
    }
    return "?";
}

i64 unit_square_root(i64 u, i64 p, int k) {
    i64 m = ipow(p, k);
    u = mod_norm(u, m);
    if (u % p != 1 % p) throw Error("NoUnitSquareRoot", std::to_string(u) + " is not 1 mod " + std::to_string(p));
    i64 x = 1, half = mod_inv(2, m);
    for (int i = 0; i < k + 1; ++i) x = mod_mul(mod_norm(x + mod_mul(u, mod_inv(x, m), m), m), half, m);
    if (mod_mul(x, x, m) != u) throw Error("NoUnitSquareRoot", "Newton iteration failed");
    return x;
}

namespace {

enum class Valuation { None, Nr, Ram };

struct TypeShape {
    Valuation val;
    Mat2 conj;  // the condition is conj * (base condition) * conj^{-1}
};

TypeShape shape_of(LocalType t) {
    const Mat2 C1{1, 0, 1, 1}, W{0, 1, 1, 0};
    switch (t) {
        case LocalType::D: return {Valuation::None, kId};
        case LocalType::Dnr:
        case LocalType::Type3: return {Valuation::Nr, kId};
        case LocalType::Dram:
        case LocalType::Type4: return {Valuation::Ram, kId};
        case LocalType::Type1: return {Valuation::Nr, C1};
        case LocalType::Type2: return {Valuation::Ram, W};
        default: throw Error("InvalidLocalType", "no D_v shape for " + to_string(t));
    }
}

// Membership of (S, T) in the base family at level k, searching conjugation
// by lower unipotents 1 mod p; upper unipotent and diagonal conjugation
// preserve the normal form and its valuation conditions.
bool base_member(const Mat2& S, const Mat2& T, i64 v, i64 p, int k, i64 s, Valuation val) {
    i64 m = ipow(p, k), p2 = std::min(p * p, m);
    i64 sv = mod_mul(s, mod_norm(v, m), m), sinv = mod_inv(s, m);
    for (i64 a = 0; a < m; a += p) {
        Mat2 L{1, 0, a, 1}, Li{1, 0, mod_norm(-a, m), 1};
        Mat2 T2 = mul(mul(L, T, m), Li, m);
        if (T2.a != 1 % m || T2.c != 0 || T2.d != 1 % m) continue;
        Mat2 S2 = mul(mul(L, S, m), Li, m);
        if (S2.c != 0 || S2.d != s || S2.a != sv) continue;
        i64 x = mod_mul(S2.b, sinv, m), y = T2.b;
        switch (val) {
            case Valuation::None: return true;
            case Valuation::Nr:
                if (x % p2 == 0 && y % p2 == 0) return true;
                break;
            case Valuation::Ram:
                if (x % p2 == 0 && y % p == 0 && (k < 2 || y % p2 != 0)) return true;
                break;
        }
    }
    return false;
}

bool diagonal_member(const Mat2& S, const Mat2& T, i64 p, int k) {
    i64 m = ipow(p, k);
    if (reduce(T, m) != reduce(kId, m)) return false;
    if (S.a % p != 1 % p || S.d % p != 1 % p) return false;
    for (i64 a = 0; a < m; a += p) {
        Mat2 S1 = mul(mul(Mat2{1, 0, a, 1}, S, m), Mat2{1, 0, mod_norm(-a, m), 1}, m);
        if (S1.c != 0) continue;
        for (i64 b = 0; b < m; b += p)
            if (mod_norm(S1.b + mod_mul(b, S1.d - S1.a, m), m) == 0) return true;
    }
    return false;
}

}  // namespace

bool local_condition_membership(const LocalTameData& d, LocalType type, i64 psi_sigma) {
    if (!d.relation_holds()) throw Error("RelationViolated", "sigma tau sigma^-1 != tau^v");
    i64 m = ipow(d.p, d.n);
    if (type == LocalType::UnramifiedDiagonal) return diagonal_member(reduce(d.sigma, m), reduce(d.tau, m), d.p, d.n);
    i64 s = unit_square_root(mod_mul(mod_norm(psi_sigma, m), mod_inv(mod_norm(d.v, m), m), m), d.p, d.n);
    TypeShape sh = shape_of(type);
    Mat2 Ci = inv(reduce(sh.conj, m), m);
    return base_member(conj(Ci, d.sigma, m), conj(Ci, d.tau, m), d.v, d.p, d.n, s, sh.val);
}

std::vector<TameCocycle> basis_cocycles(i64 v, i64 p, i64 y) {
    if (mod_norm(v, p * p) == 1) throw Error("DivisionByZero", "v = 1 mod p^2, so (v-1)/p is not a unit");
    if (mod_norm(v, p) != 1) throw Error("InvalidParameter", "v must be 1 mod p");
    if (y % p != 0) throw Error("InvalidParameter", "y must be divisible by p");
    i64 r = mod_mul(mod_norm(y / p, p), mod_inv(mod_norm((v - 1) / p, p), p), p);
    const Mat2 Z{0, 0, 0, 0}, E12{0, 1, 0, 0}, E21{0, 0, 1, 0};
    return {{"f1", E12, Z},
            {"f2", Z, E12},
            {"g_nr", E21, Z},
            {"g_ram", E21, Mat2{mod_norm(-r, p), 0, 0, r}}};
}

bool is_tame_cocycle(const TameCocycle& f, i64 v, i64 p) {
    // With trivial residual action the identity f(s t s^-1) = f(t^v) reads
    // f(s) + f(t) - f(s) = v f(t).
    Mat2 lhs = add(add(f.at_sigma, f.at_tau, p), scale(f.at_sigma, -1, p), p);
    return trace(f.at_sigma, p) == 0 && trace(f.at_tau, p) == 0 && lhs == scale(f.at_tau, v, p);
}

int span_dimension(const std::vector<TameCocycle>& fs, i64 p) {
    FpMatrix rows;
    for (const auto& f : fs) {
        Mat2 a = reduce(f.at_sigma, p), b = reduce(f.at_tau, p);
        rows.push_back({a.a, a.b, a.c, a.d, b.a, b.b, b.c, b.d});
    }
    return rows.empty() ? 0 : static_cast<int>(rank_fp(rows, 8, p));
}

bool twist_stable_at_level(LocalType type, i64 v, i64 p, int k, i64 psi_sigma) {
    i64 m = ipow(p, k), eps = ipow(p, k - 1);
    if (type == LocalType::UnramifiedDiagonal) {
        i64 psi = mod_norm(psi_sigma, m);
        const Mat2 H{1, 0, 0, p - 1};
        for (i64 u = 1; u < m; u += p) {
            Mat2 S{u, 0, 0, mod_mul(psi, mod_inv(u, m), m)};
            for (i64 c = 0; c < p; ++c) {
                Mat2 S2 = mul(one_plus(scale(H, c, p), eps, m), S, m);
                if (!diagonal_member(S2, reduce(kId, m), p, k)) return false;
            }
        }
        return true;
    }
    TypeShape sh = shape_of(type);
    if (sh.val == Valuation::None) throw Error("InvalidLocalType", "degree needs a type with a tangent space");
    i64 s = unit_square_root(mod_mul(mod_norm(psi_sigma, m), mod_inv(mod_norm(v, m), m), m), p, k);
    Mat2 C = reduce(sh.conj, m), Ci = inv(C, m);
    i64 p2 = std::min(p * p, m);
    std::vector<i64> ys;
    for (i64 y = 0; y < m; y += p) {
        bool ram = y % p2 != 0;
        if ((sh.val == Valuation::Ram) == ram) ys.push_back(y);
    }
    for (i64 x = 0; x < m; x += p2)
        for (i64 y : ys) {
            Mat2 S = scale(Mat2{mod_norm(v, m), x, 0, 1}, s, m), T{1, y, 0, 1};
            auto basis = basis_cocycles(v, p, sh.val == Valuation::Ram ? y : 0);
            std::vector<TameCocycle> N{basis[0], basis[1], basis[sh.val == Valuation::Ram ? 3 : 2]};
            for (i64 c0 = 0; c0 < p; ++c0)
                for (i64 c1 = 0; c1 < p; ++c1)
                    for (i64 c2 = 0; c2 < p; ++c2) {
                        Mat2 Fs = add(add(scale(N[0].at_sigma, c0, p), scale(N[1].at_sigma, c1, p), p),
                                      scale(N[2].at_sigma, c2, p), p);
                        Mat2 Ft = add(add(scale(N[0].at_tau, c0, p), scale(N[1].at_tau, c1, p), p),
                                      scale(N[2].at_tau, c2, p), p);
                        // Twisting the conjugated pair by the conjugated cocycle and
                        // undoing the conjugation is the same as twisting directly.
                        Mat2 S2 = mul(one_plus(Fs, eps, m), S, m), T2 = mul(one_plus(Ft, eps, m), T, m);
                        Mat2 Sc = conj(C, S2, m), Tc = conj(C, T2, m);
                        if (!base_member(conj(Ci, Sc, m), conj(Ci, Tc, m), v, p, k, s, sh.val)) return false;
                    }
        }
    return true;
}

int highly_versal_degree(LocalType type, i64 v, i64 p, int k_max, std::optional<i64> psi_sigma) {
    if (k_max < 2) throw Error("InvalidParameter", "k_max must be at least 2");
    if (!trivial_prime_check(v, p, {})) throw Error("InvalidParameter", "v is not a trivial prime for p");
    long work = checked_power(p, 2 * static_cast<size_t>(k_max) + 3, 4000000000L);
    (void)work;
    i64 psi = psi_sigma.value_or(v);
    int m = k_max + 1;
    for (int k = k_max; k >= 2; --k) {
        if (!twist_stable_at_level(type, v, p, k, psi)) break;
        m = k;
    }
    if (m > k_max) throw Error("NotStabilized", "twisting escapes the condition at level " + std::to_string(k_max));
    return m;
}

// ----- Ordinary condition

bool ordinary_condition_check(const OrdinaryInput& in) {
    i64 p = in.p, m = ipow(p, in.n);
    if (in.inertia.size() != in.images.size() || in.inertia_values.size() != in.images.size())
        throw Error("InvalidParameter", "inertia labels must match the images");
    for (i64 a = 0; a < m; a += p) {
        bool ok = true;
        for (size_t i = 0; i < in.images.size() && ok; ++i) {
            Mat2 M = reduce(in.images[i], m);
            i64 lambda = mod_norm(M.a + mod_mul(M.b, a, m), m);
            ok = mod_norm(M.c + mod_mul(M.d, a, m) - mod_mul(lambda, a, m), m) == 0;
            if (ok && in.inertia[i]) {
                i64 quotient = mod_mul(det(M, m), mod_inv(lambda, m), m);
                ok = lambda == mod_norm(in.inertia_values[i], m) && quotient == 1 % m;
            }
        }
        if (ok) return true;
    }
    return false;
}

// ----- Scenarios

namespace {

using json = nlohmann::ordered_json;

Mat2 mat_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || j[0].size() != 2 || j[1].size() != 2)
        throw Error("InvalidScenario", "matrix must be [[a,b],[c,d]]");
    return {j[0][0].get<i64>(), j[0][1].get<i64>(), j[1][0].get<i64>(), j[1][1].get<i64>()};
}

json mat_to_json(const Mat2& A) { return json::array({json::array({A.a, A.b}), json::array({A.c, A.d})}); }

json rep_to_json(const ModPnRepresentation& r) {
    json a = json::array();
    for (const auto& A : r.images) a.push_back(mat_to_json(A));
    return a;
}

}  // namespace

std::string run_scenario(const std::string& text) {
    json in;
    try {
        in = json::parse(text);
    } catch (const std::exception& e) {
        throw Error("InvalidScenario", std::string("malformed JSON: ") + e.what());
    }
    json out;
    out["name"] = in.value("name", std::string("unnamed"));
    try {
        i64 p = in.at("p").get<i64>();
        if (p < 3 || !is_prime(p)) throw Error("InvalidScenario", "p must be an odd prime");
        int level = in.value("level", 1), target = in.value("target_level", level + 1);
        if (level < 1 || target <= level) throw Error("InvalidScenario", "need 1 <= level < target_level");
        out["p"] = p;
        const json& g = in.at("group");
        FiniteGroup G = g.contains("permutations")
                            ? FiniteGroup::from_permutations(g["permutations"].get<std::vector<std::vector<int>>>())
                            : [&] {
                                  std::vector<Mat2> gens;
                                  for (const auto& A : g.at("matrices")) gens.push_back(mat_from_json(A));
                                  return FiniteGroup::from_matrices(gens, g.at("modulus").get<i64>());
                              }();
        out["group_order"] = G.order();
        ModPnRepresentation rho{p, level, {}, {}};
        for (const auto& A : in.at("rho")) rho.images.push_back(reduce(mat_from_json(A), rho.modulus()));
        if (rho.images.size() != G.num_generators())
            throw Error("InvalidScenario", "rho must give one image per generator");
        if (!is_homomorphism(G, rho.images, rho.modulus()))
            throw Error("NotHomomorphism", "rho does not respect the group law");
        std::vector<i64> nu;
        const json det_field = in.value("det", json("teichmuller"));
        if (det_field.is_string()) {
            if (det_field.get<std::string>() != "teichmuller") throw Error("InvalidScenario", "unknown det value");
            nu = teichmuller_determinant(G, rho.images, p, target);
        } else {
            nu = extend_character(G, det_field.get<std::vector<i64>>(), ipow(p, target));
        }
        std::vector<Mat2> rbar;
        for (const auto& A : rho.images) rbar.push_back(reduce(A, p));
        AdjointModule M(G, rbar, p, Submodule::Ad0);
        auto H1 = cohomology(G, M, 1);
        out["h1_dim"] = H1.dimension;
        out["z1_dim"] = H1.dim_cocycles;
        std::map<std::string, std::vector<size_t>> subgroups;
        if (in.contains("subgroups"))
            for (auto& [label, words] : in["subgroups"].items())
                for (const auto& w : words) subgroups[label].push_back(G.word(w.get<std::vector<int>>()));
        std::vector<LocalCondition> conds;
        if (in.contains("conditions"))
            for (const auto& c : in["conditions"]) {
                LocalCondition lc{c.at("subgroup").get<std::string>(), c.at("type").get<std::string>(), {}};
                if (c.contains("images"))
                    for (const auto& A : c["images"]) lc.images.push_back(mat_from_json(A));
                conds.push_back(lc);
            }
        bool torsor = in.value("check_torsor", false);
        json steps = json::array();
        std::string status = "lifted";
        for (int n = level; n < target; ++n) {
            json step;
            step["from"] = n;
            step["to"] = n + 1;
            std::vector<i64> nu_n(nu.size());
            for (size_t i = 0; i < nu.size(); ++i) nu_n[i] = nu[i] % ipow(p, n + 1);
            if (torsor) {
                try {
                    auto T = verify_torsor(G, rho, nu_n);
                    step["torsor"] = {{"lifts", T.num_lifts},       {"classes", T.num_classes},
                                      {"dim_Z1", T.dim_Z1},         {"dim_H1", T.dim_H1},
                                      {"obstruction_zero", T.obstruction_zero},
                                      {"simply_transitive", T.simply_transitive}, {"consistent", T.consistent}};
                } catch (const Error& e) {
                    if (e.kind() != "SizeBound") throw;
                    step["torsor"] = {{"skipped", e.what()}};
                }
            }
            try {
                auto R = lift_step(G, rho, nu_n, conds, subgroups);
                step["obstructed"] = R.obstructed;
                if (R.obstructed) {
                    steps.push_back(step);
                    status = "obstructed";
                    break;
                }
                step["twists_tried"] = R.twists_tried;
                step["lift"] = rep_to_json(R.lift);
                rho = R.lift;
            } catch (const Error& e) {
                step["error"] = e.kind();
                step["detail"] = e.what();
                steps.push_back(step);
                status = e.kind();
                break;
            }
            steps.push_back(step);
        }
        out["steps"] = steps;
        out["status"] = status;
    } catch (const Error& e) {
        out["status"] = "error";
        out["error"] = e.kind();
        out["detail"] = e.what();
    } catch (const json::exception& e) {
        out["status"] = "error";
        out["error"] = "InvalidScenario";
        out["detail"] = e.what();
    }
    return out.dump(2);
}

std::string run_scenario_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("InputError", "cannot open scenario " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return run_scenario(ss.str());
}

}  // namespace mulab
