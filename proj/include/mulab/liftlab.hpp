#pragma once

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mulab/mat2.hpp"

namespace mulab {

// A finite group given by permutation or matrix generators, closed up front
// into a multiplication table. Element 0 is the identity. Every element also
// records a spanning-tree edge g = parent(g) * generator(g) for extending
// generator data (homomorphisms, cocycles) to the whole group.
class FiniteGroup {
public:
    // Composition (a*b)(i) = a(b(i)).
    static FiniteGroup from_permutations(const std::vector<std::vector<int>>& gens, size_t bound = 5000);
    static FiniteGroup from_matrices(const std::vector<Mat2>& gens, i64 modulus, size_t bound = 5000);
    // Subgroup generated by the given elements, with its embedding.
    FiniteGroup subgroup(const std::vector<size_t>& gens, std::vector<size_t>& embedding) const;

    size_t order() const { return inv_.size(); }
    size_t mul(size_t a, size_t b) const { return table_[a * order() + b]; }
    size_t inv(size_t a) const { return inv_[a]; }
    const std::vector<size_t>& generators() const { return gens_; }
    size_t num_generators() const { return gens_.size(); }
    // Elements in breadth-first order from the identity.
    const std::vector<size_t>& bfs_order() const { return bfs_; }
    size_t tree_parent(size_t g) const { return parent_[g]; }
    size_t tree_generator(size_t g) const { return pgen_[g]; }
    // Product of generators along a word of generator indices.
    size_t word(const std::vector<int>& w) const;
    bool verify_associativity() const;

private:
    friend struct GroupBuilder;
    std::vector<size_t> table_, inv_, gens_, bfs_, parent_, pgen_;
};

// Extends generator images to every element along the spanning tree.
std::vector<Mat2> extend_images(const FiniteGroup& G, const std::vector<Mat2>& gen_images, i64 m);
// Whether generator images define a homomorphism G -> GL_2(Z/m).
bool is_homomorphism(const FiniteGroup& G, const std::vector<Mat2>& gen_images, i64 m);
// Determinant character: Teichmuller lift of det(rho_bar) with values mod p^N.
std::vector<i64> teichmuller_determinant(const FiniteGroup& G, const std::vector<Mat2>& rhobar_gens, i64 p, int N);
// Extends determinant values on generators to all elements, checking consistency.
std::vector<i64> extend_character(const FiniteGroup& G, const std::vector<i64>& gen_values, i64 m);

enum class Submodule { Ad0, N, B };  // trace zero; strictly upper; trace-zero upper triangular

// Ad^0 rho_bar or one of its Borel submodules, as an F_p-space with the
// conjugation action g.v = rho_bar(g) v rho_bar(g)^{-1}.
class AdjointModule {
public:
    AdjointModule(const FiniteGroup& G, const std::vector<Mat2>& rhobar_gens, i64 p, Submodule which);
    size_t dim() const { return basis_.size(); }
    i64 prime() const { return p_; }
    const std::vector<Mat2>& basis() const { return basis_; }
    std::vector<i64> coords(const Mat2& v) const;  // throws NotInSubmodule
    Mat2 matrix(const std::vector<i64>& c) const;
    // Action matrix of g in the chosen basis, column j = g.basis_j.
    const std::vector<std::vector<i64>>& action(size_t g) const { return act_[g]; }
    std::vector<i64> act(size_t g, const std::vector<i64>& v) const;
    const std::vector<Mat2>& rhobar() const { return rhobar_all_; }

private:
    i64 p_;
    Submodule which_;
    std::vector<Mat2> basis_;
    std::vector<Mat2> rhobar_all_;
    std::vector<std::vector<std::vector<i64>>> act_;
};

// Inhomogeneous cochain with values in F_p^dim. Degree 1 values are indexed
// g*dim + k, degree 2 values (g*|G| + h)*dim + k.
struct Cochain {
    int degree = 1;
    size_t group_order = 0;
    size_t dim = 0;
    std::vector<i64> values;
    bool is_zero() const;
};

struct CohomologyResult {
    int dimension = 0;
    int dim_cocycles = 0;
    int dim_coboundaries = 0;
    std::vector<Cochain> basis;  // cocycles whose classes form a basis
};

// H^1 or H^2 by linear algebra on inhomogeneous cochains. Degree 2 raises
// SizeBound when the dense coboundary matrix exceeds max_entries.
CohomologyResult cohomology(const FiniteGroup& G, const AdjointModule& M, int degree, size_t max_entries = 4000000);

// Generator-value coordinates of Z^1 (each vector has num_generators*dim
// entries) and the extension of such a vector to a full cochain.
std::vector<std::vector<i64>> cocycle_space(const FiniteGroup& G, const AdjointModule& M);
Cochain extend_cocycle(const FiniteGroup& G, const AdjointModule& M, const std::vector<i64>& gen_values);
Cochain coboundary(const FiniteGroup& G, const AdjointModule& M, const Cochain& f);

// Set-theoretic lift of rho_n to level n+1 with det = nu on every element.
// With an rng the lift is randomized, otherwise canonical.
std::vector<Mat2> set_theoretic_lift(const FiniteGroup& G, const ModPnRepresentation& rho_n,
                                     const std::vector<i64>& nu, std::mt19937_64* rng = nullptr);
// O'(g,h) with tau(gh) tau(h)^{-1} tau(g)^{-1} = 1 + p^n O'(g,h), in Ad^0 coordinates.
Cochain obstruction_cochain(const FiniteGroup& G, const ModPnRepresentation& rho_n, const std::vector<Mat2>& tau);
Cochain obstruction_class(const FiniteGroup& G, const ModPnRepresentation& rho_n, const std::vector<i64>& nu,
                          std::mt19937_64* rng = nullptr);
// Solves c = df; returns false when c is not a coboundary.
bool solve_coboundary(const FiniteGroup& G, const AdjointModule& M, const Cochain& c, Cochain* f = nullptr);

// Twist (1 + p^n f(s)) rho(s) on generator images mod p^{n+1}.
ModPnRepresentation twist(const ModPnRepresentation& rho, const AdjointModule& M, const std::vector<i64>& gen_values,
                          int n);

// Local requirement on the restriction of a lift to a labeled subgroup.
// "prescribed" asks for strict equivalence (conjugation by 1 + p^n X) with
// the given images of the subgroup generators.
struct LocalCondition {
    std::string subgroup;
    std::string type;  // "any", "upper-triangular", "trivial", "prescribed"
    std::vector<Mat2> images;
};

struct LiftOutcome {
    bool obstructed = false;
    ModPnRepresentation lift;
    Cochain obstruction;
    int twists_tried = 0;
};

// One lifting step rho_n -> rho_{n+1}: solve the obstruction against a
// coboundary, then search global twists by Z^1 for one meeting every local
// condition. Throws LocalTwistUnrealizable when each condition is met by some
// local twist but no global twist meets them all, and ConditionNotLiftable
// when some condition has no local solution at all.
LiftOutcome lift_step(const FiniteGroup& G, const ModPnRepresentation& rho_n, const std::vector<i64>& nu,
                      const std::vector<LocalCondition>& conditions = {},
                      const std::map<std::string, std::vector<size_t>>& subgroups = {},
                      long max_twists = 2000000);

struct LiftEnumeration {
    std::vector<ModPnRepresentation> lifts;    // all homomorphic lifts with det nu
    std::vector<ModPnRepresentation> classes;  // one per strict equivalence class
};

// Exhaustive search over generator images; SizeBound above max_candidates tuples.
LiftEnumeration enumerate_lifts(const FiniteGroup& G, const ModPnRepresentation& rho_n, const std::vector<i64>& nu,
                                long max_candidates = 3000000);

struct TorsorReport {
    bool obstruction_zero = false;
    size_t num_lifts = 0;
    size_t num_classes = 0;
    int dim_Z1 = 0;
    int dim_H1 = 0;
    bool simply_transitive = false;
    bool consistent = false;  // obstruction zero <=> lifts exist, and the torsor law when they do
};

TorsorReport verify_torsor(const FiniteGroup& G, const ModPnRepresentation& rho_n, const std::vector<i64>& nu);

// ----- Trivial primes and the tame local group <sigma, tau | s t s^-1 = t^v>.

bool trivial_prime_check(i64 v, i64 p, const std::vector<Mat2>& rhobar_restriction);

struct LocalTameData {
    i64 v = 0;
    i64 p = 0;
    int n = 1;
    Mat2 sigma, tau;
    bool relation_holds() const;
};

enum class LocalType { D, Dnr, Dram, Type1, Type2, Type3, Type4, UnramifiedDiagonal };
LocalType parse_local_type(const std::string& s);
std::string to_string(LocalType t);

// Root of x^2 = u in 1 + pZ/p^k; throws NoUnitSquareRoot when u != 1 mod p.
i64 unit_square_root(i64 u, i64 p, int k);

bool local_condition_membership(const LocalTameData& d, LocalType type, i64 psi_sigma);

struct TameCocycle {
    std::string name;
    Mat2 at_sigma, at_tau;  // values in M_2(F_p), trace zero
};

// f1, f2, g_nr, g_ram for the deformation parameter y (p || y for g_ram).
std::vector<TameCocycle> basis_cocycles(i64 v, i64 p, i64 y);
bool is_tame_cocycle(const TameCocycle& f, i64 v, i64 p);
int span_dimension(const std::vector<TameCocycle>& fs, i64 p);

// Smallest m >= 2 such that for all m <= k <= k_max every twist of every
// member of C_v(Z/p^k) by N_v stays in C_v(Z/p^k).
int highly_versal_degree(LocalType type, i64 v, i64 p, int k_max, std::optional<i64> psi_sigma = std::nullopt);
// Whether twisting is stable at the single level k.
bool twist_stable_at_level(LocalType type, i64 v, i64 p, int k, i64 psi_sigma);

struct OrdinaryInput {
    i64 p = 0;
    int n = 1;
    std::vector<Mat2> images;         // generators of the decomposition subgroup
    std::vector<bool> inertia;        // whether each generator lies in inertia
    std::vector<i64> inertia_values;  // chi^{k-1} on each inertia generator
};

// Some conjugate by a matrix = 1 mod p is upper triangular, inertia acting on
// the (1,1) entry through the given values and trivially on the (2,2) entry.
bool ordinary_condition_check(const OrdinaryInput& in);

// Runs a JSON scenario step by step and returns the JSON verdict.
std::string run_scenario(const std::string& json_text);
std::string run_scenario_file(const std::string& path);

}  // namespace mulab
