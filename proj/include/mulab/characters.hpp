#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mulab/arith.hpp"

namespace mulab {

// Generators of (Z/M)^x, one per cyclic factor, with their orders.
struct UnitGroup {
    i64 modulus;
    std::vector<i64> gens;
    std::vector<i64> orders;
};
UnitGroup unit_group(i64 M);

// A character of (Z/M)^x with values in (Z/p^N)^x. Stored as its values on
// the unit-group generators plus a full lookup table for evaluation.
class DirichletCharacter {
public:
    // Build from a value function; multiplicativity is checked on the table.
    static DirichletCharacter from_function(i64 M, i64 p, int N, const std::function<i64(i64)>& f);
    static DirichletCharacter trivial(i64 M, i64 p, int N);
    // chi_bar: a -> a mod p, at modulus p and precision N = 1.
    static DirichletCharacter mod_p_cyclotomic(i64 p);

    i64 modulus() const { return group_.modulus; }
    i64 prime() const { return p_; }
    int precision() const { return N_; }
    const std::vector<i64>& generator_values() const { return gen_values_; }
    const UnitGroup& group() const { return group_; }

    // Value at a; 0 when gcd(a, M) > 1.
    i64 operator()(i64 a) const;
    i64 order() const;
    bool is_trivial() const;
    i64 conductor() const;

    DirichletCharacter operator*(const DirichletCharacter& o) const;
    DirichletCharacter inverse() const;
    DirichletCharacter pow(i64 e) const;
    // Same character viewed at modulus M' (a multiple of the modulus).
    DirichletCharacter extend_to(i64 M) const;
    // Reduce values modulo p^n.
    DirichletCharacter reduce(int n) const;
    bool operator==(const DirichletCharacter& o) const;

    std::string describe() const;

private:
    DirichletCharacter() = default;
    UnitGroup group_{};
    i64 p_ = 0;
    int N_ = 0;
    std::vector<i64> gen_values_;
    std::vector<i64> table_;
};

std::vector<DirichletCharacter> enumerate_characters(i64 M, i64 d, i64 p, int N);
bool is_odd(const DirichletCharacter& chi);
DirichletCharacter teichmuller_lift(const DirichletCharacter& chi, int N_target);
// chi_n^i * Teichmuller(alpha) with values mod p^n; chi_n(a) = a mod p^n.
DirichletCharacter liftable_character(i64 i, const DirichletCharacter& alpha, int n, int k_weight);

}  // namespace mulab
