#pragma once
// Reference curves and a small driver computing analytic invariants.

#include <map>
#include <string>
#include <vector>

#include "mulab/arith.hpp"
#include "mulab/curve.hpp"
#include "mulab/mazur_tate.hpp"
#include "mulab/modsym.hpp"
#include "mulab/padic.hpp"

namespace mulab::testing {

struct CurveCase {
    EllipticCurve curve;
    i64 p;
};

inline EllipticCurve curve(const std::string& label) {
    static const std::map<std::string, std::pair<std::array<i64, 5>, i64>> table = {
        {"11a1", {{0, -1, 1, -10, -20}, 11}},       {"11a2", {{0, -1, 1, -7820, -263580}, 11}},
        {"11a3", {{0, -1, 1, 0, 0}, 11}},           {"14a1", {{1, 0, 1, 4, -6}, 14}},
        {"19a1", {{0, 1, 1, -9, -15}, 19}},         {"19a2", {{0, 1, 1, -769, -8470}, 19}},
        {"19a3", {{0, 1, 1, 1, 0}, 19}},            {"26b1", {{1, -1, 1, -3, 3}, 26}},
        {"26b2", {{1, -1, 1, -213, -1257}, 26}},    {"37a1", {{0, 0, 1, -1, 0}, 37}},
        {"37b1", {{0, 1, 1, -23, -50}, 37}},        {"37b2", {{0, 1, 1, -1873, -31833}, 37}},
        {"37b3", {{0, 1, 1, -3, 1}, 37}},           {"38b1", {{1, 1, 1, 0, 1}, 38}},
        {"38b2", {{1, 1, 1, -70, -279}, 38}},       {"44a1", {{0, 1, 0, 3, -1}, 44}},
    };
    const auto& e = table.at(label);
    return EllipticCurve{label, e.first, e.second};
}

inline std::map<i64, i64> a_table(const EllipticCurve& E, i64 bound = 60) {
    std::map<i64, i64> at;
    for (i64 l : primes_up_to(bound)) at[l] = E.a_ell(l);
    return at;
}

struct TowerData {
    EigenSymbol es;
    int shift = 0;
    int Nw = 0;
    PAdicElement alpha{2, 1, 1};
    std::vector<MazurTateElement> thetas;  // layers -1 .. n_max
    std::vector<RegularizedL> Ls;          // layers 0 .. n_max
};

inline TowerData tower(const ManinSymbolSpace& S, const EllipticCurve& E, i64 p, int N = 6, int n_max = 3) {
    TowerData t;
    t.es = eigen_symbol(S, E, a_table(E));
    t.shift = denominator_shift(t.es, p);
    t.Nw = working_precision(N, n_max, t.shift);
    t.alpha = hensel_unit_root(E.a_ell(p), p, t.Nw);
    t.thetas.push_back(theta_element(S, t.es, p, -1, t.Nw, E.label));
    for (int n = 0; n <= n_max; ++n) {
        t.thetas.push_back(theta_element(S, t.es, p, n, t.Nw, E.label));
        t.Ls.push_back(regularized_Lp(t.thetas.back(), t.thetas[t.thetas.size() - 2], t.alpha));
    }
    return t;
}

}  // namespace mulab::testing
