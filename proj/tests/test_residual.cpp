#include <doctest.h>

#include <random>
#include <set>

#include "ec_points.hpp"
#include "fixtures.hpp"
#include "mulab/errors.hpp"
#include "mulab/residual.hpp"

using namespace mulab;
using mulab::testing::curve;

namespace {

i64 prime_3_mod_4_near(i64 start) {
    for (i64 q = start;; ++q)
        if (q % 4 == 3 && is_prime(q)) return q;
}

}  // namespace

TEST_CASE("division polynomial shapes") {
    auto E = curve("11a1");
    CHECK(degree(division_polynomial(E, 5)) == 12);
    CHECK(degree(division_polynomial(E, 7)) == 24);
    auto f2 = two_torsion_polynomial(E);
    REQUIRE(f2.size() == 4);
    CHECK(f2[3] == 4);
    CHECK(f2[2] == E.b2());
    CHECK(f2[1] == 2 * E.b4());
    CHECK(f2[0] == E.b6());
}

TEST_CASE("psi_5 vanishes at points of order 5 over a large prime field") {
    auto E = curve("11a1");
    i64 q = prime_3_mod_4_near(1 << 20);
    testing::FqCurve C(E, q);
    i64 order = C.count();
    REQUIRE(order % 5 == 0);
    auto psi5 = division_polynomial(E, 5);
    auto [phi2, psi2sq] = multiplication_map(E, 2);
    int found = 0;
    for (i64 x = 1; x < 400 && found < 5; ++x) {
        auto P = C.lift_x(x);
        if (!P) continue;
        CHECK(C.mul(order, P) == std::nullopt);
        auto P2 = C.add(P, P);
        if (P2 && testing::eval_mod(psi2sq, x, q) != 0) {
            i64 x2 = mpz_mod(mpz_class(testing::eval_mod(phi2, x, q)) * mod_inv(testing::eval_mod(psi2sq, x, q), q), q);
            CHECK(x2 == P2->first);
        }
        auto T = C.mul(order / 5, P);
        if (!T) continue;
        ++found;
        CHECK(C.mul(5, T) == std::nullopt);
        CHECK(testing::eval_mod(psi5, T->first, q) == 0);
    }
    CHECK(found > 0);
}

TEST_CASE("kernel polynomials of rational isogenies") {
    auto E = curve("11a1");
    auto ks = kernel_polynomials(E, 5);
    CHECK(ks.size() == 2);
    std::set<std::string> images;
    for (const auto& h : ks) {
        CHECK(degree(h) == 2);
        CHECK(is_kernel_polynomial(E, h, 5));
        images.insert(j_invariant(velu_image(E, h)).get_str());
    }
    std::set<std::string> expected = {j_invariant(curve("11a2")).get_str(), j_invariant(curve("11a3")).get_str()};
    CHECK(images == expected);
    CHECK(kernel_polynomials(curve("37a1"), 5).empty());
    CHECK(kernel_polynomials(curve("11a3"), 5).size() == 1);
}

TEST_CASE("Frobenius scalars on the kernel lines") {
    auto E = curve("11a1");
    auto ks = kernel_polynomials(E, 5);
    REQUIRE(ks.size() == 2);
    for (i64 ell : {2, 3, 7, 13}) {
        i64 s0 = frobenius_scalar(E, ks[0], ell, 5), s1 = frobenius_scalar(E, ks[1], ell, 5);
        CHECK(s0 * s1 % 5 == ell % 5);
        CHECK((s0 + s1) % 5 == mod_norm(E.a_ell(ell), 5));
    }
    std::set<i64> at2 = {frobenius_scalar(E, ks[0], 2, 5), frobenius_scalar(E, ks[1], 2, 5)};
    CHECK(at2 == std::set<i64>{1, 2});
}

TEST_CASE("semisimplification") {
    for (const char* label : {"11a1", "11a2", "11a3"}) {
        auto E = curve(label);
        auto ss = semisimplification(testing::a_table(E, 200), 5, 11, 200);
        REQUIRE(ss.reducible);
        std::set<std::string> names = {character_name(*ss.phi1), character_name(*ss.phi2)};
        CHECK(names == std::set<std::string>{"1", "chi"});
    }
    auto irr = semisimplification(testing::a_table(curve("37a1"), 200), 5, 37, 200);
    CHECK_FALSE(irr.reducible);
}

TEST_CASE("residual descriptors of the 11a class") {
    auto d1 = residual_descriptor(curve("11a1"), 5, 6, 200);
    CHECK(d1.classification == Alignment::Aligned);
    CHECK(d1.split);
    CHECK(d1.degree.n_max >= 1);
    CHECK(residual_descriptor(curve("11a2"), 5, 6, 200).classification == Alignment::Aligned);
    CHECK(residual_descriptor(curve("11a3"), 5, 6, 200).classification == Alignment::Skew);
    CHECK(residual_descriptor(curve("37a1"), 5, 6, 200).classification == Alignment::Irreducible);
    CHECK_THROWS_AS(classify_alignment({}, 5, 2), Error);
}

TEST_CASE("isogeny transform") {
    ModPnRepresentation rho{5, 3, {Mat2{1, 1, 5, 2}, Mat2{3, 0, 25, 4}}, {"g", "h"}};
    auto out = isogeny_transform(rho);
    CHECK(out.images[0] == Mat2{1, 5, 1, 2});
    CHECK(out.images[1] == Mat2{3, 0, 5, 4});
    CHECK(classify_matrix_representation(rho, true) == Alignment::Aligned);
    CHECK(classify_matrix_representation(rho, false) == Alignment::Skew);
    CHECK(classify_matrix_representation(out, true) == Alignment::Skew);
    ModPnRepresentation unit{5, 2, {Mat2{1, 0, 1, 1}}, {"g"}};
    CHECK_THROWS_AS(isogeny_transform(unit), Error);
    ModPnRepresentation vanish{5, 2, {Mat2{1, 1, 0, 1}}, {"g"}};
    CHECK_THROWS_AS(isogeny_transform(vanish), Error);
}

TEST_CASE("isogeny transform preserves trace and determinant") {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 50; ++t) {
        i64 p = (t % 2) ? 3 : 5;
        int n = 2 + t % 3;
        i64 m = ipow(p, n);
        ModPnRepresentation rho{p, n, {}, {}};
        for (int g = 0; g < 3; ++g) {
            Mat2 A{static_cast<i64>(rng() % m), static_cast<i64>(rng() % m), p * static_cast<i64>(rng() % (m / p)),
                   static_cast<i64>(rng() % m)};
            rho.images.push_back(A);
        }
        rho.images[0].c = p;  // guarantees exact valuation 1 somewhere
        auto out = isogeny_transform(rho);
        for (size_t g = 0; g < 3; ++g) {
            CHECK(trace(out.images[g], m) == trace(rho.images[g], m));
            CHECK(det(out.images[g], m) == det(rho.images[g], m));
        }
        CHECK(mod_norm(out.images[0].c, p) != 0);
    }
}
