#include <doctest.h>

#include "mulab/errors.hpp"
#include "mulab/lambda_structure.hpp"
#include "scramble.hpp"

using namespace mulab;

namespace {

LambdaPresentation make(i64 p, int N, int MT, SeriesMatrix rows) {
    LambdaPresentation P;
    P.p = p;
    P.N = N;
    P.MT = MT;
    P.rows = std::move(rows);
    return P;
}

}  // namespace

TEST_CASE("Smith form over F_p[[T]]") {
    auto s = smith_rank_over_power_series_field_char_p({{{0, 0, 1}}}, 5, 8);
    CHECK(s.rank == 1);
    CHECK(s.exponents == std::vector<int>{2});
    CHECK(smith_rank_over_power_series_field_char_p({{{5}}}, 5, 8).rank == 0);
    auto r1 = smith_rank_over_power_series_field_char_p({{{1}, {0, 1}}, {{0, 1}, {0, 0, 1}}}, 5, 8);
    CHECK(r1.rank == 1);
    CHECK(r1.exponents == std::vector<int>{0});
    auto r2 = smith_rank_over_power_series_field_char_p({{{0, 1}, {0}}, {{1}, {0, 0, 0, 1}}}, 3, 8);
    CHECK(r2.rank == 2);
    CHECK(r2.exponents == std::vector<int>{0, 4});
}

TEST_CASE("graded ranks") {
    CHECK(graded_ranks(make(5, 3, 8, {{{5}, {0}}, {{0}, {25}}})) == std::vector<int>{2, 1, 0});
    CHECK(graded_ranks(make(5, 3, 8, {{{0, 1}}})) == std::vector<int>{0, 0, 0});
    // p^{k-1}M / p^k M for M = Lambda/(pT): only the first piece is not T-torsion.
    CHECK(graded_ranks(make(5, 3, 8, {{{0, 5}}})) == std::vector<int>{1, 0, 0});
}

TEST_CASE("mu profiles of reference modules") {
    auto a = mu_profile(make(5, 3, 8, {{{5}, {0}}, {{0}, {25}}}));
    CHECK(a == MuProfile{{1, 1}, 3, 2, 2});
    auto b = mu_profile(make(3, 4, 8, {{{3}, {3}}, {{3}, {6, 1}}}));
    CHECK(b == MuProfile{{1}, 1, 1, 1});
    auto c = mu_profile(make(5, 3, 8, {{{5, 1}}}));
    CHECK(c == MuProfile{{0}, 0, 0, 0});
    auto d = mu_profile(make(7, 4, 8, {{{49}, {0}, {0}}, {{0}, {49}, {0}}, {{0}, {0}, {343}}}));
    CHECK(d == MuProfile{{0, 2, 1}, 7, 3, 3});
}

TEST_CASE("insufficient precision is reported") {
    CHECK_THROWS_AS(mu_profile(make(5, 2, 8, {{{25}}})), Error);
    CHECK_THROWS_AS(mu_profile(make(2, 2, 8, {{{2}}})), Error);
    CHECK_THROWS_AS(parse_presentation("{\"p\": 5}"), Error);
}

TEST_CASE("presentation files") {
    auto P = load_presentation(std::string(MULAB_DATA_DIR) + "/presentations/mu_vector_1_1.json");
    CHECK(mu_profile(P) == MuProfile{{1, 1}, 3, 2, 2});
    CHECK(torsion_certified(P));
}

TEST_CASE("scrambled presentations recover the diagonal profile") {
    std::mt19937_64 rng(2024);
    for (int t = 0; t < 40; ++t) {
        i64 p = (t % 2) ? 3 : 5;
        auto sm = testing::random_scrambled_module(rng, p);
        CHECK(mu_profile(sm.presentation) == sm.expected);
    }
}

TEST_CASE("determinant valuation matches mu for 2x2 torsion modules") {
    // For Lambda/(p^a) + Lambda/(p^b) scrambled by an elementary operation, det = p^{a+b} * unit.
    std::mt19937_64 rng(5);
    for (int a = 1; a <= 2; ++a)
        for (int b = 1; b <= 2; ++b) {
            i64 c = static_cast<i64>(rng() % 125);
            SeriesMatrix rows = {{{ipow(5, a)}, {0}}, {testing::poly_mul({c, 1}, {ipow(5, a)}, 625), {ipow(5, b)}}};
            auto prof = mu_profile(make(5, 4, 8, rows));
            CHECK(prof.mu == a + b);
        }
}
