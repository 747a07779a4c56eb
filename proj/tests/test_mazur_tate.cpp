#include <doctest.h>

#include <set>

#include "fixtures.hpp"
#include "mulab/errors.hpp"

using namespace mulab;
using mulab::testing::curve;
using mulab::testing::tower;

namespace {

// Theta_n rebuilt from the symbol values: a = zeta * (1+p)^j with zeta^(p-1) = 1.
std::vector<mpq_class> theta_rational(const ManinSymbolSpace& S, const EigenSymbol& es, i64 p, int n) {
    i64 pn = ipow(p, n), m = pn * p;
    std::vector<i64> roots;
    for (i64 x = 1; x < m; ++x)
        if (mod_pow(x, p - 1, m) == 1) roots.push_back(x);
    std::vector<mpq_class> out(static_cast<size_t>(pn), 0);
    for (i64 a = 1; a < m; ++a) {
        if (a % p == 0) continue;
        i64 found = -1;
        for (i64 j = 0, g = 1; j < pn && found < 0; ++j, g = g * (1 + p) % m)
            for (i64 z : roots)
                if (z * g % m == a) found = j;
        REQUIRE(found >= 0);
        out[static_cast<size_t>(found)] += evaluate_symbol(S, es, a, m);
    }
    return out;
}

}  // namespace

TEST_CASE("theta elements match a direct rebuild") {
    ManinSymbolSpace S(11);
    auto E = curve("11a1");
    auto t = tower(S, E, 5);
    i64 mod = ipow(5, t.Nw);
    mpq_class scale = 1;
    for (int i = 0; i < t.shift; ++i) scale *= 5;
    for (int n = 0; n <= 2; ++n) {
        auto q = theta_rational(S, t.es, 5, n);
        const auto& th = t.thetas[static_cast<size_t>(n + 1)];
        REQUIRE(th.coeffs.size() == q.size());
        for (size_t j = 0; j < q.size(); ++j) CHECK(th.coeffs[j] == rat_mod(scale * q[j], mod));
    }
    // theta_0 is the sum of [a/5] over units, which equals (a_5 - 2)[0].
    auto q0 = theta_rational(S, t.es, 5, 0);
    CHECK(q0[0] == (E.a_ell(5) - 2) * evaluate_symbol(S, t.es, 0, 1));
}

TEST_CASE("theta_1 of 11a1 and its regularization") {
    ManinSymbolSpace S(11);
    auto E = curve("11a1");
    auto es = eigen_symbol(S, E, testing::a_table(E));
    auto q = theta_rational(S, es, 5, 1);
    std::multiset<std::string> coeffs;
    for (const auto& c : q) coeffs.insert(c.get_str());
    // The raw element keeps the 1/5 of the period normalization.
    CHECK(coeffs == std::multiset<std::string>{"-6/5", "-6/5", "-6/5", "-6/5", "19/5"});
    // The unit-root factor (1 - 1/alpha)^2 has valuation 2, so the regularized layer has mu = 1.
    auto t = tower(S, E, 5, 6, 1);
    CHECK(mu_lambda_of_polynomial(t.Ls[1].poly).mu - t.Ls[1].shift == 1);
}

TEST_CASE("norm relation between layers") {
    for (auto [label, p] : std::vector<std::pair<std::string, i64>>{{"11a1", 5}, {"37b1", 3}, {"26b1", 7}}) {
        auto E = curve(label);
        ManinSymbolSpace S(E.conductor);
        auto t = tower(S, E, p, 6, 3);
        i64 mod = ipow(p, t.Nw), ap = E.a_ell(p);
        for (int n = 1; n <= 3; ++n) {
            auto lhs = project(t.thetas[static_cast<size_t>(n + 1)]);
            auto nu = inflate(t.thetas[static_cast<size_t>(n - 1)]);
            const auto& prev = t.thetas[static_cast<size_t>(n)];
            REQUIRE(nu.coeffs.size() == prev.coeffs.size());
            for (size_t j = 0; j < prev.coeffs.size(); ++j)
                CHECK_MESSAGE(lhs.coeffs[j] == mod_norm(ap * prev.coeffs[j] - nu.coeffs[j], mod), label << " n=" << n);
        }
    }
}

TEST_CASE("theta construction is linear in the symbol") {
    ManinSymbolSpace S(11);
    auto E = curve("11a1");
    auto es = eigen_symbol(S, E, testing::a_table(E));
    EigenSymbol es3 = es;
    for (auto& v : es3.gen_values) v *= 3;
    auto a = theta_element(S, es, 5, 2, 8), b = theta_element(S, es3, 5, 2, 8);
    REQUIRE(a.shift == b.shift);
    for (size_t j = 0; j < a.coeffs.size(); ++j) CHECK(b.coeffs[j] == 3 * a.coeffs[j] % a.modulus());
}

TEST_CASE("augmentation of the regularized element") {
    ManinSymbolSpace S(11);
    auto E = curve("11a1");
    auto t = tower(S, E, 5);
    mpq_class zero = evaluate_symbol(S, t.es, 0, 1);
    for (const auto& L : t.Ls) {
        i64 mod = L.poly.modulus();
        PAdicElement one(5, L.poly.precision(), 1);
        PAdicElement ainv = t.alpha.reduce(L.poly.precision()).inverse();
        PAdicElement f = (one - ainv) * (one - ainv);
        mpq_class scaled = zero;
        for (int i = 0; i < L.shift; ++i) scaled *= 5;
        CHECK(augmentation(L) == mod_mul(f.value(), rat_mod(scaled, mod), mod));
    }
}

TEST_CASE("analytic invariants of reference curves") {
    struct Row {
        const char* label;
        i64 p;
        int mu, lambda;
    };
    for (Row r : {Row{"11a1", 5, 1, 0}, Row{"11a2", 5, 2, 0}, Row{"11a3", 5, 0, 0}, Row{"26b1", 7, 0, 4},
                  Row{"26b2", 7, 1, 4}, Row{"37a1", 5, 0, 1}}) {
        auto E = curve(r.label);
        ManinSymbolSpace S(E.conductor);
        auto inv = analytic_iwasawa_invariants(tower(S, E, r.p).Ls);
        CHECK_MESSAGE(inv.mu == r.mu, r.label);
        CHECK_MESSAGE(inv.lambda == r.lambda, r.label);
    }
}

TEST_CASE("lambda is constant across an isogeny class") {
    for (auto [cls, p] : std::vector<std::pair<std::vector<std::string>, i64>>{{{"11a1", "11a2", "11a3"}, 5},
                                                                              {{"37b1", "37b2", "37b3"}, 3}}) {
        std::set<int> lambdas;
        for (const auto& label : cls) {
            auto E = curve(label);
            ManinSymbolSpace S(E.conductor);
            lambdas.insert(analytic_iwasawa_invariants(tower(S, E, p).Ls).lambda);
        }
        CHECK(lambdas.size() == 1);
    }
}

TEST_CASE("stabilization needs two agreeing layers") {
    ManinSymbolSpace S(11);
    auto t = tower(S, curve("11a1"), 5, 6, 0);
    CHECK_THROWS_AS(analytic_iwasawa_invariants(t.Ls), Error);
}

TEST_CASE("theta serialization round trip") {
    ManinSymbolSpace S(11);
    auto t = tower(S, curve("11a1"), 5, 6, 2);
    for (const auto& th : t.thetas) CHECK(theta_from_json(theta_to_json(th)) == th);
    CHECK_THROWS_AS(theta_from_json("{\"p\": 5}"), Error);
}

TEST_CASE("regularized elements are compatible under projection") {
    ManinSymbolSpace S(11);
    auto t = tower(S, curve("11a1"), 5, 6, 3);
    for (size_t n = 1; n < t.Ls.size(); ++n) {
        const auto& hi = t.Ls[n];
        const auto& lo = t.Ls[n - 1];
        REQUIRE(hi.shift == lo.shift);
        int prec = std::min(hi.poly.precision(), lo.poly.precision());
        i64 mod = ipow(5, prec);
        // Reduce modulo the monic (1+T)^{p^{n-1}} - 1.
        i64 deg = ipow(5, static_cast<int>(n) - 1);
        std::vector<i64> g(static_cast<size_t>(deg) + 1, 0);
        mpz_class binom = 1;
        for (i64 k = 0; k <= deg; ++k) {
            g[static_cast<size_t>(k)] = mpz_mod(binom, mod);
            binom = binom * (deg - k) / (k + 1);
        }
        g[0] = 0;
        std::vector<i64> r = hi.poly.coeffs();
        for (auto& x : r) x = mod_norm(x, mod);
        for (i64 k = static_cast<i64>(r.size()) - 1; k >= deg; --k) {
            i64 c = r[static_cast<size_t>(k)];
            if (!c) continue;
            for (i64 i = 0; i <= deg; ++i)
                r[static_cast<size_t>(k - deg + i)] = mod_norm(r[static_cast<size_t>(k - deg + i)] - mod_mul(c, g[static_cast<size_t>(i)], mod), mod);
        }
        for (i64 i = 0; i < deg; ++i) {
            i64 expect = i < static_cast<i64>(lo.poly.coeffs().size()) ? mod_norm(lo.poly.coeffs()[static_cast<size_t>(i)], mod) : 0;
            CHECK_MESSAGE(r[static_cast<size_t>(i)] == expect, "layer " << n << " coefficient " << i);
        }
    }
}
