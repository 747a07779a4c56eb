#include "mulab/mazur_tate.hpp"

#include <json.hpp>

#include "mulab/errors.hpp"

namespace mulab {

i64 MazurTateElement::modulus() const { return ipow(p, N); }

int denominator_shift(const EigenSymbol& es, i64 p) { return vp(es.denominator, p); }

int working_precision(int N, int n_max, int shift) { return N + n_max + 2 + shift; }

MazurTateElement theta_element(const ManinSymbolSpace& S, const EigenSymbol& es, i64 p, int n, int N,
                               const std::string& label) {
    if (n < -1) throw Error("BadLayer", "layer must be >= -1");
    if (S.level() % p == 0) throw Error("BadPrime", "p divides the level");
    MazurTateElement th;
    th.label = label;
    th.normalization_id = es.normalization_id;
    th.p = p;
    th.N = N;
    th.n = n;
    th.shift = denominator_shift(es, p);
    i64 mod = ipow(p, N);
    mpq_class scale = 1;
    for (int i = 0; i < th.shift; ++i) scale *= p;
    if (n == -1) {
        th.coeffs = {rat_mod(scale * evaluate_symbol(S, es, 0, 1), mod)};
        return th;
    }
    i64 pn = ipow(p, n), m = pn * p;
    // Discrete log of <a> = a / omega(a) to base 1+p modulo p^{n+1}.
    std::vector<i64> dlog(static_cast<size_t>(m), -1);
    for (i64 j = 0, x = 1; j < pn; ++j, x = x * (1 + p) % m) dlog[x] = j;
    th.coeffs.assign(static_cast<size_t>(pn), 0);
    for (i64 a = 1; a < m; ++a) {
        if (a % p == 0) continue;
        i64 omega = mod_pow(a, pn, m);
        i64 u = mod_mul(a, mod_inv(omega, m), m);
        i64 j = dlog[u];
        if (j < 0) throw Error("InvariantViolation", "principal unit outside <1+p>");
        i64 v = rat_mod(scale * evaluate_symbol(S, es, a, m), mod);
        th.coeffs[j] = (th.coeffs[j] + v) % mod;
    }
    return th;
}

MazurTateElement project(const MazurTateElement& theta) {
    if (theta.n < 1) throw Error("BadLayer", "projection needs layer >= 1");
    MazurTateElement out = theta;
    out.n = theta.n - 1;
    i64 size = ipow(theta.p, out.n), mod = theta.modulus();
    out.coeffs.assign(static_cast<size_t>(size), 0);
    for (size_t k = 0; k < theta.coeffs.size(); ++k)
        out.coeffs[k % size] = (out.coeffs[k % size] + theta.coeffs[k]) % mod;
    return out;
}

MazurTateElement inflate(const MazurTateElement& theta) {
    MazurTateElement out = theta;
    out.n = theta.n + 1;
    i64 size = ipow(theta.p, out.n), mod = theta.modulus();
    i64 factor = theta.n == -1 ? theta.p - 1 : 1;
    out.coeffs.assign(static_cast<size_t>(size), 0);
    for (i64 k = 0; k < size; ++k)
        out.coeffs[k] = mod_mul(theta.coeffs[k % theta.coeffs.size()], factor, mod);
    return out;
}

RegularizedL regularized_Lp(const MazurTateElement& theta_n, const MazurTateElement& theta_prev,
                            const PAdicElement& alpha) {
    if (theta_prev.n != theta_n.n - 1 || theta_prev.p != theta_n.p || theta_prev.N != theta_n.N ||
        theta_prev.shift != theta_n.shift)
        throw Error("PrecisionMismatch", "incompatible theta elements");
    if (alpha.prime() != theta_n.p || alpha.precision() != theta_n.N)
        throw Error("PrecisionMismatch", "alpha precision differs from theta precision");
    if (valuation(alpha).value != 0 || valuation(alpha).exhausted) throw Error("NotUnit", "alpha must be a unit");
    i64 p = theta_n.p, mod = theta_n.modulus();
    int n = theta_n.n;
    PAdicElement ainv = alpha.inverse();
    i64 c1 = ainv.pow(n + 1).value(), c2 = ainv.pow(n + 2).value();
    MazurTateElement nu = inflate(theta_prev);
    std::vector<i64> group(theta_n.coeffs.size());
    for (size_t j = 0; j < group.size(); ++j)
        group[j] = mod_norm(mod_mul(c1, theta_n.coeffs[j], mod) - mod_mul(c2, nu.coeffs[j], mod), mod);
    // gamma^j = (1+T)^j; binomials built row by row mod p^N.
    int MT = static_cast<int>(group.size());
    std::vector<i64> poly(group.size(), 0), binom(group.size(), 0);
    binom[0] = 1;
    for (size_t j = 0; j < group.size(); ++j) {
        if (j > 0)
            for (size_t i = j; i >= 1; --i) binom[i] = (binom[i] + binom[i - 1]) % mod;
        for (size_t i = 0; i <= j; ++i) poly[i] = (poly[i] + mod_mul(group[j], binom[i], mod)) % mod;
    }
    return RegularizedL{IwasawaPolynomial(p, theta_n.N, MT, poly), theta_n.shift, n};
}

i64 augmentation(const RegularizedL& L) { return L.poly[0]; }

AnalyticInvariants analytic_iwasawa_invariants(const std::vector<RegularizedL>& Ls) {
    if (Ls.size() < 2) throw Error("NotStabilized", "need at least two consecutive layers");
    AnalyticInvariants out;
    for (size_t i = 0; i < Ls.size(); ++i) {
        if (i > 0 && Ls[i].layer != Ls[i - 1].layer + 1) throw Error("BadLayer", "layers must be consecutive");
        LayerReading r;
        r.layer = Ls[i].layer;
        if (Ls[i].poly.is_zero()) {
            r.exhausted = true;
        } else {
            r.ml = mu_lambda_of_polynomial(Ls[i].poly);
            r.ml.mu -= Ls[i].shift;
        }
        out.per_layer.push_back(r);
    }
    const LayerReading* last = nullptr;
    for (const auto& r : out.per_layer) {
        if (r.exhausted) continue;
        if (last && r.ml.mu > last->ml.mu)
            throw Error("InvariantViolation",
                        "mu increased from layer " + std::to_string(last->layer) + " to " + std::to_string(r.layer));
        last = &r;
    }
    const auto& final = out.per_layer.back();
    if (final.exhausted) throw Error("NotStabilized", "top layer vanished at working precision");
    size_t first = out.per_layer.size() - 1;
    while (first > 0 && !out.per_layer[first - 1].exhausted && out.per_layer[first - 1].ml == final.ml) --first;
    if (first == out.per_layer.size() - 1) throw Error("NotStabilized", "the top two layers disagree");
    out.mu = final.ml.mu;
    out.lambda = final.ml.lambda;
    out.stabilized_at = out.per_layer[first].layer;
    return out;
}

std::string theta_to_json(const MazurTateElement& theta) {
    nlohmann::ordered_json j;
    j["label"] = theta.label;
    j["p"] = theta.p;
    j["N"] = theta.N;
    j["n"] = theta.n;
    j["normalization"] = theta.normalization_id;
    j["shift"] = theta.shift;
    j["coeffs"] = theta.coeffs;
    return j.dump() + "\n";
}

MazurTateElement theta_from_json(const std::string& text) {
    try {
        auto j = nlohmann::json::parse(text);
        MazurTateElement t;
        t.label = j.at("label").get<std::string>();
        t.p = j.at("p").get<i64>();
        t.N = j.at("N").get<int>();
        t.n = j.at("n").get<int>();
        t.normalization_id = j.at("normalization").get<std::string>();
        t.shift = j.value("shift", 0);
        t.coeffs = j.at("coeffs").get<std::vector<i64>>();
        return t;
    } catch (const nlohmann::json::exception& e) {
        throw Error("ParseError", e.what());
    }
}

}  // namespace mulab
