#include "mulab/characters.hpp"

#include <numeric>
#include <sstream>

#include "mulab/errors.hpp"

namespace mulab {

namespace {

// Multiplicative order of a modulo m (a a unit).
i64 mult_order(i64 a, i64 m) {
    if (m == 1) return 1;
    i64 x = mod_norm(a, m), k = 1;
    while (x != 1) {
        x = mod_mul(x, a, m);
        ++k;
    }
    return k;
}

// Solve x = r_i mod m_i for pairwise coprime moduli.
i64 crt_one_hot(i64 M, i64 q_power, i64 value) {
    i64 other = M / q_power;
    if (other == 1) return mod_norm(value, M);
    // x = value mod q_power, x = 1 mod other
    i64 t = mod_mul(mod_norm(value - 1, q_power), mod_inv(other % q_power, q_power), q_power);
    return mod_norm(1 + t * other, M);
}

}  // namespace

UnitGroup unit_group(i64 M) {
    UnitGroup g{M, {}, {}};
    if (M <= 2) return g;
    for (auto [q, e] : factor_small(M)) {
        i64 qe = ipow(q, e);
        if (q == 2) {
            if (e >= 2) {
                g.gens.push_back(crt_one_hot(M, qe, qe - 1));
                g.orders.push_back(2);
            }
            if (e >= 3) {
                g.gens.push_back(crt_one_hot(M, qe, 5));
                g.orders.push_back(qe / 4);
            }
        } else {
            g.gens.push_back(crt_one_hot(M, qe, primitive_root_mod_prime_power(q, e)));
            g.orders.push_back(qe / q * (q - 1));
        }
    }
    return g;
}

DirichletCharacter DirichletCharacter::from_function(i64 M, i64 p, int N, const std::function<i64(i64)>& f) {
    DirichletCharacter c;
    c.group_ = unit_group(M);
    c.p_ = p;
    c.N_ = N;
    i64 m = ipow(p, N);
    c.table_.assign(static_cast<size_t>(M), 0);
    for (i64 a = 0; a < M; ++a)
        if (gcd64(a, M) == 1) c.table_[a] = mod_norm(f(a), m);
    if (M == 1) c.table_[0] = 1;
    for (i64 g : c.group_.gens) c.gen_values_.push_back(c.table_[g]);
    for (i64 a = 0; a < M; ++a) {
        if (gcd64(a, M) != 1) continue;
        for (i64 g : c.group_.gens)
            if (c.table_[mod_mul(a, g, M)] != mod_mul(c.table_[a], c.table_[g], m))
                throw Error("NotMultiplicative", "value table is not a character mod " + std::to_string(M));
    }
    return c;
}

DirichletCharacter DirichletCharacter::trivial(i64 M, i64 p, int N) {
    return from_function(M, p, N, [](i64) { return 1; });
}

DirichletCharacter DirichletCharacter::mod_p_cyclotomic(i64 p) {
    return from_function(p, p, 1, [p](i64 a) { return mod_norm(a, p); });
}

i64 DirichletCharacter::operator()(i64 a) const {
    i64 M = modulus();
    return table_[static_cast<size_t>(mod_norm(a, M))];
}

i64 DirichletCharacter::order() const {
    i64 m = ipow(p_, N_), o = 1;
    for (i64 v : gen_values_) o = std::lcm(o, mult_order(v, m));
    return o;
}

bool DirichletCharacter::is_trivial() const {
    for (i64 v : gen_values_)
        if (v != 1) return false;
    return true;
}

i64 DirichletCharacter::conductor() const {
    i64 M = modulus();
    for (i64 f = 1; f <= M; ++f) {
        if (M % f) continue;
        bool ok = true;
        for (i64 a = 1; a < M && ok; a += f)
            if (gcd64(a, M) == 1 && (*this)(a) != 1) ok = false;
        if (ok) return f;
    }
    return M;
}

DirichletCharacter DirichletCharacter::operator*(const DirichletCharacter& o) const {
    if (p_ != o.p_ || N_ != o.N_) throw Error("PrecisionMismatch", "character product across precisions");
    i64 M = std::lcm(modulus(), o.modulus());
    i64 m = ipow(p_, N_);
    const auto& a = *this;
    return from_function(M, p_, N_, [&](i64 x) { return mod_mul(a(x), o(x), m); });
}

DirichletCharacter DirichletCharacter::inverse() const {
    i64 m = ipow(p_, N_);
    const auto& a = *this;
    return from_function(modulus(), p_, N_, [&](i64 x) { return mod_inv(a(x), m); });
}

DirichletCharacter DirichletCharacter::pow(i64 e) const {
    if (e < 0) return inverse().pow(-e);
    i64 m = ipow(p_, N_);
    const auto& a = *this;
    return from_function(modulus(), p_, N_, [&](i64 x) { return mod_pow(a(x), e, m); });
}

DirichletCharacter DirichletCharacter::extend_to(i64 M) const {
    if (M % modulus()) throw Error("BadModulus", "extension modulus must be a multiple");
    const auto& a = *this;
    return from_function(M, p_, N_, [&](i64 x) { return a(x); });
}

DirichletCharacter DirichletCharacter::reduce(int n) const {
    if (n > N_) throw Error("PrecisionMismatch", "cannot raise precision by reduction");
    i64 m = ipow(p_, n);
    const auto& a = *this;
    return from_function(modulus(), p_, n, [&](i64 x) { return a(x) % m; });
}

bool DirichletCharacter::operator==(const DirichletCharacter& o) const {
    if (p_ != o.p_ || N_ != o.N_) return false;
    if (modulus() == o.modulus()) return gen_values_ == o.gen_values_;
    i64 M = std::lcm(modulus(), o.modulus());
    return extend_to(M).gen_values_ == o.extend_to(M).gen_values_;
}

std::string DirichletCharacter::describe() const {
    std::ostringstream os;
    os << "chi[mod " << modulus() << ", cond " << conductor() << ", order " << order() << ", gens";
    for (size_t i = 0; i < group_.gens.size(); ++i) os << " " << group_.gens[i] << "->" << gen_values_[i];
    os << "]";
    return os.str();
}

std::vector<DirichletCharacter> enumerate_characters(i64 M, i64 d, i64 p, int N) {
    if (M < 1) throw Error("BadModulus", "modulus must be positive");
    UnitGroup G = unit_group(M);
    i64 m = ipow(p, N);
    i64 phi = m / p * (p - 1);
    i64 g = primitive_root_mod_prime_power(p, N);
    // Admissible images of each generator: the e-th roots of unity in (Z/p^N)^x.
    std::vector<std::vector<i64>> choices;
    for (i64 ord : G.orders) {
        i64 e = std::gcd(std::gcd(ord, d), phi);
        std::vector<i64> roots;
        i64 step = mod_pow(g, phi / e, m);
        i64 x = 1;
        for (i64 k = 0; k < e; ++k) {
            roots.push_back(x);
            x = mod_mul(x, step, m);
        }
        choices.push_back(roots);
    }
    // Discrete logs of every unit with respect to the generators.
    std::vector<std::vector<i64>> logs(static_cast<size_t>(M));
    {
        std::vector<i64> exps(G.gens.size(), 0);
        size_t total = 1;
        for (i64 o : G.orders) total *= static_cast<size_t>(o);
        for (size_t t = 0; t < total; ++t) {
            i64 a = 1 % M;
            for (size_t i = 0; i < exps.size(); ++i) a = mod_mul(a, mod_pow(G.gens[i], exps[i], M), M);
            logs[a] = exps;
            for (size_t i = 0; i < exps.size(); ++i) {
                if (++exps[i] < G.orders[i]) break;
                exps[i] = 0;
            }
        }
    }
    std::vector<DirichletCharacter> out;
    std::vector<size_t> idx(choices.size(), 0);
    while (true) {
        std::vector<i64> vals;
        for (size_t i = 0; i < idx.size(); ++i) vals.push_back(choices[i][idx[i]]);
        out.push_back(DirichletCharacter::from_function(M, p, N, [&](i64 a) {
            i64 v = 1;
            for (size_t i = 0; i < vals.size(); ++i) v = mod_mul(v, mod_pow(vals[i], logs[a][i], m), m);
            return v;
        }));
        size_t i = 0;
        for (; i < idx.size(); ++i) {
            if (++idx[i] < choices[i].size()) break;
            idx[i] = 0;
        }
        if (i == idx.size()) break;
    }
    return out;
}

bool is_odd(const DirichletCharacter& chi) {
    i64 m = ipow(chi.prime(), chi.precision());
    return chi(-1) == m - 1 && m != 2;
}

DirichletCharacter teichmuller_lift(const DirichletCharacter& chi, int N_target) {
    if (chi.precision() != 1) throw Error("PrecisionMismatch", "Teichmuller lift expects a mod-p character");
    i64 p = chi.prime();
    i64 m = ipow(p, N_target), e = m / p;
    return DirichletCharacter::from_function(chi.modulus(), p, N_target, [&](i64 a) { return mod_pow(chi(a), e, m); });
}

DirichletCharacter liftable_character(i64 i, const DirichletCharacter& alpha, int n, int /*k_weight*/) {
    i64 p = alpha.prime();
    i64 pn = ipow(p, n);
    DirichletCharacter at = teichmuller_lift(alpha.precision() == 1 ? alpha : alpha.reduce(1), n);
    i64 M = std::lcm(pn, alpha.modulus());
    i64 phi = pn / p * (p - 1);
    i64 e = mod_norm(i, phi);
    return DirichletCharacter::from_function(M, p, n, [&](i64 a) { return mod_mul(mod_pow(a, e, pn), at(a), pn); });
}

}  // namespace mulab
