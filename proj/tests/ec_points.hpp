#pragma once
// Independent point arithmetic on a Weierstrass curve over F_q, q = 3 mod 4.

#include <optional>

#include "mulab/arith.hpp"
#include "mulab/curve.hpp"
#include "mulab/polyz.hpp"

namespace mulab::testing {

struct FqCurve {
    i64 q;
    i64 a1, a2, a3, a4, a6;
    explicit FqCurve(const EllipticCurve& E, i64 q_) : q(q_) {
        a1 = mod_norm(E.ainvs[0], q);
        a2 = mod_norm(E.ainvs[1], q);
        a3 = mod_norm(E.ainvs[2], q);
        a4 = mod_norm(E.ainvs[3], q);
        a6 = mod_norm(E.ainvs[4], q);
    }
    i64 m(i64 x, i64 y) const { return mod_mul(x, y, q); }
    i64 inv(i64 x) const { return mod_inv(x, q); }
    // Discriminant of the quadratic in y at abscissa x.
    i64 disc(i64 x) const {
        i64 s = mod_norm(m(a1, x) + a3, q);
        i64 rhs = mod_norm(m(m(x, x), x) + m(a2, m(x, x)) + m(a4, x) + a6, q);
        return mod_norm(m(s, s) + 4 * rhs, q);
    }
    i64 count() const {
        i64 n = 1;
        for (i64 x = 0; x < q; ++x) {
            i64 D = disc(x);
            n += D == 0 ? 1 : (mod_pow(D, (q - 1) / 2, q) == 1 ? 2 : 0);
        }
        return n;
    }
    using Pt = std::optional<std::pair<i64, i64>>;
    Pt lift_x(i64 x) const {
        i64 D = disc(x);
        if (D != 0 && mod_pow(D, (q - 1) / 2, q) != 1) return std::nullopt;
        i64 r = mod_pow(D, (q + 1) / 4, q);
        i64 y = m(mod_norm(r - m(a1, x) - a3, q), inv(2));
        return std::make_pair(x, y);
    }
    Pt neg(const Pt& P) const {
        if (!P) return P;
        return std::make_pair(P->first, mod_norm(-P->second - m(a1, P->first) - a3, q));
    }
    Pt add(const Pt& P, const Pt& Q) const {
        if (!P) return Q;
        if (!Q) return P;
        auto [x1, y1] = *P;
        auto [x2, y2] = *Q;
        i64 lam;
        if (x1 == x2) {
            if (neg(Q) == P) return std::nullopt;
            i64 num = mod_norm(3 * m(x1, x1) + 2 * m(a2, x1) + a4 - m(a1, y1), q);
            i64 den = mod_norm(2 * y1 + m(a1, x1) + a3, q);
            lam = m(num, inv(den));
        } else {
            lam = m(mod_norm(y2 - y1, q), inv(mod_norm(x2 - x1, q)));
        }
        i64 x3 = mod_norm(m(lam, lam) + m(a1, lam) - a2 - x1 - x2, q);
        i64 y3 = mod_norm(-(m(lam + a1, x3)) - (y1 - m(lam, x1)) - a3, q);
        return std::make_pair(x3, y3);
    }
    Pt mul(i64 k, Pt P) const {
        Pt R = std::nullopt;
        while (k > 0) {
            if (k & 1) R = add(R, P);
            P = add(P, P);
            k >>= 1;
        }
        return R;
    }
};

inline i64 eval_mod(const ZPoly& f, i64 x, i64 q) {
    mpz_class acc = 0;
    for (size_t i = f.size(); i-- > 0;) acc = (acc * x + f[i]) % q;
    return mpz_mod(acc, q);
}

}  // namespace mulab::testing
