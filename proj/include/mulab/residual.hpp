#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mulab/characters.hpp"
#include "mulab/curve.hpp"
#include "mulab/mat2.hpp"
#include "mulab/polyz.hpp"

namespace mulab {

// g_0..g_n with psi_k = g_k for odd k and psi_k = (2y + a1 x + a3) g_k for even k.
std::vector<ZPoly> division_polynomials(const EllipticCurve& E, int n);
// psi_p for odd p, degree (p^2 - 1)/2.
ZPoly division_polynomial(const EllipticCurve& E, int p);
// psi_2^2 = 4x^3 + b2 x^2 + 2 b4 x + b6.
ZPoly two_torsion_polynomial(const EllipticCurve& E);

// x([k]P) = phi_k / psi_k^2; the pair (phi_k, psi_k^2) as polynomials in x.
std::pair<ZPoly, ZPoly> multiplication_map(const EllipticCurve& E, int k);

// Whether the roots of h are closed under x -> x([k]P) for 2 <= k <= deg h,
// i.e. h cuts out the x-coordinates of a cyclic subgroup of order 2 deg h + 1.
bool is_kernel_polynomial(const EllipticCurve& E, const QPoly& h, int p);

// Monic rational kernel polynomials of degree (p-1)/2 of rational p-isogenies.
std::vector<QPoly> kernel_polynomials(const EllipticCurve& E, int p, long max_subsets = 200000);

// Codomain of the isogeny with the given kernel (odd degree), as rational
// a-invariants of a possibly non-minimal model.
std::array<mpq_class, 5> velu_image(const EllipticCurve& E, const QPoly& h);
mpq_class j_invariant(const std::array<mpq_class, 5>& a);
mpq_class j_invariant(const EllipticCurve& E);

// Eigenvalue in F_p^x of Frob_ell on the kernel line cut out by h.
i64 frobenius_scalar(const EllipticCurve& E, const QPoly& h, i64 ell, i64 p);

// The character of (Z/Np)^x of order dividing p-1 (values mod p) matching
// frobenius_scalar at every good ell <= ell_bound.
DirichletCharacter line_character(const EllipticCurve& E, const QPoly& h, i64 p, i64 ell_bound);

struct SSPair {
    bool reducible = false;
    std::optional<DirichletCharacter> phi1, phi2;
    i64 ell_bound = 0;  // every good ell up to this bound was tested
};

// Unordered pair (phi1, phi2) with phi1 phi2 = chi_bar and
// phi1(l) + phi2(l) = a_l mod p for all good l <= ell_bound.
SSPair semisimplification(const std::map<i64, i64>& a_table, i64 p, i64 conductor, i64 ell_bound);

enum class Alignment { Aligned, Skew, Irreducible };
std::string to_string(Alignment a);

struct StableLine {
    DirichletCharacter chi;
    bool from_kernel = true;
};

// Aligned iff some stable line is odd with the same p-part of conductor as
// chi_bar^{k-1}. Throws InsufficientLineData on an empty line list.
Alignment classify_alignment(const std::vector<StableLine>& lines, i64 p, int k_weight);

// Short name: "1", "chi", "chi^k", or a full description.
std::string character_name(const DirichletCharacter& chi);

struct AlignmentDegree {
    int n_max = 0;
    std::string kind = "congruence-lower-bound";
    std::vector<std::string> evidence;  // one entry per level reached
};

// Largest n <= N with a liftable chi_n^i alpha_n lifting phi1 whose
// trace congruence a_l = phi_{1,n}(l) + l phi_{1,n}(l)^{-1} mod p^n holds
// for all good l <= ell_bound. A necessary condition for alignment mod p^n.
AlignmentDegree alignment_degree(const std::map<i64, i64>& a_table, i64 p, int N, i64 conductor,
                                 const DirichletCharacter& phi1, int k_weight, i64 ell_bound);

// Conjugation by diag(p^m1, 1), m1 the least valuation of a lower-left entry.
ModPnRepresentation isogeny_transform(const ModPnRepresentation& rho);
// With e1 spanning the ordinary sub-line: aligned iff e1 is stable mod p
// and its character is odd.
Alignment classify_matrix_representation(const ModPnRepresentation& rho, bool line_character_odd);

struct ResidualDescriptor {
    std::string label;
    i64 p = 0;
    i64 conductor = 0;
    bool reducible = false;
    bool split = false;
    std::optional<DirichletCharacter> phi1, phi2;
    std::vector<QPoly> kernels;
    std::vector<StableLine> lines;
    Alignment classification = Alignment::Irreducible;
    AlignmentDegree degree;
    i64 ell_bound = 0;
};

ResidualDescriptor residual_descriptor(const EllipticCurve& E, i64 p, int N, i64 ell_bound,
                                       const std::optional<std::vector<QPoly>>& kernels = std::nullopt);

}  // namespace mulab
