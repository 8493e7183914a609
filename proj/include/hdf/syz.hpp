#pragma once

// Algebraic identities tying the flow map to the curve: the Hankel
// determinant det A(lambda) and its factorization through the Hasse
// polynomial, the auxiliary B(t) monomial lemma, the structural form
// x^p (f(x^p)/g(x^p))^2 / lambda^(p-1) of the flow map, the pointwise
// comparison of the flow route against the multiplication-by-p route, and
// orbit statistics of the iterated map.

#include <cstdint>
#include <string>
#include <vector>

#include "hdf/curve.hpp"
#include "hdf/fq.hpp"
#include "hdf/poly.hpp"

namespace hdf {

// Symbolic determinant of the m x m Hankel matrix with entries
// (lambda^(i+j-1) - lambda^p)/(i+j-1), m = (p-1)/2, as a polynomial in
// lambda over F_p.  Computed fraction-free for p <= 31 and by evaluation
// over an extension followed by interpolation beyond that.  Its degree is
// exactly p(p-1)/2.
Poly det_A(std::uint32_t p);

// The same determinant evaluated at a point (dense Gaussian elimination in
// whatever field lambda lives in).
Fq det_A_at(std::uint32_t p, const Fq& lambda);

struct DetAFactorization {
    Fq c;       // the constant quotient
    bool holds; // det A = c * lambda^(m^2) (1-lambda)^(m^2) H_p(lambda)
                // with c equal to the Cauchy determinant hilbert_const(p)
};

// Divides det_A(p) exactly by lambda^(m^2) (1-lambda)^(m^2) H_p(lambda)
// and reports whether the quotient is the nonzero constant hilbert_const(p).
DetAFactorization check_detA_factorization(std::uint32_t p);

// Determinant of the m x m Cauchy matrix [1/(i+j-1)] over F_p.
Fq hilbert_const(std::uint32_t p);

// Whether det of the m x m matrix [((t+1)^(i+j-1) - 1)/(i+j-1)] over
// F_p[t] is a nonzero constant times t^((p-1)^2/4).
bool check_detB(std::uint32_t p);

// The multiplication-by-p route: lift x0 to a curve point over a quadratic
// extension if needed, multiply by p, project back to the x-line.  The
// parameter must be a prime-field value carried in the same field as x0.
ProjPoint isogeny_apply(std::uint32_t p, const Fq& lambda, const ProjPoint& x0);

// The reference for the leading coefficient of g is det A(lambda) divided
// by the constant c = hilbert_const(p) of the factorization identity; the
// measured ratio lead(g) * c / det A(lambda) is +-1 on every ordinary
// parameter checked, and which sign occurs varies with (p, lambda).
enum class LeadSign {
    plus,       // lead(g) = +det A(lambda)/c
    minus,      // lead(g) = -det A(lambda)/c
    mismatch,   // neither: falsifying evidence
    degenerate, // supersingular branch, det A(lambda) = 0
};

struct StructuralParts {
    Poly f;             // monic of degree (p-1)/2
    Poly g;             // same degree, leading coefficient +-det A(lambda)/c
    LeadSign lead_sign;
    bool degenerate;    // phi = x^(p^2), the supersingular shape
};

// Writes a degree-p^2 map over F_p as
//   phi(x) = x^p * f(x^p)^2 / (lambda^(p-1) * g(x^p)^2)
// and verifies the claim by reconstructing phi from the parts.  Throws
// StructureError when phi does not have this shape.
StructuralParts structural_decompose(const RatMap& phi, std::uint32_t p, const Fq& lambda);

struct VerificationReport {
    std::uint32_t p = 0;
    std::uint64_t lambda = 0;    // residue in [2, p-1]
    bool full_field = true;      // every point of P^1(F_{p^2}) was checked
    bool routes_agree = false;
    bool supersingular = false;
    std::uint64_t points_checked = 0;
    std::uint64_t mismatches = 0;
    std::vector<std::string> witnesses; // first few mismatching points
    bool decomposition_ok = false;
    LeadSign lead_sign = LeadSign::degenerate;
    double seconds = 0.0;
};

// Compares flow_apply against isogeny_apply on all p^2 + 1 points of
// P^1(F_{p^2}) and runs the structural decomposition of the flow map.
// Disagreements are recorded in the report, never thrown.  (Equality of the
// flow map as a rational function with its pointwise values is certified
// separately: flow_map reconstructs it from more than 2p^2 samples, enough
// to pin a degree-p^2 map.)
VerificationReport verify_conjecture(std::uint32_t p, const Fq& lambda);

// verify_conjecture for every parameter of every odd prime in [p_min,
// p_max], in parallel, merged in (p, lambda) order.
std::vector<VerificationReport> sweep(std::uint32_t p_min, std::uint32_t p_max, unsigned threads = 0);

struct OrbitResult {
    std::uint64_t tail;  // steps before the cycle is entered
    std::uint64_t cycle; // cycle length
};

// Brent cycle detection on the iterated multiplication-by-p route starting
// at x0.  The parameter may live in an extension field here.  Throws
// Inconclusive when no cycle closes within max_iter steps.
OrbitResult orbit_analysis(std::uint32_t p, const Fq& lambda, const ProjPoint& x0,
                           std::uint64_t max_iter);

} // namespace hdf
