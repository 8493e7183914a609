#ifndef HDF_CURVE_HPP
#define HDF_CURVE_HPP

// The Legendre curve y^2 = x(x-1)(x-lambda): group law, scalar
// multiplication, point counting, torsion search, division polynomials,
// the x-line push of multiplication-by-p, and the Hasse polynomial.

#include <cstdint>
#include <optional>
#include <vector>

#include "hdf/fq.hpp"
#include "hdf/poly.hpp"

namespace hdf {

class LegendreCurve;

class CurvePoint {
public:
    bool is_infinity() const { return inf_; }
    const Fq& x() const {
        if (inf_) throw BadInput("coordinate of the point at infinity");
        return x_;
    }
    const Fq& y() const {
        if (inf_) throw BadInput("coordinate of the point at infinity");
        return y_;
    }
    const FieldCtx* ctx() const { return ctx_; }

    bool operator==(const CurvePoint& o) const {
        if (inf_ != o.inf_) return false;
        if (inf_) return ctx_ == o.ctx_;
        return x_ == o.x_ && y_ == o.y_;
    }
    bool operator!=(const CurvePoint& o) const { return !(*this == o); }

    std::string to_string() const;

private:
    friend class LegendreCurve;
    CurvePoint(const FieldCtx* ctx) : ctx_(ctx), inf_(true) {}
    CurvePoint(const Fq& x, const Fq& y)
        : ctx_(x.ctx()), inf_(false), x_(x), y_(y) {}

    const FieldCtx* ctx_;
    bool inf_;
    Fq x_, y_;
};

// pi(x, y) = x; pi(infinity) = infinity.
ProjPoint projection_pi(const CurvePoint& P);

// psi_n = x_part(x) + y * y_part(x).
struct DivisionPoly {
    Poly x_part;
    Poly y_part;
};

class LegendreCurve {
public:
    explicit LegendreCurve(const Fq& lambda);

    const FieldCtx* field() const { return ctx_; }
    const Fq& lambda() const { return lambda_; }
    std::uint32_t p() const { return ctx_->p(); }
    // y^2 = x^3 + a2 x^2 + a4 x
    const Fq& a2() const { return a2_; }
    const Fq& a4() const { return lambda_; }

    Fq rhs_at(const Fq& x) const;
    bool is_on_curve(const Fq& x, const Fq& y) const;
    CurvePoint infinity() const { return CurvePoint(ctx_); }
    CurvePoint make_point(const Fq& x, const Fq& y) const;
    // The 0, 1, or 2 rational points above x.
    std::vector<CurvePoint> points_with_x(const Fq& x) const;

    CurvePoint add_points(const CurvePoint& P, const CurvePoint& Q) const;
    CurvePoint involution_sigma(const CurvePoint& P) const;
    CurvePoint scalar_mul(std::uint64_t n, const CurvePoint& P) const;
    CurvePoint scalar_mul(const BigUint& n, const CurvePoint& P) const;

    // Exhaustive #C(F_q) via the quadratic character; TooLarge above 10^6.
    std::uint64_t point_count() const;
    std::int64_t trace() const; // q + 1 - #C(F_q)
    // #C(F_{q^j}) through the zeta-function recursion on traces.
    std::uint64_t point_count_ext(unsigned j) const;
    bool is_supersingular_by_count() const; // trace divisible by p
    std::uint64_t point_order(const CurvePoint& P) const;

    // Reduced division polynomial: psi_n = Psi_n (n odd), 2y * Psi_n (n even),
    // via the characteristic-free b-invariant recurrences.
    DivisionPoly division_poly(unsigned n) const;
    // x-coordinate map of [n] as a degree-n^2 rational map; requires p ∤ n.
    RatMap mult_x_map(unsigned n) const;

    // All points of exact order N rational over F_{p^k}.  The target field
    // must contain the coefficient field; p | N is rejected.
    std::vector<CurvePoint> strict_torsion_points(unsigned N, unsigned k) const;

    struct POrderPoint {
        unsigned ext_degree; // j with the point rational over F_{q^j}
        CurvePoint point;    // exact order p, coordinates over F_{p^{k*j}}
    };
    // Searches j = 1, 2, ... while k*j stays within both max_k (counted in
    // powers of the prime field) and the representable degree cap.
    std::optional<POrderPoint> p_torsion_point(unsigned max_k = 12) const;

    // Same curve over a larger field (canonical embedding of lambda).
    LegendreCurve base_change(const FieldCtx* bigger) const;

    // x-line push of multiplication by p: pi([p] lift(x)), lifting through
    // the quadratic extension when y is irrational.
    ProjPoint isogeny_x(const ProjPoint& x) const;

private:
    CurvePoint add_unchecked(const CurvePoint& P, const CurvePoint& Q) const;
    void check_point(const CurvePoint& P) const;

    const FieldCtx* ctx_;
    Fq lambda_;
    Fq a2_; // -(1 + lambda)
};

// H_p(lambda) = sum_i binom(m, i)^2 lambda^i over F_p, m = (p-1)/2.
Poly hasse_poly(std::uint32_t p);
// H_p(lambda) = 0, for lambda in any extension of F_p.
bool is_supersingular(std::uint32_t p, const Fq& lambda);

} // namespace hdf

#endif
