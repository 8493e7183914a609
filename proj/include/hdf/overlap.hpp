#ifndef HDF_OVERLAP_HPP
#define HDF_OVERLAP_HPP

// Functions on the two-chart overlap P^1 minus {0, 1, lambda, infinity}:
// num(z) / (z^e0 (z-1)^e1 (z-lambda)^el) with num coprime to the three
// linear factors.  Negative exponents record zeros instead of poles.

#include <string>

#include "hdf/poly.hpp"

namespace hdf {

class OverlapFn {
public:
    static OverlapFn zero(const Fq& lambda);
    static OverlapFn from_poly(Poly num, const Fq& lambda);
    // num / (z^e0 (z-1)^e1 (z-lambda)^el), canonicalized.
    static OverlapFn make(Poly num, int e0, int e1, int el, const Fq& lambda);

    const FieldCtx* ctx() const { return lambda_.ctx(); }
    const Fq& lambda() const { return lambda_; }
    const Poly& num() const { return num_; }
    bool is_zero() const { return num_.is_zero(); }
    // Nonzero constant times a monomial in z, z-1, z-lambda.
    bool is_unit() const { return num_.degree() == 0; }

    // Pole orders (negative values are vanishing orders).
    int ord_pole_zero() const { return e0_; }
    int ord_pole_one() const { return e1_; }
    int ord_pole_lambda() const { return el_; }
    int ord_pole_infinity() const;

    // Degree of the line bundle glued by this unit transition.
    int unit_degree() const;

    OverlapFn operator+(const OverlapFn& o) const;
    OverlapFn operator-(const OverlapFn& o) const;
    OverlapFn operator-() const;
    OverlapFn operator*(const OverlapFn& o) const;
    bool operator==(const OverlapFn& o) const;
    bool operator!=(const OverlapFn& o) const { return !(*this == o); }

    // z * d/dz, which preserves the pole locus.
    OverlapFn z_ddz() const;

    // Evaluation away from the positive-order poles.
    Fq eval(const Fq& x) const;

    // The same function with coefficients pushed into a larger field.
    OverlapFn base_change(const FieldCtx* dst) const;

    std::string to_string() const;

private:
    OverlapFn(Poly num, int e0, int e1, int el, Fq lambda)
        : num_(std::move(num)), e0_(e0), e1_(e1), el_(el), lambda_(std::move(lambda)) {}
    void check_compatible(const OverlapFn& o) const;

    Poly num_;
    int e0_, e1_, el_;
    Fq lambda_;
};

} // namespace hdf

#endif
