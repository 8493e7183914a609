#ifndef HDF_CARTIER_HPP
#define HDF_CARTIER_HPP

// The flow route: Frobenius-twisted gluing of the rank-two logarithmic
// datum over the two charts P^1 minus {1, lambda} and P^1 minus {0, inf},
// the destabilizing sub-line bundle cut out by a finite linear system,
// and extraction of the image zero x'.

#include <array>
#include <cstdint>

#include "hdf/curve.hpp"
#include "hdf/overlap.hpp"

namespace hdf {

struct HiggsDatum {
    // lambda must take a prime-field value; x0 may live in any extension
    // carrying the same context as lambda.
    HiggsDatum(std::uint32_t p, const Fq& lambda, const ProjPoint& x0);

    std::uint32_t p;
    Fq lambda;
    ProjPoint x0;
};

struct TwistedBundle {
    HiggsDatum datum;
    // Row-major 2x2 matrices of overlap functions: the gluing from the
    // w-chart frame to the z-chart frame, and the connection tables
    // against the log frames dz/z and dw/w.
    std::array<OverlapFn, 4> gluing;
    std::array<OverlapFn, 4> conn_z;
    std::array<OverlapFn, 4> conn_w;
    int degree; // total degree of the underlying bundle
};

// Numerator of the chart-comparison cocycle: with w(z) = (z-1)/(z-t),
// t = least lift of lambda plus lift_bump * p, this is
// [(z-1)^p (z^p - t) - (z^p - 1)(z - t)^p] / p reduced mod p.
// Degree is exactly 2p - 1 with leading coefficient lambda - 1.
Poly cocycle_numerator(std::uint32_t p, const Fq& lambda, unsigned lift_bump = 0);

// The cocycle as a function on the overlap: numerator over (z-lambda)^{2p}.
OverlapFn taylor_cocycle(std::uint32_t p, const Fq& lambda);

TwistedBundle inverse_cartier(const HiggsDatum& d);

struct HnSection {
    Poly c; // z-chart upper component, degree <= (p-1)/2
    Poly D; // z^p-scaled lower component, degree <= (3p-1)/2
};

// Solves the pole-bounded gluing system for the destabilizing section.
// The kernel must be one-dimensional.
HnSection hn_sub(const TwistedBundle& V);

ProjPoint flow_apply(const HiggsDatum& d);

// Same computation built on the lift t + lift_bump * p.  The image never
// depends on the lift; this entry point lets tests pin that down.
ProjPoint flow_apply_lifted(const HiggsDatum& d, unsigned lift_bump);

// The full self-map of P^1 as a rational map over F_p, reconstructed from
// pointwise images over an extension large enough to pin degree p^2.
RatMap flow_map(std::uint32_t p, const Fq& lambda);

} // namespace hdf

#endif
