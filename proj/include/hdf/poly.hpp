#ifndef HDF_POLY_HPP
#define HDF_POLY_HPP

// Dense univariate polynomials over F_{p^k}, reduced rational maps on P^1,
// small polynomial matrices with a fraction-free determinant, root finding,
// interpolation, and rational-function reconstruction from point samples.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hdf/fq.hpp"

namespace hdf {

class Poly {
public:
    Poly() : ctx_(nullptr) {}
    explicit Poly(const FieldCtx* ctx) : ctx_(ctx) {}

    static Poly zero(const FieldCtx* ctx) { return Poly(ctx); }
    static Poly one(const FieldCtx* ctx) { return constant(ctx->one()); }
    static Poly x(const FieldCtx* ctx);
    static Poly constant(const Fq& c);
    // x - a
    static Poly linear_root(const Fq& a);
    static Poly from_coeffs(const FieldCtx* ctx, std::vector<Fq> coeffs);
    static Poly from_int_coeffs(const FieldCtx* ctx,
                                const std::vector<std::int64_t>& coeffs);

    const FieldCtx* ctx() const { return ctx_; }
    int degree() const { return (int)c_.size() - 1; } // -1 for the zero poly
    bool is_zero() const { return c_.empty(); }
    bool is_one() const;
    bool is_monic() const;

    // Coefficient of x^i (zero beyond the degree).
    Fq coeff(std::size_t i) const {
        return i < c_.size() ? c_[i] : ctx_->zero();
    }
    const std::vector<Fq>& coeffs() const { return c_; }
    Fq lead() const;

    bool operator==(const Poly& o) const;
    bool operator!=(const Poly& o) const { return !(*this == o); }

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator-() const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const Fq& s) const;
    Poly& operator+=(const Poly& o) { *this = *this + o; return *this; }
    Poly& operator-=(const Poly& o) { *this = *this - o; return *this; }
    Poly& operator*=(const Poly& o) { *this = *this * o; return *this; }

    // Euclidean division; divisor must be nonzero.
    std::pair<Poly, Poly> divrem(const Poly& divisor) const;
    Poly operator/(const Poly& o) const { return divrem(o).first; }
    Poly operator%(const Poly& o) const { return divrem(o).second; }
    // Exact division: throws ShapeError when the remainder is nonzero.
    Poly div_exact(const Poly& divisor) const;

    Poly derivative() const;
    Poly pow(unsigned e) const;
    // Multiply by x^n.
    Poly shifted_up(unsigned n) const;
    // P(a*x + b)
    Poly compose_linear(const Fq& a, const Fq& b) const;
    Poly monic() const;

    Fq eval(const Fq& x) const;

    // Order of vanishing at a point (degree+1 capped loop); 0 if P(a) != 0.
    unsigned ord_at(const Fq& a) const;

    std::string to_string(const std::string& var = "x") const;

private:
    void normalize();
    void check_ctx(const Poly& o) const {
        if (ctx_ != o.ctx_) throw CtxMismatch("polynomials over different fields");
    }
    const FieldCtx* ctx_;
    std::vector<Fq> c_;
};

Poly poly_gcd(Poly a, Poly b); // monic

// base^e mod m (m nonconstant), with a big-integer exponent.
Poly powmod(const Poly& base, const BigUint& e, const Poly& m);
Poly powmod(const Poly& base, std::uint64_t e, const Poly& m);

// All roots in the coefficient field, with multiplicities, sorted canonically.
std::vector<std::pair<Fq, unsigned>> roots_in_field(const Poly& f);

// Newton interpolation through distinct abscissae.
Poly interpolate(const std::vector<Fq>& xs, const std::vector<Fq>& ys);

// r with r(x)^p = f(x); requires the support of f to lie on multiples of p.
Poly pth_root(const Poly& f);

// Exact polynomial square root (ShapeError when f is not a perfect square).
Poly sqrt_poly(const Poly& f);

// ---- reduced rational self-maps of P^1 ----

class RatMap {
public:
    // Reduces num/den: divides by the gcd and normalizes the denominator to
    // be monic.  den must be nonzero.
    RatMap(Poly num, Poly den);

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    int degree() const { return std::max(num_.degree(), den_.degree()); }
    const FieldCtx* ctx() const { return num_.ctx(); }

    ProjPoint eval(const ProjPoint& x) const;

    bool operator==(const RatMap& o) const {
        return num_ == o.num_ && den_ == o.den_;
    }

    std::string to_string(const std::string& var = "x") const;

private:
    Poly num_, den_;
};

// ---- matrices of polynomials ----

class PolyMatrix {
public:
    PolyMatrix(std::size_t rows, std::size_t cols, const FieldCtx* ctx);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    Poly& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Poly& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    const FieldCtx* ctx() const { return ctx_; }

private:
    std::size_t rows_, cols_;
    const FieldCtx* ctx_;
    std::vector<Poly> data_;
};

// Fraction-free (Bareiss) determinant over F_q[x]; all divisions exact.
Poly bareiss_det(const PolyMatrix& m);

// Reference determinant by cofactor expansion; small n only (tests/oracles).
Poly cofactor_det(const PolyMatrix& m);

// ---- rational reconstruction ----

// A sample is (x, y) with y == nullopt encoding the value infinity.
struct Sample {
    Fq x;
    std::optional<Fq> y;
};

// Recovers the unique rational map of numerator degree <= deg_num and
// denominator degree <= deg_den through the samples (Cauchy interpolation
// via the extended Euclidean algorithm), verifying every sample afterwards.
// Throws BadSamples (duplicate abscissae / too few) or NoInterpolant.
RatMap rational_reconstruct(const FieldCtx* ctx, const std::vector<Sample>& samples,
                            int deg_num, int deg_den);

// ---- subfield embeddings F_{p^j} -> F_{p^k}, j | k ----

class Embedding {
public:
    const FieldCtx* src() const { return src_; }
    const FieldCtx* dst() const { return dst_; }

    Fq embed(const Fq& a) const;
    // Inverse image when the element lies in the embedded subfield.
    std::optional<Fq> project(const Fq& a) const;

private:
    friend const Embedding& get_embedding(const FieldCtx* src, const FieldCtx* dst);
    const FieldCtx* src_ = nullptr;
    const FieldCtx* dst_ = nullptr;
    Fq gen_image_;                       // canonical root of src modulus in dst
    std::vector<std::vector<std::uint32_t>> basis_; // dst coords of r^i
    // row-reduced solve data for project()
    std::vector<std::vector<std::uint32_t>> solve_;
    std::vector<int> pivot_col_;
};

// Interned; embeds along the canonical (least) root of the source modulus.
const Embedding& get_embedding(const FieldCtx* src, const FieldCtx* dst);

// Coefficient-wise embedding of a polynomial.
Poly embed_poly(const Poly& f, const Embedding& e);
// Coefficient-wise projection; nullopt if any coefficient falls outside.
std::optional<Poly> project_poly(const Poly& f, const Embedding& e);

} // namespace hdf

#endif
