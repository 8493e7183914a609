#ifndef HDF_FQ_HPP
#define HDF_FQ_HPP

// Exact arithmetic in finite fields F_{p^k}, p an odd prime.
//
// A FieldCtx wraps the modulus: F_{p^k} = F_p[t]/(m(t)) with m monic
// irreducible of degree k.  Contexts are immutable, interned by (p, k), and
// the modulus is chosen deterministically (lexicographically least monic
// irreducible, comparing coefficient tuples degree-descending, equivalently
// by increasing integer code sum c_i p^i), so every run of the program and
// every thread sees the same field presentation.
//
// Fq is a plain value type: a context pointer plus an inline coefficient
// array (no heap traffic on the hot paths).

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hdf/bigint.hpp"
#include "hdf/errors.hpp"

namespace hdf {

class FieldCtx;
class Fq;

// Largest supported extension degree.  Torsion searches go up to degree 12
// and point lifting doubles that.
constexpr unsigned kMaxDegree = 24;
// Characteristic bound keeping schoolbook accumulators inside 64 bits.
constexpr std::uint32_t kMaxP = (1u << 20) - 1;

bool is_prime_u64(std::uint64_t n);

// Interned construction; also the only way to obtain a FieldCtx.
std::shared_ptr<const FieldCtx> build_extension(std::uint32_t p, unsigned k);

class FieldCtx {
public:
    std::uint32_t p() const { return p_; }
    unsigned k() const { return k_; }
    // Monic modulus m(t), length k+1, modulus()[k] == 1.
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }
    // p^k as a big integer; and as u64 when it fits.
    const BigUint& order() const { return order_; }
    std::optional<std::uint64_t> order_u64() const { return order_u64_; }

    Fq zero() const;
    Fq one() const;
    // Element with coefficient vector = base-p digits of idx (c0 least
    // significant).  This is the canonical enumeration order of the field.
    Fq element_from_index(std::uint64_t idx) const;
    // Embeds an integer (prime-subfield element).
    Fq from_int(std::uint64_t v) const;
    // Builds an element from explicit coefficients c0..c_{k-1} (mod p).
    Fq from_coeffs(const std::vector<std::uint64_t>& c) const;

    // Least quadratic non-residue in enumeration order (k>0 fields all have
    // one since p is odd).
    const Fq& non_residue() const;

    bool same(const FieldCtx& other) const { return this == &other; }

private:
    friend std::shared_ptr<const FieldCtx> build_extension(std::uint32_t, unsigned);
    friend class Fq;
    FieldCtx(std::uint32_t p, unsigned k, std::vector<std::uint32_t> modulus);

    std::uint32_t p_;
    unsigned k_;
    std::vector<std::uint32_t> modulus_;
    BigUint order_;
    std::optional<std::uint64_t> order_u64_;
    BigUint order_minus1_half_;
    // q - 1 = 2^two_adic_s_ * two_adic_t_ for Tonelli-Shanks.
    unsigned two_adic_s_ = 0;
    BigUint two_adic_t_;
    std::unique_ptr<Fq> non_residue_; // set after construction

    friend Fq sqrt_tonelli(const Fq& a);
    friend class FqOps;
};

class Fq {
public:
    Fq() : ctx_(nullptr) { c_.fill(0); }

    const FieldCtx* ctx() const { return ctx_; }
    std::uint32_t coeff(unsigned i) const { return c_[i]; }

    bool is_zero() const {
        for (unsigned i = 0; i < ctx_->k_; ++i)
            if (c_[i]) return false;
        return true;
    }

    bool operator==(const Fq& o) const {
        check_ctx(o);
        for (unsigned i = 0; i < ctx_->k_; ++i)
            if (c_[i] != o.c_[i]) return false;
        return true;
    }
    bool operator!=(const Fq& o) const { return !(*this == o); }

    Fq operator+(const Fq& o) const {
        check_ctx(o);
        Fq r(ctx_);
        std::uint32_t p = ctx_->p_;
        for (unsigned i = 0; i < ctx_->k_; ++i) {
            std::uint32_t s = c_[i] + o.c_[i];
            r.c_[i] = s >= p ? s - p : s;
        }
        return r;
    }

    Fq operator-(const Fq& o) const {
        check_ctx(o);
        Fq r(ctx_);
        std::uint32_t p = ctx_->p_;
        for (unsigned i = 0; i < ctx_->k_; ++i) {
            std::uint32_t s = c_[i] + p - o.c_[i];
            r.c_[i] = s >= p ? s - p : s;
        }
        return r;
    }

    Fq operator-() const {
        Fq r(ctx_);
        std::uint32_t p = ctx_->p_;
        for (unsigned i = 0; i < ctx_->k_; ++i)
            r.c_[i] = c_[i] ? p - c_[i] : 0;
        return r;
    }

    Fq operator*(const Fq& o) const {
        check_ctx(o);
        unsigned k = ctx_->k_;
        std::uint64_t p = ctx_->p_;
        if (k == 1) {
            Fq r(ctx_);
            r.c_[0] = (std::uint32_t)((std::uint64_t)c_[0] * o.c_[0] % p);
            return r;
        }
        // Schoolbook product then reduction by the monic modulus.  All
        // accumulator values stay below 2^63 because p < 2^20 and the
        // degree is at most 24.
        std::uint64_t acc[2 * kMaxDegree - 1] = {0};
        for (unsigned i = 0; i < k; ++i) {
            if (!c_[i]) continue;
            std::uint64_t ci = c_[i];
            for (unsigned j = 0; j < k; ++j)
                acc[i + j] += ci * o.c_[j];
        }
        const auto& m = ctx_->modulus_;
        for (unsigned i = 2 * k - 2; i >= k; --i) {
            std::uint64_t t = acc[i] % p;
            if (t) {
                // acc -= t * m shifted by i-k; add (p - m[j]) * t instead to
                // stay non-negative, deferring the final mod.
                for (unsigned j = 0; j < k; ++j)
                    acc[i - k + j] += t * (p - m[j]);
            }
            acc[i] = 0;
            if (i == k) break;
        }
        Fq r(ctx_);
        for (unsigned i = 0; i < k; ++i)
            r.c_[i] = (std::uint32_t)(acc[i] % p);
        return r;
    }

    Fq& operator+=(const Fq& o) { *this = *this + o; return *this; }
    Fq& operator-=(const Fq& o) { *this = *this - o; return *this; }
    Fq& operator*=(const Fq& o) { *this = *this * o; return *this; }
    Fq& operator/=(const Fq& o) { *this = *this / o; return *this; }

    Fq inv() const;
    Fq operator/(const Fq& o) const { return *this * o.inv(); }

    Fq pow(std::uint64_t e) const;
    Fq pow(const BigUint& e) const;

    // x -> x^p, the arithmetic Frobenius.
    Fq frobenius() const;

    // true iff the element is in the prime subfield.
    bool in_prime_field() const {
        for (unsigned i = 1; i < ctx_->k_; ++i)
            if (c_[i]) return false;
        return true;
    }

    // Canonical total order: coefficient tuples compared degree-descending
    // (the enumeration-index order).
    bool less(const Fq& o) const {
        check_ctx(o);
        for (unsigned i = ctx_->k_; i-- > 0;) {
            if (c_[i] != o.c_[i]) return c_[i] < o.c_[i];
        }
        return false;
    }

    // Enumeration index (valid when p^k fits in u64).
    std::uint64_t index() const {
        std::uint64_t idx = 0;
        for (unsigned i = ctx_->k_; i-- > 0;)
            idx = idx * ctx_->p_ + c_[i];
        return idx;
    }

    std::string to_string() const;

private:
    friend class FieldCtx;
    friend class FqOps;
    explicit Fq(const FieldCtx* ctx) : ctx_(ctx) { c_.fill(0); }

    void check_ctx(const Fq& o) const {
        if (ctx_ != o.ctx_)
            throw CtxMismatch("elements from different field contexts");
    }

    const FieldCtx* ctx_;
    std::array<std::uint32_t, kMaxDegree> c_;
};

// Canonical square root: returns the root whose coefficient tuple is least
// in the canonical order (so sqrt(a) and -sqrt(a) are disambiguated), or
// nullopt when a is a non-square.  Exhaustive scan for tiny fields, a
// Tonelli-Shanks-style computation above that.
std::optional<Fq> sqrt_in_field(const Fq& a);

// Arithmetic in Z/p^2 used by the Frobenius-lift cocycle: the interesting
// operation is the exact division by p of an element that reduces to 0 mod p.
class W2Int {
public:
    W2Int(std::uint64_t v, std::uint32_t p)
        : p_(p), p2_((std::uint64_t)p * p), v_(v % p2_) {}

    std::uint64_t value() const { return v_; }
    std::uint32_t p() const { return p_; }

    W2Int operator+(const W2Int& o) const { return with((v_ + o.v_) % p2_); }
    W2Int operator-(const W2Int& o) const { return with((v_ + p2_ - o.v_) % p2_); }
    W2Int operator*(const W2Int& o) const {
        return with((std::uint64_t)((unsigned __int128)v_ * o.v_ % p2_));
    }

    // (this)/p, defined only when this == 0 mod p; result read mod p.
    std::uint32_t div_p_mod_p() const {
        if (v_ % p_ != 0)
            throw DivisionByZero("W2Int::div_p_mod_p on a unit");
        return (std::uint32_t)((v_ / p_) % p_);
    }

    std::uint32_t mod_p() const { return (std::uint32_t)(v_ % p_); }

private:
    W2Int with(std::uint64_t v) const { W2Int r(0, p_); r.v_ = v; return r; }
    std::uint32_t p_;
    std::uint64_t p2_;
    std::uint64_t v_;
};

// A point of P^1(F_q): either finite with coordinate x, or infinity.
class ProjPoint {
public:
    static ProjPoint infinity() { return ProjPoint(); }
    explicit ProjPoint(const Fq& x) : finite_(true), x_(x) {}

    bool is_infinity() const { return !finite_; }
    const Fq& x() const {
        if (!finite_) throw BadInput("coordinate of the point at infinity");
        return x_;
    }

    bool operator==(const ProjPoint& o) const {
        if (finite_ != o.finite_) return false;
        return finite_ ? x_ == o.x_ : true;
    }
    bool operator!=(const ProjPoint& o) const { return !(*this == o); }

    std::string to_string() const {
        return finite_ ? x_.to_string() : "inf";
    }

private:
    ProjPoint() : finite_(false) {}
    bool finite_;
    Fq x_;
};

} // namespace hdf

#endif
