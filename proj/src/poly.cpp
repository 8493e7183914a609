#include "hdf/poly.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

namespace hdf {

namespace {

std::uint32_t inv_mod_prime(std::uint32_t a, std::uint32_t p) {
    if (a % p == 0) throw DivisionByZero("inverse of 0 mod p");
    std::int64_t t = 0, nt = 1, r = p, nr = a % p;
    while (nr != 0) {
        std::int64_t q = r / nr;
        std::int64_t tmp = t - q * nt; t = nt; nt = tmp;
        tmp = r - q * nr; r = nr; nr = tmp;
    }
    if (t < 0) t += p;
    return (std::uint32_t)t;
}

} // namespace

// ---------------------------------------------------------------- Poly core

void Poly::normalize() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Poly Poly::x(const FieldCtx* ctx) {
    Poly r(ctx);
    r.c_ = {ctx->zero(), ctx->one()};
    return r;
}

Poly Poly::constant(const Fq& c) {
    if (c.ctx() == nullptr) throw BadInput("constant from a null element");
    Poly r(c.ctx());
    if (!c.is_zero()) r.c_ = {c};
    return r;
}

Poly Poly::linear_root(const Fq& a) {
    Poly r(a.ctx());
    r.c_ = {-a, a.ctx()->one()};
    return r;
}

Poly Poly::from_coeffs(const FieldCtx* ctx, std::vector<Fq> coeffs) {
    Poly r(ctx);
    for (const Fq& c : coeffs)
        if (c.ctx() != ctx) throw CtxMismatch("coefficient from another field");
    r.c_ = std::move(coeffs);
    r.normalize();
    return r;
}

Poly Poly::from_int_coeffs(const FieldCtx* ctx,
                           const std::vector<std::int64_t>& coeffs) {
    std::vector<Fq> c;
    c.reserve(coeffs.size());
    std::int64_t p = ctx->p();
    for (std::int64_t v : coeffs) {
        std::int64_t m = v % p;
        if (m < 0) m += p;
        c.push_back(ctx->from_int((std::uint64_t)m));
    }
    return from_coeffs(ctx, std::move(c));
}

bool Poly::is_one() const {
    return c_.size() == 1 && c_[0] == ctx_->one();
}

bool Poly::is_monic() const {
    return !c_.empty() && c_.back() == ctx_->one();
}

Fq Poly::lead() const {
    if (c_.empty()) throw ZeroPolynomial("leading coefficient of 0");
    return c_.back();
}

bool Poly::operator==(const Poly& o) const {
    if (ctx_ != o.ctx_) return false;
    return c_ == o.c_;
}

Poly Poly::operator+(const Poly& o) const {
    check_ctx(o);
    Poly r(ctx_);
    const std::size_t n = std::max(c_.size(), o.c_.size());
    r.c_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) r.c_.push_back(coeff(i) + o.coeff(i));
    r.normalize();
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    check_ctx(o);
    Poly r(ctx_);
    const std::size_t n = std::max(c_.size(), o.c_.size());
    r.c_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) r.c_.push_back(coeff(i) - o.coeff(i));
    r.normalize();
    return r;
}

Poly Poly::operator-() const {
    Poly r(ctx_);
    r.c_.reserve(c_.size());
    for (const Fq& c : c_) r.c_.push_back(-c);
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    check_ctx(o);
    if (is_zero() || o.is_zero()) return Poly(ctx_);
    Poly r(ctx_);
    r.c_.assign(c_.size() + o.c_.size() - 1, ctx_->zero());
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        for (std::size_t j = 0; j < o.c_.size(); ++j)
            r.c_[i + j] = r.c_[i + j] + c_[i] * o.c_[j];
    }
    r.normalize();
    return r;
}

Poly Poly::operator*(const Fq& s) const {
    if (s.ctx() != ctx_) throw CtxMismatch("scalar from another field");
    if (s.is_zero()) return Poly(ctx_);
    Poly r(ctx_);
    r.c_.reserve(c_.size());
    for (const Fq& c : c_) r.c_.push_back(c * s);
    r.normalize();
    return r;
}

std::pair<Poly, Poly> Poly::divrem(const Poly& divisor) const {
    check_ctx(divisor);
    if (divisor.is_zero()) throw DivisionByZero("polynomial division by 0");
    Poly q(ctx_), r = *this;
    const int dd = divisor.degree();
    if (degree() < dd) return {q, r};
    const Fq linv = divisor.lead().inv();
    q.c_.assign((std::size_t)(degree() - dd + 1), ctx_->zero());
    while (r.degree() >= dd) {
        const int shift = r.degree() - dd;
        const Fq f = r.lead() * linv;
        q.c_[(std::size_t)shift] = f;
        for (int i = 0; i <= dd; ++i)
            r.c_[(std::size_t)(shift + i)] =
                r.c_[(std::size_t)(shift + i)] - f * divisor.c_[(std::size_t)i];
        r.normalize();
    }
    q.normalize();
    return {q, r};
}

Poly Poly::div_exact(const Poly& divisor) const {
    auto [q, r] = divrem(divisor);
    if (!r.is_zero()) throw ShapeError("division expected to be exact has a remainder");
    return q;
}

Poly Poly::derivative() const {
    Poly r(ctx_);
    if (c_.size() <= 1) return r;
    r.c_.reserve(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i)
        r.c_.push_back(c_[i] * ctx_->from_int(i % ctx_->p()));
    r.normalize();
    return r;
}

Poly Poly::pow(unsigned e) const {
    Poly r = one(ctx_), b = *this;
    while (e > 0) {
        if (e & 1u) r = r * b;
        e >>= 1u;
        if (e > 0) b = b * b;
    }
    return r;
}

Poly Poly::shifted_up(unsigned n) const {
    if (is_zero() || n == 0) return *this;
    Poly r(ctx_);
    r.c_.assign(c_.size() + n, ctx_->zero());
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i + n] = c_[i];
    return r;
}

Poly Poly::compose_linear(const Fq& a, const Fq& b) const {
    Poly lin(ctx_);
    lin.c_ = {b, a};
    lin.normalize();
    Poly r(ctx_);
    for (std::size_t i = c_.size(); i-- > 0;)
        r = r * lin + constant(c_[i]);
    return r;
}

Poly Poly::monic() const {
    if (is_zero()) throw ZeroPolynomial("monic normalization of 0");
    return *this * lead().inv();
}

Fq Poly::eval(const Fq& x) const {
    Fq r = ctx_->zero();
    for (std::size_t i = c_.size(); i-- > 0;) r = r * x + c_[i];
    return r;
}

unsigned Poly::ord_at(const Fq& a) const {
    if (is_zero()) throw ZeroPolynomial("vanishing order of 0");
    Poly f = *this;
    const Poly lin = linear_root(a);
    unsigned ord = 0;
    while (true) {
        auto [q, r] = f.divrem(lin);
        if (!r.is_zero()) return ord;
        ++ord;
        f = q;
        if (f.is_zero()) throw StructureError("deflation consumed the polynomial");
    }
}

std::string Poly::to_string(const std::string& var) const {
    if (is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (std::size_t i = c_.size(); i-- > 0;) {
        if (c_[i].is_zero()) continue;
        if (!first) out << " + ";
        first = false;
        const std::string cs = c_[i].to_string();
        if (i == 0) {
            out << cs;
        } else {
            if (cs != "1") out << cs << "*";
            out << var;
            if (i > 1) out << "^" << i;
        }
    }
    return out.str();
}

// -------------------------------------------------------- gcd and powmod

Poly poly_gcd(Poly a, Poly b) {
    if (a.ctx() != b.ctx()) throw CtxMismatch("gcd over different fields");
    while (!b.is_zero()) {
        Poly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    if (a.is_zero()) return a;
    return a.monic();
}

Poly powmod(const Poly& base, const BigUint& e, const Poly& m) {
    if (m.degree() < 1) throw BadInput("powmod needs a nonconstant modulus");
    Poly r = Poly::one(m.ctx()) % m;
    Poly b = base % m;
    if (e.is_zero()) return r;
    for (unsigned i = e.bit_length(); i-- > 0;) {
        r = (r * r) % m;
        if (e.bit(i)) r = (r * b) % m;
    }
    return r;
}

Poly powmod(const Poly& base, std::uint64_t e, const Poly& m) {
    return powmod(base, BigUint(e), m);
}

// ------------------------------------------------------------- root finding

namespace {

// g is squarefree and splits into distinct linear factors; appends its roots.
void split_linear(const Poly& g, std::vector<Fq>& out) {
    const FieldCtx* ctx = g.ctx();
    const int d = g.degree();
    if (d <= 0) return;
    if (d == 1) {
        out.push_back(-(g.coeff(0) / g.coeff(1)));
        return;
    }
    if (d == 2) {
        const Fq a = g.coeff(2), b = g.coeff(1), c = g.coeff(0);
        const Fq four = ctx->from_int(4 % ctx->p());
        const Fq disc = b * b - four * a * c;
        auto s = sqrt_in_field(disc);
        if (!s) throw Inconclusive("quadratic expected to split has no root");
        const Fq inv2a = (a + a).inv();
        out.push_back((-b + *s) * inv2a);
        out.push_back((-b - *s) * inv2a);
        return;
    }
    BigUint half = ctx->order();
    half.sub_small(1);
    half.halve();
    const std::uint64_t scan_cap = 1u << 20;
    for (std::uint64_t idx = 0; idx < scan_cap; ++idx) {
        const Fq c = ctx->element_from_index(idx);
        Poly shifted = Poly::x(ctx) + Poly::constant(c);
        Poly h = powmod(shifted, half, g) - Poly::one(ctx);
        Poly s = poly_gcd(h, g);
        if (s.degree() > 0 && s.degree() < g.degree()) {
            split_linear(s, out);
            split_linear(g.div_exact(s), out);
            return;
        }
    }
    throw Inconclusive("no separating shift found while splitting roots");
}

} // namespace

std::vector<std::pair<Fq, unsigned>> roots_in_field(const Poly& f) {
    if (f.is_zero()) throw ZeroPolynomial("roots of the zero polynomial");
    const FieldCtx* ctx = f.ctx();
    std::vector<std::pair<Fq, unsigned>> result;
    if (f.degree() < 1) return result;

    // Distinct roots in F_q are the roots of gcd(f, x^q - x).
    const Poly fm = f.monic();
    const Poly xq = powmod(Poly::x(ctx), ctx->order(), fm);
    Poly g = poly_gcd(fm, xq - Poly::x(ctx));

    std::vector<Fq> roots;
    split_linear(g, roots);

    for (const Fq& r : roots) {
        const unsigned m = f.ord_at(r);
        if (m == 0) throw StructureError("splitting produced a non-root");
        result.emplace_back(r, m);
    }
    std::sort(result.begin(), result.end(),
              [](const auto& a, const auto& b) { return a.first.less(b.first); });
    return result;
}

// ------------------------------------------------------------ interpolation

Poly interpolate(const std::vector<Fq>& xs, const std::vector<Fq>& ys) {
    if (xs.size() != ys.size()) throw ShapeError("interpolation point mismatch");
    if (xs.empty()) throw BadInput("interpolation needs at least one point");
    const FieldCtx* ctx = xs[0].ctx();
    const std::size_t n = xs.size();

    // Newton divided differences.
    std::vector<Fq> coef = ys;
    for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t i = n - 1; i >= j; --i) {
            const Fq dx = xs[i] - xs[i - j];
            if (dx.is_zero()) throw BadSamples("repeated interpolation abscissa");
            coef[i] = (coef[i] - coef[i - 1]) / dx;
            if (i == j) break;
        }
    }
    Poly p(ctx);
    for (std::size_t i = n; i-- > 0;)
        p = p * Poly::linear_root(xs[i]) + Poly::constant(coef[i]);
    return p;
}

// -------------------------------------------------- p-th roots, square roots

Poly pth_root(const Poly& f) {
    const FieldCtx* ctx = f.ctx();
    if (f.is_zero()) return f;
    const std::uint32_t p = ctx->p();
    std::vector<Fq> out((std::size_t)(f.degree() / (int)p) + 1, ctx->zero());
    for (int i = 0; i <= f.degree(); ++i) {
        const Fq c = f.coeff((std::size_t)i);
        if (c.is_zero()) continue;
        if (i % (int)p != 0)
            throw ShapeError("not a p-th power: stray exponent " + std::to_string(i));
        Fq r = c;
        for (unsigned j = 0; j + 1 < ctx->k(); ++j) r = r.frobenius();
        out[(std::size_t)(i / (int)p)] = r;
    }
    return Poly::from_coeffs(ctx, std::move(out));
}

Poly sqrt_poly(const Poly& f) {
    const FieldCtx* ctx = f.ctx();
    if (f.is_zero()) return f;
    const int d = f.degree();
    if (d % 2 != 0) throw ShapeError("square root of an odd-degree polynomial");
    auto s = sqrt_in_field(f.lead());
    if (!s) throw ShapeError("leading coefficient is not a square");
    const int h = d / 2;
    std::vector<Fq> r((std::size_t)h + 1, ctx->zero());
    r[(std::size_t)h] = *s;
    const Fq inv2s = (*s + *s).inv();
    for (int i = h - 1; i >= 0; --i) {
        Fq acc = f.coeff((std::size_t)(h + i));
        for (int a = i + 1; a <= h - 1; ++a)
            acc = acc - r[(std::size_t)a] * r[(std::size_t)(h + i - a)];
        r[(std::size_t)i] = acc * inv2s;
    }
    Poly root = Poly::from_coeffs(ctx, std::move(r));
    if (root * root != f) throw ShapeError("polynomial is not a perfect square");
    return root;
}

// ------------------------------------------------------------------- RatMap

RatMap::RatMap(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
    if (num_.ctx() != den_.ctx()) throw CtxMismatch("rational map over mixed fields");
    if (den_.is_zero()) throw DivisionByZero("rational map with zero denominator");
    if (num_.is_zero()) {
        den_ = Poly::one(den_.ctx());
        return;
    }
    const Poly g = poly_gcd(num_, den_);
    if (g.degree() > 0) {
        num_ = num_.div_exact(g);
        den_ = den_.div_exact(g);
    }
    const Fq scale = den_.lead().inv();
    num_ = num_ * scale;
    den_ = den_ * scale;
}

ProjPoint RatMap::eval(const ProjPoint& x) const {
    if (x.is_infinity()) {
        if (num_.is_zero()) return ProjPoint(ctx()->zero());
        const int dn = num_.degree(), dd = den_.degree();
        if (dn > dd) return ProjPoint::infinity();
        if (dn < dd) return ProjPoint(ctx()->zero());
        return ProjPoint(num_.lead() / den_.lead());
    }
    const Fq n = num_.eval(x.x());
    const Fq d = den_.eval(x.x());
    if (!d.is_zero()) return ProjPoint(n / d);
    if (n.is_zero())
        throw StructureError("reduced map vanished 0/0 at a point");
    return ProjPoint::infinity();
}

std::string RatMap::to_string(const std::string& var) const {
    return "(" + num_.to_string(var) + ") / (" + den_.to_string(var) + ")";
}

// -------------------------------------------------------------- PolyMatrix

PolyMatrix::PolyMatrix(std::size_t rows, std::size_t cols, const FieldCtx* ctx)
    : rows_(rows), cols_(cols), ctx_(ctx), data_(rows * cols, Poly::zero(ctx)) {
    if (rows == 0 || cols == 0) throw ShapeError("empty matrix");
}

Poly bareiss_det(const PolyMatrix& m) {
    if (m.rows() != m.cols()) throw ShapeError("determinant of a non-square matrix");
    const std::size_t n = m.rows();
    const FieldCtx* ctx = m.ctx();
    PolyMatrix w = m;
    int sign = 1;
    Poly prev = Poly::one(ctx);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (w.at(k, k).is_zero()) {
            std::size_t swap_row = k;
            for (std::size_t i = k + 1; i < n; ++i)
                if (!w.at(i, k).is_zero()) { swap_row = i; break; }
            if (swap_row == k) return Poly::zero(ctx);
            for (std::size_t j = 0; j < n; ++j)
                std::swap(w.at(k, j), w.at(swap_row, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                w.at(i, j) = (w.at(k, k) * w.at(i, j) - w.at(i, k) * w.at(k, j))
                                 .div_exact(prev);
            w.at(i, k) = Poly::zero(ctx);
        }
        prev = w.at(k, k);
    }
    Poly det = w.at(n - 1, n - 1);
    return sign < 0 ? -det : det;
}

Poly cofactor_det(const PolyMatrix& m) {
    if (m.rows() != m.cols()) throw ShapeError("determinant of a non-square matrix");
    const std::size_t n = m.rows();
    if (n > 8) throw TooLarge("cofactor determinant is for small matrices only");
    if (n == 1) return m.at(0, 0);
    Poly det = Poly::zero(m.ctx());
    for (std::size_t j = 0; j < n; ++j) {
        if (m.at(0, j).is_zero()) continue;
        PolyMatrix sub(n - 1, n - 1, m.ctx());
        for (std::size_t i = 1; i < n; ++i) {
            std::size_t cc = 0;
            for (std::size_t c = 0; c < n; ++c) {
                if (c == j) continue;
                sub.at(i - 1, cc++) = m.at(i, c);
            }
        }
        const Poly term = m.at(0, j) * cofactor_det(sub);
        det = (j % 2 == 0) ? det + term : det - term;
    }
    return det;
}

// -------------------------------------------------- rational reconstruction

RatMap rational_reconstruct(const FieldCtx* ctx, const std::vector<Sample>& samples,
                            int deg_num, int deg_den) {
    if (deg_num < 0 || deg_den < 0) throw BadInput("negative degree bound");
    const std::size_t need = (std::size_t)(deg_num + deg_den + 2);
    if (samples.size() < need)
        throw BadSamples("need at least " + std::to_string(need) + " samples, got " +
                         std::to_string(samples.size()));

    std::vector<Fq> all_x;
    all_x.reserve(samples.size());
    for (const Sample& s : samples) all_x.push_back(s.x);
    std::sort(all_x.begin(), all_x.end(),
              [](const Fq& a, const Fq& b) { return a.less(b); });
    for (std::size_t i = 0; i + 1 < all_x.size(); ++i)
        if (all_x[i] == all_x[i + 1]) throw BadSamples("duplicate abscissa");

    // Poles among the samples become forced factors of the denominator.
    Poly pole_part = Poly::one(ctx);
    std::vector<Fq> xs, ys;
    for (const Sample& s : samples) {
        if (s.y) {
            xs.push_back(s.x);
            ys.push_back(*s.y);
        } else {
            pole_part = pole_part * Poly::linear_root(s.x);
        }
    }
    if (pole_part.degree() > deg_den)
        throw NoInterpolant("more poles sampled than the denominator degree allows");

    // Interpolate y * pole_part through the finite samples, then run the
    // extended Euclidean algorithm against the sample modulus and stop at the
    // first remainder within the numerator degree bound.
    Poly modulus = Poly::one(ctx);
    for (const Fq& x : xs) modulus = modulus * Poly::linear_root(x);
    Poly q_interp = Poly::zero(ctx);
    if (!xs.empty()) {
        std::vector<Fq> scaled;
        scaled.reserve(ys.size());
        for (std::size_t i = 0; i < xs.size(); ++i)
            scaled.push_back(ys[i] * pole_part.eval(xs[i]));
        q_interp = interpolate(xs, scaled);
    }

    Poly r0 = modulus, r1 = q_interp;
    Poly t0 = Poly::zero(ctx), t1 = Poly::one(ctx);
    while (r1.degree() > deg_num) {
        auto [q, r2] = r0.divrem(r1);
        Poly t2 = t0 - q * t1;
        r0 = std::move(r1);
        r1 = std::move(r2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }

    Poly den = t1 * pole_part;
    if (den.is_zero()) throw NoInterpolant("degenerate Euclidean step");
    RatMap map(std::move(r1), std::move(den));
    if (map.num().degree() > deg_num || map.den().degree() > deg_den)
        throw NoInterpolant("no rational map within the degree bounds");
    for (const Sample& s : samples) {
        const ProjPoint got = map.eval(ProjPoint(s.x));
        const ProjPoint want = s.y ? ProjPoint(*s.y) : ProjPoint::infinity();
        if (got != want) throw NoInterpolant("candidate map fails a sample");
    }
    return map;
}

// ---------------------------------------------------------------- Embedding

Fq Embedding::embed(const Fq& a) const {
    if (a.ctx() != src_) throw CtxMismatch("embedding an element of the wrong field");
    if (src_ == dst_) return a;
    const std::uint64_t p = dst_->p();
    std::vector<std::uint64_t> acc(dst_->k(), 0);
    for (unsigned i = 0; i < src_->k(); ++i) {
        const std::uint64_t ai = a.coeff(i);
        if (ai == 0) continue;
        for (unsigned j = 0; j < dst_->k(); ++j)
            acc[j] = (acc[j] + ai * basis_[i][j]) % p;
    }
    return dst_->from_coeffs(acc);
}

std::optional<Fq> Embedding::project(const Fq& a) const {
    if (a.ctx() != dst_) throw CtxMismatch("projecting an element of the wrong field");
    if (src_ == dst_) return a;
    const std::uint64_t p = dst_->p();
    const unsigned K = dst_->k(), ks = src_->k();
    std::vector<std::uint64_t> y(K, 0);
    for (unsigned r = 0; r < K; ++r) {
        std::uint64_t s = 0;
        for (unsigned j = 0; j < K; ++j)
            s = (s + (std::uint64_t)solve_[r][j] * a.coeff(j)) % p;
        y[r] = s;
    }
    for (unsigned r = ks; r < K; ++r)
        if (y[r] != 0) return std::nullopt;
    std::vector<std::uint64_t> u(y.begin(), y.begin() + ks);
    return src_->from_coeffs(u);
}

const Embedding& get_embedding(const FieldCtx* src, const FieldCtx* dst) {
    if (src->p() != dst->p())
        throw CtxMismatch("embedding between different characteristics");
    if (dst->k() % src->k() != 0)
        throw BadInput("no embedding: source degree does not divide target degree");

    static std::mutex mtx;
    static std::map<std::tuple<std::uint32_t, unsigned, unsigned>,
                    std::unique_ptr<Embedding>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    const auto key = std::make_tuple(src->p(), src->k(), dst->k());
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;

    auto emb = std::make_unique<Embedding>();
    emb->src_ = src;
    emb->dst_ = dst;
    if (src == dst) {
        cache.emplace(key, std::move(emb));
        return *cache.find(key)->second;
    }

    // Canonical root of the source modulus inside the target field.
    std::vector<std::int64_t> mod_ints(src->modulus().begin(), src->modulus().end());
    const Poly mod_poly = Poly::from_int_coeffs(dst, mod_ints);
    const auto roots = roots_in_field(mod_poly);
    if (roots.empty())
        throw ConstructionError("source modulus has no root in the target field");
    const Fq r = roots.front().first; // least root in the canonical order
    emb->gen_image_ = r;

    const unsigned ks = src->k(), K = dst->k();
    emb->basis_.assign(ks, std::vector<std::uint32_t>(K, 0));
    Fq pw = dst->one();
    for (unsigned i = 0; i < ks; ++i) {
        for (unsigned j = 0; j < K; ++j) emb->basis_[i][j] = pw.coeff(j);
        pw = pw * r;
    }

    // Gauss-Jordan on [A | I] over F_p, where column i of A holds the target
    // coordinates of r^i.  A has full column rank, so the reduced form is
    // [I ; 0 | T] and T both solves and tests membership.
    const std::uint32_t p = dst->p();
    std::vector<std::vector<std::uint64_t>> m(
        K, std::vector<std::uint64_t>(ks + K, 0));
    for (unsigned row = 0; row < K; ++row) {
        for (unsigned i = 0; i < ks; ++i) m[row][i] = emb->basis_[i][row];
        m[row][ks + row] = 1;
    }
    for (unsigned col = 0; col < ks; ++col) {
        unsigned piv = col;
        while (piv < K && m[piv][col] % p == 0) ++piv;
        if (piv == K) throw ConstructionError("embedding basis is rank deficient");
        std::swap(m[col], m[piv]);
        const std::uint64_t inv = inv_mod_prime((std::uint32_t)(m[col][col] % p), p);
        for (unsigned j = 0; j < ks + K; ++j) m[col][j] = m[col][j] % p * inv % p;
        for (unsigned row = 0; row < K; ++row) {
            if (row == col) continue;
            const std::uint64_t f = m[row][col] % p;
            if (f == 0) continue;
            for (unsigned j = 0; j < ks + K; ++j)
                m[row][j] = (m[row][j] + (p - f) * m[col][j]) % p;
        }
    }
    emb->solve_.assign(K, std::vector<std::uint32_t>(K, 0));
    for (unsigned row = 0; row < K; ++row)
        for (unsigned j = 0; j < K; ++j)
            emb->solve_[row][j] = (std::uint32_t)(m[row][ks + j] % p);
    emb->pivot_col_.assign(ks, 0);
    for (unsigned i = 0; i < ks; ++i) emb->pivot_col_[i] = (int)i;

    cache.emplace(key, std::move(emb));
    return *cache.find(key)->second;
}

Poly embed_poly(const Poly& f, const Embedding& e) {
    std::vector<Fq> c;
    c.reserve((std::size_t)(f.degree() + 1));
    for (int i = 0; i <= f.degree(); ++i) c.push_back(e.embed(f.coeff((std::size_t)i)));
    return Poly::from_coeffs(e.dst(), std::move(c));
}

std::optional<Poly> project_poly(const Poly& f, const Embedding& e) {
    std::vector<Fq> c;
    c.reserve((std::size_t)(f.degree() + 1));
    for (int i = 0; i <= f.degree(); ++i) {
        auto v = e.project(f.coeff((std::size_t)i));
        if (!v) return std::nullopt;
        c.push_back(*v);
    }
    return Poly::from_coeffs(e.src(), std::move(c));
}

} // namespace hdf
