#include "hdf/overlap.hpp"

#include <sstream>

namespace hdf {

namespace {

Fq signed_from_int(const FieldCtx* ctx, int v) {
    return v >= 0 ? ctx->from_int((std::uint64_t)v) : -ctx->from_int((std::uint64_t)(-v));
}

// x^e for signed e (inverts for negative exponents).
Fq pow_signed(const Fq& x, int e) {
    if (e == 0) return x.ctx()->one();
    Fq b = e > 0 ? x : x.inv();
    Fq acc = x.ctx()->one();
    for (int i = 0; i < (e > 0 ? e : -e); ++i) acc = acc * b;
    return acc;
}

void strip_factor(Poly& num, const Fq& at, int& expo) {
    const unsigned v = num.ord_at(at);
    if (v == 0) return;
    const Poly lin = Poly::linear_root(at);
    for (unsigned i = 0; i < v; ++i) num = num.div_exact(lin);
    expo -= (int)v;
}

} // namespace

OverlapFn OverlapFn::zero(const Fq& lambda) {
    return make(Poly::zero(lambda.ctx()), 0, 0, 0, lambda);
}

OverlapFn OverlapFn::from_poly(Poly num, const Fq& lambda) {
    return make(std::move(num), 0, 0, 0, lambda);
}

OverlapFn OverlapFn::make(Poly num, int e0, int e1, int el, const Fq& lambda) {
    if (!lambda.ctx()) throw BadInput("overlap function needs a field");
    if (lambda.is_zero() || lambda == lambda.ctx()->one())
        throw BadLambda("overlap pole parameter must avoid 0 and 1");
    if (num.ctx() != lambda.ctx())
        throw CtxMismatch("numerator and pole parameter over different fields");
    if (num.is_zero()) return OverlapFn(std::move(num), 0, 0, 0, lambda);
    strip_factor(num, lambda.ctx()->zero(), e0);
    strip_factor(num, lambda.ctx()->one(), e1);
    strip_factor(num, lambda, el);
    return OverlapFn(std::move(num), e0, e1, el, lambda);
}

int OverlapFn::ord_pole_infinity() const {
    if (num_.is_zero()) return 0;
    return num_.degree() - e0_ - e1_ - el_;
}

int OverlapFn::unit_degree() const {
    if (!is_unit()) throw ShapeError("transition is not a unit on the overlap");
    return e0_ + e1_ + el_;
}

void OverlapFn::check_compatible(const OverlapFn& o) const {
    if (lambda_ != o.lambda_)
        throw CtxMismatch("overlap functions with different pole configurations");
}

OverlapFn OverlapFn::operator+(const OverlapFn& o) const {
    check_compatible(o);
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    const int E0 = std::max(e0_, o.e0_), E1 = std::max(e1_, o.e1_), El = std::max(el_, o.el_);
    const FieldCtx* f = ctx();
    const Poly z = Poly::x(f);
    const Poly z1 = Poly::linear_root(f->one());
    const Poly zl = Poly::linear_root(lambda_);
    const auto scale = [&](const OverlapFn& g) {
        return g.num_ * z.pow((unsigned)(E0 - g.e0_)) * z1.pow((unsigned)(E1 - g.e1_)) *
               zl.pow((unsigned)(El - g.el_));
    };
    return make(scale(*this) + scale(o), E0, E1, El, lambda_);
}

OverlapFn OverlapFn::operator-() const {
    return OverlapFn(-num_, e0_, e1_, el_, lambda_);
}

OverlapFn OverlapFn::operator-(const OverlapFn& o) const { return *this + (-o); }

OverlapFn OverlapFn::operator*(const OverlapFn& o) const {
    check_compatible(o);
    return make(num_ * o.num_, e0_ + o.e0_, e1_ + o.e1_, el_ + o.el_, lambda_);
}

bool OverlapFn::operator==(const OverlapFn& o) const {
    check_compatible(o);
    if (is_zero() || o.is_zero()) return is_zero() && o.is_zero();
    return num_ == o.num_ && e0_ == o.e0_ && e1_ == o.e1_ && el_ == o.el_;
}

OverlapFn OverlapFn::z_ddz() const {
    if (is_zero()) return *this;
    const FieldCtx* f = ctx();
    const Poly z = Poly::x(f);
    const Poly z1 = Poly::linear_root(f->one());
    const Poly zl = Poly::linear_root(lambda_);
    // z f'/f = z num'/num - e0 - e1 z/(z-1) - el z/(z-lambda)
    const Poly P = z * num_.derivative() * z1 * zl -
                   num_ * (z1 * zl * signed_from_int(f, e0_) +
                           z * zl * signed_from_int(f, e1_) +
                           z * z1 * signed_from_int(f, el_));
    return make(P, e0_, e1_ + 1, el_ + 1, lambda_);
}

Fq OverlapFn::eval(const Fq& x) const {
    if (x.ctx() != ctx()) throw CtxMismatch("evaluation point over a different field");
    if (is_zero()) return ctx()->zero();
    Fq val = num_.eval(x);
    const Fq pts[3] = {ctx()->zero(), ctx()->one(), lambda_};
    const int es[3] = {e0_, e1_, el_};
    for (int i = 0; i < 3; ++i) {
        const Fq b = x - pts[i];
        if (b.is_zero()) {
            if (es[i] > 0) throw BadInput("evaluation at a pole of the overlap function");
            if (es[i] < 0) return ctx()->zero();
        } else {
            val = val * pow_signed(b, -es[i]);
        }
    }
    return val;
}

OverlapFn OverlapFn::base_change(const FieldCtx* dst) const {
    if (dst == ctx()) return *this;
    const Embedding& e = get_embedding(ctx(), dst);
    return OverlapFn(embed_poly(num_, e), e0_, e1_, el_, e.embed(lambda_));
}

std::string OverlapFn::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    os << "(" << num_.to_string("z") << ")";
    const char* names[3] = {"z", "(z - 1)", "(z - lambda)"};
    const int es[3] = {e0_, e1_, el_};
    for (int i = 0; i < 3; ++i) {
        if (es[i] == 0) continue;
        os << " * " << names[i] << "^" << -es[i];
    }
    return os.str();
}

} // namespace hdf
