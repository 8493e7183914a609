#include "hdf/curve.hpp"

#include <algorithm>
#include <sstream>

namespace hdf {

namespace {

// Ascending prime factorization by trial division (group orders, etc.).
std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) {
    std::vector<std::pair<std::uint64_t, unsigned>> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d) continue;
        unsigned e = 0;
        while (n % d == 0) { n /= d; ++e; }
        out.emplace_back(d, e);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

std::vector<std::uint64_t> divisors_ascending(std::uint64_t n) {
    std::vector<std::uint64_t> out{1};
    for (const auto& [q, e] : factorize(n)) {
        const std::size_t base = out.size();
        std::uint64_t pw = 1;
        for (unsigned i = 1; i <= e; ++i) {
            pw *= q;
            for (std::size_t j = 0; j < base; ++j) out.push_back(out[j] * pw);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool point_less(const CurvePoint& a, const CurvePoint& b) {
    if (a.is_infinity() != b.is_infinity()) return a.is_infinity();
    if (a.is_infinity()) return false;
    if (a.x() != b.x()) return a.x().less(b.x());
    return a.y().less(b.y());
}

} // namespace

std::string CurvePoint::to_string() const {
    if (inf_) return "inf";
    std::ostringstream os;
    os << "(" << x_.to_string() << ", " << y_.to_string() << ")";
    return os.str();
}

ProjPoint projection_pi(const CurvePoint& P) {
    if (P.is_infinity()) return ProjPoint::infinity();
    return ProjPoint(P.x());
}

LegendreCurve::LegendreCurve(const Fq& lambda) : ctx_(lambda.ctx()), lambda_(lambda) {
    if (!ctx_) throw BadInput("curve parameter must carry a field");
    if (lambda.is_zero() || lambda == ctx_->one())
        throw BadLambda("curve parameter must avoid 0 and 1");
    a2_ = -(ctx_->one() + lambda_);
}

Fq LegendreCurve::rhs_at(const Fq& x) const {
    // x^3 + a2 x^2 + a4 x = x (x - 1) (x - lambda)
    return x * (x - ctx_->one()) * (x - lambda_);
}

bool LegendreCurve::is_on_curve(const Fq& x, const Fq& y) const {
    return y * y == rhs_at(x);
}

CurvePoint LegendreCurve::make_point(const Fq& x, const Fq& y) const {
    if (x.ctx() != ctx_ || y.ctx() != ctx_)
        throw CtxMismatch("point coordinates over a different field than the curve");
    if (!is_on_curve(x, y)) throw NotOnCurve("coordinates fail the curve equation");
    return CurvePoint(x, y);
}

std::vector<CurvePoint> LegendreCurve::points_with_x(const Fq& x) const {
    if (x.ctx() != ctx_) throw CtxMismatch("abscissa over a different field than the curve");
    const Fq v = rhs_at(x);
    if (v.is_zero()) return {CurvePoint(x, ctx_->zero())};
    const auto r = sqrt_in_field(v);
    if (!r) return {};
    CurvePoint a(x, *r), b(x, -*r);
    if (point_less(b, a)) std::swap(a, b);
    return {a, b};
}

void LegendreCurve::check_point(const CurvePoint& P) const {
    if (P.ctx() != ctx_) throw CtxMismatch("point over a different field than the curve");
    if (!P.is_infinity() && !is_on_curve(P.x(), P.y()))
        throw NotOnCurve("point fails the curve equation");
}

CurvePoint LegendreCurve::add_unchecked(const CurvePoint& P, const CurvePoint& Q) const {
    if (P.is_infinity()) return Q;
    if (Q.is_infinity()) return P;
    const Fq &x1 = P.x(), &y1 = P.y(), &x2 = Q.x(), &y2 = Q.y();
    Fq s = ctx_->zero();
    if (x1 == x2) {
        if (y1 == -y2) return infinity(); // includes the order-2 points
        // tangent slope (3x^2 + 2 a2 x + a4) / (2y)
        const Fq two = ctx_->from_int(2), three = ctx_->from_int(3);
        s = (three * x1 * x1 + two * a2_ * x1 + lambda_) / (two * y1);
    } else {
        s = (y2 - y1) / (x2 - x1);
    }
    const Fq x3 = s * s - a2_ - x1 - x2;
    const Fq y3 = s * (x1 - x3) - y1;
    return CurvePoint(x3, y3);
}

CurvePoint LegendreCurve::add_points(const CurvePoint& P, const CurvePoint& Q) const {
    check_point(P);
    check_point(Q);
    return add_unchecked(P, Q);
}

CurvePoint LegendreCurve::involution_sigma(const CurvePoint& P) const {
    check_point(P);
    if (P.is_infinity()) return P;
    return CurvePoint(P.x(), -P.y());
}

CurvePoint LegendreCurve::scalar_mul(std::uint64_t n, const CurvePoint& P) const {
    check_point(P);
    CurvePoint acc = infinity();
    if (n == 0 || P.is_infinity()) return acc;
    for (int i = 63 - __builtin_clzll(n); i >= 0; --i) {
        acc = add_unchecked(acc, acc);
        if ((n >> i) & 1) acc = add_unchecked(acc, P);
    }
    return acc;
}

CurvePoint LegendreCurve::scalar_mul(const BigUint& n, const CurvePoint& P) const {
    check_point(P);
    CurvePoint acc = infinity();
    if (n.is_zero() || P.is_infinity()) return acc;
    for (int i = (int)n.bit_length() - 1; i >= 0; --i) {
        acc = add_unchecked(acc, acc);
        if (n.bit((std::size_t)i)) acc = add_unchecked(acc, P);
    }
    return acc;
}

std::uint64_t LegendreCurve::point_count() const {
    if (!ctx_->order_u64() || *ctx_->order_u64() > 1000000)
        throw TooLarge("exhaustive point count capped at fields of size 10^6");
    const std::uint64_t q = *ctx_->order_u64();
    std::vector<std::uint8_t> is_sq(q, 0);
    for (std::uint64_t i = 0; i < q; ++i) {
        const Fq y = ctx_->element_from_index(i);
        is_sq[(y * y).index()] = 1;
    }
    std::uint64_t count = 1; // the point at infinity
    for (std::uint64_t i = 0; i < q; ++i) {
        const Fq v = rhs_at(ctx_->element_from_index(i));
        count += v.is_zero() ? 1 : (is_sq[v.index()] ? 2 : 0);
    }
    return count;
}

std::int64_t LegendreCurve::trace() const {
    return (std::int64_t)(*ctx_->order_u64() + 1) - (std::int64_t)point_count();
}

std::uint64_t LegendreCurve::point_count_ext(unsigned j) const {
    if (j == 0) throw BadInput("extension degree must be positive");
    const std::uint64_t q = *ctx_->order_u64();
    const std::int64_t a = trace();
    __int128 t_prev = 2, t_cur = a, qj = 1;
    for (unsigned m = 2; m <= j; ++m) {
        const __int128 t_next = (__int128)a * t_cur - (__int128)q * t_prev;
        t_prev = t_cur;
        t_cur = t_next;
    }
    for (unsigned m = 0; m < j; ++m) {
        qj *= q;
        if (qj > (__int128)4000000000000000000LL)
            throw TooLarge("point count over the extension exceeds 64 bits");
    }
    const __int128 n = qj + 1 - t_cur;
    return (std::uint64_t)n;
}

bool LegendreCurve::is_supersingular_by_count() const {
    return trace() % (std::int64_t)p() == 0;
}

std::uint64_t LegendreCurve::point_order(const CurvePoint& P) const {
    check_point(P);
    if (P.is_infinity()) return 1;
    std::uint64_t ord = point_count();
    for (const auto& [q, e] : factorize(ord)) {
        (void)e;
        while (ord % q == 0 && scalar_mul(ord / q, P).is_infinity()) ord /= q;
    }
    return ord;
}

DivisionPoly LegendreCurve::division_poly(unsigned n) const {
    if (n == 0) throw BadInput("division polynomial index must be positive");
    // b-invariants of y^2 = x(x-1)(x-lambda)
    const Fq one = ctx_->one();
    const Fq b2 = -(ctx_->from_int(4) * (one + lambda_));
    const Fq b4 = ctx_->from_int(2) * lambda_;
    const Fq b8 = -(lambda_ * lambda_);
    const Poly X = Poly::x(ctx_);
    // F = psi_2^2 = 4x^3 + b2 x^2 + 2 b4 x
    const Poly F = X.pow(3) * ctx_->from_int(4) + X.pow(2) * b2 + X * (b4 + b4);
    const Poly F2 = F * F;

    const unsigned top = std::max(n, 4u);
    std::vector<Poly> psi;
    psi.reserve(top + 1);
    psi.push_back(Poly::zero(ctx_));
    psi.push_back(Poly::one(ctx_));
    psi.push_back(Poly::one(ctx_));
    psi.push_back(X.pow(4) * ctx_->from_int(3) + X.pow(3) * b2 +
                  X.pow(2) * (b4 * ctx_->from_int(3)) + Poly::constant(b8));
    psi.push_back(X.pow(6) * ctx_->from_int(2) + X.pow(5) * b2 +
                  X.pow(4) * (b4 * ctx_->from_int(5)) +
                  X.pow(2) * (b8 * ctx_->from_int(10)) + X * (b2 * b8) +
                  Poly::constant(b4 * b8));
    for (unsigned i = 5; i <= top; ++i) {
        const unsigned m = i / 2;
        if (i & 1) {
            if (m % 2 == 0)
                psi.push_back(F2 * psi[m + 2] * psi[m].pow(3) - psi[m - 1] * psi[m + 1].pow(3));
            else
                psi.push_back(psi[m + 2] * psi[m].pow(3) - F2 * psi[m - 1] * psi[m + 1].pow(3));
        } else {
            psi.push_back(psi[m] * (psi[m + 2] * psi[m - 1] * psi[m - 1] -
                                    psi[m - 2] * psi[m + 1] * psi[m + 1]));
        }
    }
    if (psi[n].is_zero())
        throw DegenerateDivisionPoly("division polynomial vanishes identically");
    if (n % 2 == 1) return {psi[n], Poly::zero(ctx_)};
    return {Poly::zero(ctx_), psi[n] * ctx_->from_int(2)};
}

RatMap LegendreCurve::mult_x_map(unsigned n) const {
    if (n == 0) throw BadInput("multiplication index must be positive");
    if (n % p() == 0)
        throw DegenerateDivisionPoly(
            "x-coordinate of this multiple is inseparable; use pointwise scalar multiplication");
    // Reuse the reduced division-polynomial ladder up to n + 1.
    const Fq b2 = -(ctx_->from_int(4) * (ctx_->one() + lambda_));
    const Fq b4 = ctx_->from_int(2) * lambda_;
    const Poly X = Poly::x(ctx_);
    const Poly F = X.pow(3) * ctx_->from_int(4) + X.pow(2) * b2 + X * (b4 + b4);

    const auto reduced = [&](unsigned i) {
        const auto dp = division_poly(i == 0 ? 1 : i);
        if (i == 0) return Poly::zero(ctx_);
        if (i % 2 == 1) return dp.x_part;
        return dp.y_part * ctx_->from_int(2).inv();
    };
    const Poly Pn = reduced(n), Pprev = reduced(n - 1), Pnext = reduced(n + 1);

    Poly num = Poly::zero(ctx_), den = Poly::zero(ctx_);
    if (n % 2 == 1) {
        num = X * Pn * Pn - F * Pprev * Pnext;
        den = Pn * Pn;
    } else {
        num = X * F * Pn * Pn - Pprev * Pnext;
        den = F * Pn * Pn;
    }
    RatMap map(num, den);
    if (map.degree() != (int)(n * n))
        throw StructureError("x-coordinate multiple has an unexpected degree");
    return map;
}

std::vector<CurvePoint> LegendreCurve::strict_torsion_points(unsigned N, unsigned k) const {
    if (N == 0) throw BadInput("torsion order must be positive");
    if (N % p() == 0)
        throw BadTorsionOrder("torsion order must be coprime to the characteristic");
    if (k == 0 || k % ctx_->k() != 0)
        throw BadInput("target field must contain the coefficient field");
    const FieldCtx* target = build_extension(p(), k).get();
    const LegendreCurve C = base_change(target);

    std::vector<CurvePoint> out;
    if (N == 1) {
        out.push_back(C.infinity());
        return out;
    }
    if (N == 2) {
        const Fq zero = target->zero();
        for (const Fq& r : {target->zero(), target->one(), C.lambda()})
            out.push_back(CurvePoint(r, zero));
        std::sort(out.begin(), out.end(), point_less);
        return out;
    }

    const DivisionPoly dp = C.division_poly(N);
    const Poly Psi = (N % 2 == 1) ? dp.x_part : dp.y_part;
    const auto divisors = divisors_ascending(N);
    for (const auto& [root, mult] : roots_in_field(Psi)) {
        (void)mult;
        for (const CurvePoint& P : C.points_with_x(root)) {
            std::uint64_t ord = 0;
            for (std::uint64_t d : divisors) {
                if (C.scalar_mul(d, P).is_infinity()) { ord = d; break; }
            }
            if (ord == 0)
                throw StructureError("division-polynomial root is not torsion of the stated order");
            if (ord == N) out.push_back(P);
        }
    }
    std::sort(out.begin(), out.end(), point_less);
    return out;
}

std::optional<LegendreCurve::POrderPoint> LegendreCurve::p_torsion_point(unsigned max_k) const {
    const unsigned k0 = ctx_->k();
    for (unsigned j = 1; k0 * j <= std::min(max_k, (unsigned)kMaxDegree); ++j) {
        std::uint64_t Nj = 0;
        try {
            Nj = point_count_ext(j);
        } catch (const TooLarge&) {
            break;
        }
        if (Nj % p() != 0) continue;

        const FieldCtx* target = build_extension(p(), k0 * j).get();
        const LegendreCurve C = base_change(target);
        std::uint64_t cofactor = Nj;
        while (cofactor % p() == 0) cofactor /= p();

        const std::uint64_t scan_cap = std::min<std::uint64_t>(4096, *target->order_u64());
        for (std::uint64_t idx = 0; idx < scan_cap; ++idx) {
            const Fq x = target->element_from_index(idx);
            const auto pts = C.points_with_x(x);
            if (pts.empty()) continue;
            CurvePoint Q = C.scalar_mul(cofactor, pts.front());
            if (Q.is_infinity()) continue;
            while (true) {
                const CurvePoint R = C.scalar_mul((std::uint64_t)p(), Q);
                if (R.is_infinity()) return POrderPoint{j, Q};
                Q = R;
            }
        }
        throw Inconclusive("no point of order p found within the scan cap");
    }
    return std::nullopt;
}

LegendreCurve LegendreCurve::base_change(const FieldCtx* bigger) const {
    if (bigger == ctx_) return *this;
    const Embedding& e = get_embedding(ctx_, bigger);
    return LegendreCurve(e.embed(lambda_));
}

ProjPoint LegendreCurve::isogeny_x(const ProjPoint& x) const {
    if (x.is_infinity()) return x;
    if (x.x().ctx() != ctx_)
        throw CtxMismatch("evaluation point over a different field than the curve");
    const Fq x0 = x.x();
    const Fq fx = rhs_at(x0);
    if (fx.is_zero()) return x; // order-2 abscissae are fixed by any odd multiple

    if (const auto y = sqrt_in_field(fx)) {
        const CurvePoint Q = scalar_mul((std::uint64_t)p(), CurvePoint(x0, *y));
        return projection_pi(Q);
    }

    const unsigned k2 = 2 * ctx_->k();
    if (k2 > kMaxDegree)
        throw TooLarge("quadratic lift exceeds the representable extension degree");
    const FieldCtx* big = build_extension(p(), k2).get();
    const Embedding& e = get_embedding(ctx_, big);
    const LegendreCurve C = base_change(big);
    const Fq xb = e.embed(x0);
    const auto yb = sqrt_in_field(C.rhs_at(xb));
    if (!yb) throw StructureError("ordinate failed to lift to the quadratic extension");
    const CurvePoint Q = C.scalar_mul((std::uint64_t)p(), CurvePoint(xb, *yb));
    if (Q.is_infinity()) return ProjPoint::infinity();
    const auto back = e.project(Q.x());
    if (!back) throw StructureError("image abscissa escaped the base field");
    return ProjPoint(*back);
}

Poly hasse_poly(std::uint32_t p) {
    const FieldCtx* ctx = build_extension(p, 1).get(); // validates primality
    if (p == 2) throw NotPrime("odd characteristic required");
    const unsigned m = (p - 1) / 2;
    std::vector<Fq> c;
    c.reserve(m + 1);
    Fq binom = ctx->one(); // binom(m, i) mod p, built multiplicatively
    for (unsigned i = 0; i <= m; ++i) {
        c.push_back(binom * binom);
        if (i < m) binom = binom * ctx->from_int(m - i) / ctx->from_int(i + 1);
    }
    return Poly::from_coeffs(ctx, std::move(c));
}

bool is_supersingular(std::uint32_t p, const Fq& lambda) {
    if (!lambda.ctx()) throw BadInput("parameter must carry a field");
    if (lambda.ctx()->p() != p) throw CtxMismatch("parameter lives in the wrong characteristic");
    if (lambda.is_zero() || lambda == lambda.ctx()->one())
        throw BadLambda("parameter must avoid 0 and 1");
    Poly H = hasse_poly(p);
    if (lambda.ctx()->k() != 1)
        H = embed_poly(H, get_embedding(build_extension(p, 1).get(), lambda.ctx()));
    return H.eval(lambda).is_zero();
}

} // namespace hdf
