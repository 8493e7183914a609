#include "hdf/cartier.hpp"

namespace hdf {

namespace {

// ---- arithmetic mod p^2 on u64 (p^2 kept below 2^31) ----

std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m) {
    std::int64_t t = 0, nt = 1, r = (std::int64_t)m, nr = (std::int64_t)(a % m);
    while (nr != 0) {
        const std::int64_t q = r / nr;
        t -= q * nt; std::swap(t, nt);
        r -= q * nr; std::swap(r, nr);
    }
    if (r != 1) throw BadInput("non-invertible residue");
    return (std::uint64_t)(t < 0 ? t + (std::int64_t)m : t);
}

Poly embed_to(const Poly& f, const FieldCtx* dst) {
    if (f.ctx() == dst) return f;
    return embed_poly(f, get_embedding(f.ctx(), dst));
}

// Numerator-and-scale data shared by the bundle assembly and the section
// solver: S = N_h * T_num / (1 - lambda) over the working field.
struct FlowScratch {
    const FieldCtx* ctx;
    Fq lambda;
    Poly n_h;   // cocycle numerator, embedded
    Poly t_num; // (z - x0)^p = z^p - x0^p, or 1 for x0 = infinity
    Poly s;
};

FlowScratch make_scratch(const HiggsDatum& d, unsigned lift_bump = 0) {
    const FieldCtx* ctx = d.lambda.ctx();
    const Poly n_h = embed_to(cocycle_numerator(d.p, d.lambda, lift_bump), ctx);
    Poly t_num = Poly::one(ctx);
    if (!d.x0.is_infinity())
        t_num = Poly::x(ctx).pow(d.p) - Poly::constant(d.x0.x().pow((std::uint64_t)d.p));
    const Fq inv1ml = (ctx->one() - d.lambda).inv();
    return {ctx, d.lambda, n_h, t_num, n_h * t_num * inv1ml};
}

// Kernel basis of a dense matrix over F_q (rows may be fewer than columns).
std::vector<std::vector<Fq>> kernel_basis(std::vector<std::vector<Fq>> M,
                                          std::size_t cols, const FieldCtx* f) {
    const std::size_t rows = M.size();
    std::vector<int> pivot_of_col(cols, -1);
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t sel = rank;
        while (sel < rows && M[sel][col].is_zero()) ++sel;
        if (sel == rows) continue;
        std::swap(M[rank], M[sel]);
        const Fq inv = M[rank][col].inv();
        for (std::size_t j = col; j < cols; ++j) M[rank][j] = M[rank][j] * inv;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || M[r][col].is_zero()) continue;
            const Fq factor = M[r][col];
            for (std::size_t j = col; j < cols; ++j)
                M[r][j] = M[r][j] - factor * M[rank][j];
        }
        pivot_of_col[col] = (int)rank;
        ++rank;
    }
    std::vector<std::vector<Fq>> basis;
    for (std::size_t free_col = 0; free_col < cols; ++free_col) {
        if (pivot_of_col[free_col] >= 0) continue;
        std::vector<Fq> v(cols, f->zero());
        v[free_col] = f->one();
        for (std::size_t col = 0; col < cols; ++col)
            if (pivot_of_col[col] >= 0)
                v[col] = -M[(std::size_t)pivot_of_col[col]][free_col];
        basis.push_back(std::move(v));
    }
    return basis;
}

HnSection solve_section(const FlowScratch& w, std::uint32_t p) {
    const FieldCtx* f = w.ctx;
    const unsigned rows = (p - 1) / 2, cols = (p + 1) / 2;
    const Fq linv = w.lambda.inv();
    std::vector<std::vector<Fq>> M(rows, std::vector<Fq>(cols, f->zero()));
    for (unsigned r = 0; r < rows; ++r) {
        const unsigned j = (p + 1) / 2 + r;
        for (unsigned i = 0; i < cols; ++i)
            M[r][i] = w.s.coeff(j + 2 * p - i) - linv * w.s.coeff(j - i);
    }
    const auto basis = kernel_basis(std::move(M), cols, f);
    if (basis.size() != 1)
        throw SplitAnomaly("destabilizing section space is not one-dimensional");

    const Poly c = Poly::from_coeffs(f, basis.front());
    const Poly sc = w.s * c;
    std::vector<Fq> dc((3 * p - 1) / 2 + 1, f->zero());
    for (unsigned e = 0; e < dc.size(); ++e)
        dc[e] = (e < (p + 1) / 2) ? -(linv * sc.coeff(e)) : -sc.coeff(e + 2 * p);
    const Poly D = Poly::from_coeffs(f, std::move(dc));

    // nowhere-vanishing contract: any common zero must sit on the divisor
    Poly g = poly_gcd(c, D);
    for (const Fq& pt : {f->zero(), f->one(), w.lambda}) {
        const Poly lin = Poly::linear_root(pt);
        while (g.degree() > 0 && g.eval(pt).is_zero()) g = g.div_exact(lin);
    }
    if (g.degree() > 0)
        throw StructureError("section components share a zero off the divisor");
    return {c, D};
}

ProjPoint extract_zero(const FlowScratch& w, const HnSection& s, std::uint32_t p) {
    const FieldCtx* f = w.ctx;
    const Poly z1 = Poly::linear_root(f->one());
    const Poly zl = Poly::linear_root(w.lambda);
    const Poly G = z1 * zl * (s.c * s.D.derivative() - s.c.derivative() * s.D) +
                   w.t_num * s.c * s.c;
    if (G.is_zero()) throw FlowDegenerate("image field vanishes identically");

    const unsigned v = G.ord_at(f->zero());
    const int v0 = (int)v - (int)p;
    if (v0 != 0 && v0 != -1)
        throw StructureError("image field has an unexpected vanishing order at 0");
    Poly u = G;
    for (unsigned i = 0; i < v; ++i) u = u.div_exact(Poly::x(f));
    u = u * (f->one() - w.lambda).inv();

    if (u.degree() == 1) {
        if (v0 != -1) throw StructureError("image field has two zeros");
        return ProjPoint(-u.coeff(0) / u.coeff(1));
    }
    if (u.degree() != 0) throw StructureError("image field is not a single zero");
    return v0 == 0 ? ProjPoint(f->zero()) : ProjPoint::infinity();
}

} // namespace

HiggsDatum::HiggsDatum(std::uint32_t p_, const Fq& lambda_, const ProjPoint& x0_)
    : p(p_), lambda(lambda_), x0(x0_) {
    if (!lambda.ctx()) throw BadInput("datum parameter must carry a field");
    if (p < 3 || lambda.ctx()->p() != p)
        throw BadInput("datum characteristic must match the parameter field");
    if (!lambda.in_prime_field())
        throw BadLambda("datum parameter must take a prime-field value");
    if (lambda.is_zero() || lambda == lambda.ctx()->one())
        throw BadLambda("datum parameter must avoid 0 and 1");
    if (!x0.is_infinity() && x0.x().ctx() != lambda.ctx())
        throw CtxMismatch("datum zero over a different field than the parameter");
}

Poly cocycle_numerator(std::uint32_t p, const Fq& lambda, unsigned lift_bump) {
    if (!lambda.ctx() || lambda.ctx()->p() != p)
        throw BadLambda("cocycle parameter must live in characteristic p");
    if (!lambda.in_prime_field() || lambda.is_zero() || lambda == lambda.ctx()->one())
        throw BadLambda("cocycle parameter must be a prime-field value avoiding 0 and 1");
    const FieldCtx* fp = build_extension(p, 1).get(); // validates primality
    if (p > 46337) throw TooLarge("cocycle lift arithmetic capped at p^2 < 2^31");

    const std::uint64_t M = (std::uint64_t)p * p;
    const std::uint64_t t = (lambda.coeff(0) + (std::uint64_t)lift_bump * p) % M;

    // binomial row C(p, j) mod p^2
    std::vector<std::uint64_t> binom(p + 1);
    binom[0] = 1;
    binom[p] = 1; // the recurrence would divide by p here
    for (std::uint32_t j = 1; j < p; ++j)
        binom[j] = binom[j - 1] % M * ((p - j + 1) % M) % M * inv_mod(j, M) % M;

    // A = (z-1)^p, B = (z-t)^p over Z/p^2
    std::vector<std::uint64_t> A(p + 1), B(p + 1);
    std::uint64_t pw1 = 1, pwt = 1; // (-1)^(p-j), (-t)^(p-j) built from j = p down
    for (std::uint32_t jj = 0; jj <= p; ++jj) {
        const std::uint32_t j = p - jj;
        A[j] = binom[j] * pw1 % M;
        B[j] = binom[j] * pwt % M;
        pw1 = pw1 * (M - 1) % M;
        pwt = pwt * (M - t % M) % M;
    }

    // N = A (z^p - t) - (z^p - 1) B, degree 2p, every coefficient in p Z/p^2
    std::vector<std::int64_t> nh(2 * p, 0);
    bool top_zero = true;
    for (std::uint32_t i = 0; i <= 2 * p; ++i) {
        std::uint64_t v = 0;
        if (i >= p) v = (A[i - p] + M - B[i - p]) % M;
        if (i <= p) v = (v + M - t % M * A[i] % M + B[i]) % M;
        if (v % p != 0)
            throw ConstructionError("cocycle difference is not divisible by p");
        if (i == 2 * p) { top_zero = (v == 0); continue; }
        nh[i] = (std::int64_t)(v / p % p);
    }
    if (!top_zero) throw ConstructionError("cocycle numerator exceeds its degree bound");
    const Poly out = Poly::from_int_coeffs(fp, nh);
    if (out.degree() != (int)(2 * p - 1) ||
        out.lead() != fp->from_int(lambda.coeff(0)) - fp->one())
        throw ConstructionError("cocycle numerator has unexpected leading data");
    return out;
}

OverlapFn taylor_cocycle(std::uint32_t p, const Fq& lambda) {
    const Poly n_h = embed_to(cocycle_numerator(p, lambda), lambda.ctx());
    return OverlapFn::make(n_h, 0, 0, (int)(2 * p), lambda);
}

TwistedBundle inverse_cartier(const HiggsDatum& d) {
    const FlowScratch w = make_scratch(d);
    const FieldCtx* f = w.ctx;
    const Fq inv1ml = (f->one() - d.lambda).inv();
    const int p = (int)d.p;

    const OverlapFn zero = OverlapFn::zero(d.lambda);
    const OverlapFn one = OverlapFn::from_poly(Poly::one(f), d.lambda);
    const OverlapFn g21 = OverlapFn::make(w.n_h * w.t_num * inv1ml, p, 0, p, d.lambda);
    const OverlapFn g22 =
        OverlapFn::from_poly(Poly::linear_root(f->one()).pow((unsigned)p), d.lambda);
    const OverlapFn t1p = OverlapFn::make(w.t_num, 0, 0, p, d.lambda);
    const OverlapFn t2p = OverlapFn::make(w.t_num * inv1ml, p, 0, 0, d.lambda);

    TwistedBundle V{d,
                    {one, zero, g21, g22},
                    {zero, zero, t1p, zero},
                    {zero, zero, t2p, zero},
                    0};

    // invertibility and degree of the gluing
    const OverlapFn det = V.gluing[0] * V.gluing[3] - V.gluing[1] * V.gluing[2];
    if (det.is_zero() || !det.is_unit())
        throw ConstructionError("gluing determinant is not a unit on the overlap");
    V.degree = det.unit_degree();
    if (V.degree != -p)
        throw ConstructionError("glued bundle has the wrong total degree");

    // connection tables must be regular on their own charts
    for (const OverlapFn& a : V.conn_z)
        if (a.ord_pole_zero() > 0 || a.ord_pole_infinity() > 0)
            throw ConstructionError("z-chart connection has a pole inside its chart");
    for (const OverlapFn& a : V.conn_w)
        if (a.ord_pole_one() > 0 || a.ord_pole_lambda() > 0)
            throw ConstructionError("w-chart connection has a pole inside its chart");
    return V;
}

HnSection hn_sub(const TwistedBundle& V) {
    return solve_section(make_scratch(V.datum), V.datum.p);
}

ProjPoint flow_apply(const HiggsDatum& d) {
    const FlowScratch w = make_scratch(d);
    return extract_zero(w, solve_section(w, d.p), d.p);
}

ProjPoint flow_apply_lifted(const HiggsDatum& d, unsigned lift_bump) {
    const FlowScratch w = make_scratch(d, lift_bump);
    return extract_zero(w, solve_section(w, d.p), d.p);
}

RatMap flow_map(std::uint32_t p, const Fq& lambda) {
    if (!lambda.ctx() || lambda.ctx()->k() != 1)
        throw BadLambda("the full map is reconstructed from a prime-field parameter");
    HiggsDatum probe(p, lambda, ProjPoint::infinity()); // validates the datum

    const std::uint64_t dsq = (std::uint64_t)p * p;
    const std::uint64_t want = 2 * dsq + 4;
    unsigned k = 1;
    for (std::uint64_t sz = p; sz < want; sz *= p) ++k;
    const FieldCtx* fk = build_extension(p, k).get();
    const Fq lam_k = k == 1 ? lambda : get_embedding(lambda.ctx(), fk).embed(lambda);

    std::vector<Sample> samples;
    samples.reserve(want);
    for (std::uint64_t i = 0; i < want; ++i) {
        const Fq x = fk->element_from_index(i);
        const ProjPoint y = flow_apply(HiggsDatum(p, lam_k, ProjPoint(x)));
        samples.push_back(Sample{x, y.is_infinity() ? std::optional<Fq>{} : y.x()});
    }
    const RatMap lifted = rational_reconstruct(fk, samples, (int)dsq, (int)dsq);

    Poly num = lifted.num(), den = lifted.den();
    if (k > 1) {
        const Embedding& e = get_embedding(lambda.ctx(), fk);
        const auto num0 = project_poly(lifted.num(), e);
        const auto den0 = project_poly(lifted.den(), e);
        if (!num0 || !den0)
            throw StructureError("reconstructed map is not rational over the prime field");
        num = *num0;
        den = *den0;
    }
    RatMap map(std::move(num), std::move(den));
    if (map.degree() != (int)dsq)
        throw StructureError("reconstructed map has the wrong degree");
    // cross-check the point at infinity, which reconstruction never samples
    if (map.eval(ProjPoint::infinity()) != flow_apply(probe))
        throw StructureError("reconstructed map disagrees at infinity");
    return map;
}

} // namespace hdf
