#include <doctest.h>

#include <algorithm>
#include <cstdint>
#include <vector>

#include "hdf/curve.hpp"

using namespace hdf;

namespace {

// Deterministic pseudo-random stream for reproducible sampling.
struct SplitMix {
    std::uint64_t state = 0x9e3779b97f4a7c15ULL;
    std::uint64_t next() {
        state = state * 6364136223846793005ULL + 1442695040888963407ULL;
        return state >> 33;
    }
};

std::vector<CurvePoint> all_points(const LegendreCurve& C) {
    std::vector<CurvePoint> pts{C.infinity()};
    const FieldCtx* f = C.field();
    for (std::uint64_t i = 0; i < *f->order_u64(); ++i)
        for (const CurvePoint& P : C.points_with_x(f->element_from_index(i)))
            pts.push_back(P);
    return pts;
}

} // namespace

TEST_CASE("curve construction validates the parameter") {
    auto f5 = build_extension(5, 1);
    CHECK_THROWS_AS(LegendreCurve(f5->zero()), BadLambda);
    CHECK_THROWS_AS(LegendreCurve(f5->one()), BadLambda);
    CHECK_THROWS_AS(LegendreCurve(Fq{}), BadInput);
    const LegendreCurve C(f5->from_int(2));
    CHECK(C.p() == 5);
    CHECK(C.a2() == f5->from_int(2)); // -(1 + 2) = 2 mod 5
    CHECK(C.a4() == f5->from_int(2));
}

TEST_CASE("group law on the lambda=2 curve over F_5") {
    auto f5 = build_extension(5, 1);
    const LegendreCurve C(f5->from_int(2));
    const CurvePoint P = C.make_point(f5->from_int(3), f5->from_int(1));

    const CurvePoint twoP = C.add_points(P, P);
    CHECK_FALSE(twoP.is_infinity());
    CHECK(twoP.x() == f5->from_int(1));
    CHECK(twoP.y() == f5->zero());

    CHECK(C.scalar_mul(4, P).is_infinity());
    CHECK(C.scalar_mul(5, P) == P);
    CHECK(C.scalar_mul(0, P).is_infinity());
    CHECK(C.point_order(P) == 4);
    BigUint big = BigUint::power(2, 64); // 2^64 + 1 = 1 mod 4
    big.add_small(1);
    CHECK(C.scalar_mul(big, P) == P);

    const ProjPoint px = projection_pi(P);
    CHECK(px.x() == f5->from_int(3));
    CHECK(projection_pi(C.infinity()).is_infinity());

    CHECK_THROWS_AS(C.make_point(f5->from_int(2), f5->from_int(1)), NotOnCurve);
}

TEST_CASE("involution is negation and projection collapses it") {
    auto f13 = build_extension(13, 1);
    const LegendreCurve C(f13->from_int(6));
    for (const CurvePoint& P : all_points(C)) {
        const CurvePoint mP = C.involution_sigma(P);
        CHECK(C.involution_sigma(mP) == P);
        CHECK(C.add_points(P, mP).is_infinity());
        CHECK(projection_pi(mP).to_string() == projection_pi(P).to_string());
        // involution commutes with scalars
        CHECK(C.scalar_mul(3, mP) == C.involution_sigma(C.scalar_mul(3, P)));
    }
}

TEST_CASE("addition is associative and commutative on sampled triples") {
    auto f25 = build_extension(5, 2);
    const Embedding& e = get_embedding(build_extension(5, 1).get(), f25.get());
    const LegendreCurve C(e.embed(build_extension(5, 1)->from_int(2)));
    const auto pts = all_points(C);
    CHECK(pts.size() == C.point_count());

    SplitMix rng;
    for (int t = 0; t < 200; ++t) {
        const CurvePoint& P = pts[rng.next() % pts.size()];
        const CurvePoint& Q = pts[rng.next() % pts.size()];
        const CurvePoint& R = pts[rng.next() % pts.size()];
        CHECK(C.add_points(C.add_points(P, Q), R) == C.add_points(P, C.add_points(Q, R)));
        CHECK(C.add_points(P, Q) == C.add_points(Q, P));
        CHECK(C.add_points(P, C.infinity()) == P);
    }
}

TEST_CASE("point counts: frozen values, Hasse bound, zeta recursion") {
    auto f3 = build_extension(3, 1);
    const LegendreCurve C32(f3->from_int(2));
    CHECK(C32.point_count() == 4);
    CHECK(C32.trace() == 0);
    CHECK(C32.is_supersingular_by_count());

    // |trace| <= 2 sqrt(q) across all curves over small prime fields
    for (std::uint32_t p : {5u, 11u, 13u}) {
        auto fp = build_extension(p, 1);
        for (std::uint64_t l = 2; l < p; ++l) {
            const LegendreCurve C(fp->from_int(l));
            const std::int64_t a = C.trace();
            CHECK(a * a <= 4 * (std::int64_t)p);
            CHECK((C.point_count() - 4) % 4 == 0); // full 2-torsion forces 4 | #C
        }
    }

    // zeta recursion agrees with exhaustive counting over extensions
    auto f5 = build_extension(5, 1);
    const LegendreCurve C(f5->from_int(2));
    for (unsigned j : {1u, 2u, 3u, 4u}) {
        const LegendreCurve Cj = C.base_change(build_extension(5, j).get());
        CHECK(C.point_count_ext(j) == Cj.point_count());
    }
    CHECK_THROWS_AS(C.point_count_ext(0), BadInput);
    CHECK_THROWS_AS(C.point_count_ext(40), TooLarge);

    auto f3e13 = build_extension(3, 13); // 3^13 > 10^6
    const Embedding& e = get_embedding(f3.get(), f3e13.get());
    CHECK_THROWS_AS(LegendreCurve(e.embed(f3->from_int(2))).point_count(), TooLarge);
}

TEST_CASE("Hasse polynomial: frozen coefficients and the count criterion") {
    const Poly h3 = hasse_poly(3);
    CHECK(h3 == Poly::from_int_coeffs(build_extension(3, 1).get(), {1, 1}));
    const Poly h5 = hasse_poly(5);
    CHECK(h5 == Poly::from_int_coeffs(build_extension(5, 1).get(), {1, 4, 1}));
    CHECK(hasse_poly(7).degree() == 3);
    CHECK_THROWS_AS(hasse_poly(9), NotPrime);
    CHECK_THROWS_AS(hasse_poly(2), NotPrime);

    auto f3 = build_extension(3, 1);
    CHECK(is_supersingular(3, f3->from_int(2)));
    CHECK_THROWS_AS(is_supersingular(3, f3->zero()), BadLambda);
    CHECK_THROWS_AS(is_supersingular(5, f3->from_int(2)), CtxMismatch);

    // vanishing of H_p at lambda is equivalent to #C(F_p) = p + 1
    for (std::uint32_t p : {3u, 5u, 7u, 11u, 13u}) {
        auto fp = build_extension(p, 1);
        for (std::uint64_t l = 2; l < p; ++l) {
            const Fq lam = fp->from_int(l);
            const LegendreCurve C(lam);
            CHECK(is_supersingular(p, lam) == (C.point_count() == p + 1));
            CHECK(is_supersingular(p, lam) == C.is_supersingular_by_count());
        }
    }

    // the criterion extends through field extensions
    auto f9 = build_extension(3, 2);
    const Embedding& e = get_embedding(f3.get(), f9.get());
    CHECK(is_supersingular(3, e.embed(f3->from_int(2))));
}

TEST_CASE("division polynomials: frozen forms and vanishing locus") {
    auto f7 = build_extension(7, 1);
    const Fq lam = f7->from_int(3);
    const LegendreCurve C(lam);

    // psi_3 = 3x^4 - 4(1+lambda)x^3 + 6 lambda x^2 - lambda^2
    const DivisionPoly d3 = C.division_poly(3);
    CHECK(d3.y_part.is_zero());
    CHECK(d3.x_part == Poly::from_int_coeffs(f7.get(), {-9, 0, 18, -16, 3}));

    // psi_2 = 2y
    const DivisionPoly d2 = C.division_poly(2);
    CHECK(d2.x_part.is_zero());
    CHECK(d2.y_part == Poly::from_int_coeffs(f7.get(), {2}));

    CHECK(C.division_poly(1).x_part.is_one());
    CHECK_THROWS_AS(C.division_poly(0), BadInput);

    // roots of the reduced polynomial are exactly the x-coordinates of
    // nonzero N-torsion: check via scalar multiplication over an extension
    for (unsigned N : {3u, 4u, 5u}) {
        const LegendreCurve Cb = C.base_change(build_extension(7, 2).get());
        const DivisionPoly d = Cb.division_poly(N);
        const Poly red = (N % 2 == 1) ? d.x_part : d.y_part;
        for (const auto& [r, m] : roots_in_field(red)) {
            (void)m;
            for (const CurvePoint& P : Cb.points_with_x(r))
                CHECK(Cb.scalar_mul(N, P).is_infinity());
        }
    }
}

TEST_CASE("x-line multiplication maps match pointwise scalar multiplication") {
    auto f5 = build_extension(5, 1);
    const LegendreCurve C(f5->from_int(2));

    // frozen: the duplication map sends x = 3 to 1
    const RatMap dup = C.mult_x_map(2);
    CHECK(dup.eval(ProjPoint(f5->from_int(3))) == ProjPoint(f5->from_int(1)));
    CHECK(dup.eval(ProjPoint::infinity()).is_infinity());

    // degrees are exactly n^2
    auto f7 = build_extension(7, 1);
    const LegendreCurve C7(f7->from_int(3));
    for (unsigned n : {1u, 2u, 3u, 4u, 5u})
        CHECK(C7.mult_x_map(n).degree() == (int)(n * n));
    CHECK_THROWS_AS(C7.mult_x_map(7), DegenerateDivisionPoly);
    CHECK_THROWS_AS(C7.mult_x_map(14), DegenerateDivisionPoly);
    CHECK_THROWS_AS(C7.mult_x_map(0), BadInput);

    // n = 3 over F_25: compare against [3]P on at least 30 abscissae
    const LegendreCurve C25 = C.base_change(build_extension(5, 2).get());
    const RatMap m3 = C25.mult_x_map(3);
    int compared = 0;
    for (std::uint64_t i = 0; i < 25; ++i) {
        const Fq x = C25.field()->element_from_index(i);
        const auto pts = C25.points_with_x(x);
        if (pts.empty()) continue;
        for (const CurvePoint& P : pts) {
            CHECK(m3.eval(ProjPoint(x)) == projection_pi(C25.scalar_mul(3, P)));
            ++compared;
        }
    }
    CHECK(compared >= 30);

    // multiplicativity: the map for nm is the composition of the maps
    const RatMap m2 = C7.mult_x_map(2), m3b = C7.mult_x_map(3), m6 = C7.mult_x_map(6);
    const LegendreCurve C49 = C7.base_change(build_extension(7, 2).get());
    const RatMap m2e = C49.mult_x_map(2), m3e = C49.mult_x_map(3), m6e = C49.mult_x_map(6);
    for (std::uint64_t i = 0; i < 49; ++i) {
        const ProjPoint x(C49.field()->element_from_index(i));
        CHECK(m6e.eval(x) == m2e.eval(m3e.eval(x)));
    }
    CHECK(m6.eval(ProjPoint::infinity()) == m2.eval(m3b.eval(ProjPoint::infinity())));
}

TEST_CASE("strict torsion points over controlled extensions") {
    auto f5 = build_extension(5, 1);
    const LegendreCurve C(f5->from_int(2));

    CHECK_THROWS_AS(C.strict_torsion_points(5, 2), BadTorsionOrder);
    CHECK_THROWS_AS(C.strict_torsion_points(10, 2), BadTorsionOrder);
    CHECK_THROWS_AS(C.strict_torsion_points(0, 2), BadInput);

    const auto one = C.strict_torsion_points(1, 1);
    REQUIRE(one.size() == 1);
    CHECK(one.front().is_infinity());

    // full 2-torsion is rational over the ground field: {0, 1, lambda}
    const auto two = C.strict_torsion_points(2, 1);
    REQUIRE(two.size() == 3);
    for (const CurvePoint& P : two) {
        CHECK(P.y().is_zero());
        CHECK(C.point_order(P) == 2);
    }

    // order 3: the eight points appear exactly over the degree-8 extension
    CHECK(C.strict_torsion_points(3, 1).empty());
    CHECK(C.strict_torsion_points(3, 2).empty());
    CHECK(C.strict_torsion_points(3, 4).empty());
    const auto three = C.strict_torsion_points(3, 8);
    CHECK(three.size() == 8);
    {
        const LegendreCurve C8 = C.base_change(build_extension(5, 8).get());
        for (const CurvePoint& P : three) {
            CHECK(C8.scalar_mul(3, P).is_infinity());
            CHECK_FALSE(P.is_infinity());
        }
    }

    // order 4 is full over F_25: 12 points of exact order 4
    const auto four = C.strict_torsion_points(4, 2);
    CHECK(four.size() == 12);
    {
        const LegendreCurve C2 = C.base_change(build_extension(5, 2).get());
        for (const CurvePoint& P : four) {
            CHECK(C2.scalar_mul(4, P).is_infinity());
            CHECK_FALSE(C2.scalar_mul(2, P).is_infinity());
        }
    }

    // order 6 needs both pieces; full only over the degree-8 field
    CHECK(C.strict_torsion_points(6, 4).empty());
    CHECK(C.strict_torsion_points(6, 8).size() == 24);

    // the target field must contain the coefficient field
    const LegendreCurve C25 = C.base_change(build_extension(5, 2).get());
    CHECK_THROWS_AS(C25.strict_torsion_points(3, 3), BadInput);
}

TEST_CASE("points of order p exist only on ordinary curves") {
    auto f5 = build_extension(5, 1);
    const LegendreCurve ordinary(f5->from_int(3)); // H_5(3) = 22 != 0
    const auto found = ordinary.p_torsion_point(12);
    REQUIRE(found.has_value());
    CHECK(found->ext_degree == 4);
    const LegendreCurve Ce = ordinary.base_change(build_extension(5, 4).get());
    CHECK_FALSE(found->point.is_infinity());
    CHECK(Ce.scalar_mul(5, found->point).is_infinity());

    auto f3 = build_extension(3, 1);
    const LegendreCurve ss(f3->from_int(2)); // supersingular
    CHECK_FALSE(ss.p_torsion_point(12).has_value());
}

TEST_CASE("x-line push of multiplication by p") {
    auto f5 = build_extension(5, 1);
    const LegendreCurve C(f5->from_int(2));

    CHECK(C.isogeny_x(ProjPoint::infinity()).is_infinity());
    // order-2 abscissae are fixed
    for (std::uint64_t v : {0ull, 1ull, 2ull})
        CHECK(C.isogeny_x(ProjPoint(f5->from_int(v))) == ProjPoint(f5->from_int(v)));
    // frozen: x = 3 is fixed ( [5](3,1) = (3,1) )
    CHECK(C.isogeny_x(ProjPoint(f5->from_int(3))) == ProjPoint(f5->from_int(3)));

    // the image never depends on which square root lifts the abscissa:
    // check against both lifts over the quadratic extension
    const LegendreCurve C25 = C.base_change(build_extension(5, 2).get());
    for (std::uint64_t i = 0; i < 25; ++i) {
        const Fq x = C25.field()->element_from_index(i);
        const ProjPoint img = C25.isogeny_x(ProjPoint(x));
        const LegendreCurve C4 = C.base_change(build_extension(5, 4).get());
        const Embedding& e = get_embedding(C25.field(), C4.field());
        const auto lifts = C4.points_with_x(e.embed(x));
        REQUIRE(!lifts.empty());
        for (const CurvePoint& P : lifts) {
            const ProjPoint big = projection_pi(C4.scalar_mul(5, P));
            if (img.is_infinity()) {
                CHECK(big.is_infinity());
            } else {
                REQUIRE_FALSE(big.is_infinity());
                CHECK(big.x() == e.embed(img.x()));
            }
        }
    }

    // supersingular: the push is the squared Frobenius on every abscissa
    auto f27 = build_extension(3, 3);
    const Embedding& e3 = get_embedding(build_extension(3, 1).get(), f27.get());
    const LegendreCurve S(e3.embed(build_extension(3, 1)->from_int(2)));
    for (std::uint64_t i = 0; i < 27; ++i) {
        const Fq x = f27->element_from_index(i);
        CHECK(S.isogeny_x(ProjPoint(x)) == ProjPoint(x.frobenius().frobenius()));
    }
}
