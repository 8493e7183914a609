#include <doctest.h>

#include "hdf/fq.hpp"

using namespace hdf;

TEST_CASE("primality helper") {
    CHECK(is_prime_u64(2));
    CHECK(is_prime_u64(3));
    CHECK(is_prime_u64(31));
    CHECK(is_prime_u64(101));
    CHECK(is_prime_u64(1000003));
    CHECK_FALSE(is_prime_u64(0));
    CHECK_FALSE(is_prime_u64(1));
    CHECK_FALSE(is_prime_u64(91));  // 7 * 13
    CHECK_FALSE(is_prime_u64(1024));
}

TEST_CASE("field construction picks the canonical modulus") {
    auto f3 = build_extension(3, 1);
    CHECK(f3->modulus() == std::vector<std::uint32_t>{0, 1}); // x itself

    // Scanning degree-2 monics over F_3 in canonical order, x^2 + 1 is the
    // first irreducible one.
    auto f9 = build_extension(3, 2);
    CHECK(f9->modulus() == std::vector<std::uint32_t>{1, 0, 1});

    // Over F_5: x^2 + 1 = (x+2)(x+3), x^2 + 2 is irreducible.
    auto f25 = build_extension(5, 2);
    CHECK(f25->modulus() == std::vector<std::uint32_t>{2, 0, 1});

    // Interning: same parameters give the same context object.
    CHECK(build_extension(3, 2).get() == f9.get());

    CHECK(f9->order().to_u64() == 9);
    CHECK(f25->order_u64().value() == 25);
}

TEST_CASE("field construction rejects bad parameters") {
    CHECK_THROWS_AS(build_extension(4, 1), NotPrime);
    CHECK_THROWS_AS(build_extension(2, 3), NotPrime);   // characteristic 2 unsupported
    CHECK_THROWS_AS(build_extension(0, 1), NotPrime);
    CHECK_THROWS_AS(build_extension(3, 0), TooLarge);
    CHECK_THROWS_AS(build_extension(3, 25), TooLarge);  // beyond the degree cap
    CHECK_THROWS_AS(build_extension((1u << 20) + 7, 1), TooLarge);
}

TEST_CASE("arithmetic in F_9") {
    auto f9 = build_extension(3, 2);
    const Fq t = f9->element_from_index(3); // coefficient tuple (0,1)
    CHECK(t.coeff(0) == 0);
    CHECK(t.coeff(1) == 1);

    // t^2 = -1 = 2 with modulus t^2 + 1.
    CHECK(t * t == f9->from_int(2));
    // Frobenius is t -> t^3 = t * t^2 = 2t.
    CHECK(t.frobenius() == f9->from_coeffs({0, 2}));
    CHECK(t.pow(3) == t.frobenius());
    // Applying Frobenius twice is the identity on F_9.
    CHECK(t.frobenius().frobenius() == t);

    CHECK((t + t + t).is_zero());
    CHECK(t.inv() * t == f9->one());
    CHECK_FALSE(t.in_prime_field());
    CHECK(f9->from_int(2).in_prime_field());
}

TEST_CASE("field axioms hold on all of F_25") {
    auto f = build_extension(5, 2);
    std::vector<Fq> all;
    for (std::uint64_t i = 0; i < 25; ++i) all.push_back(f->element_from_index(i));

    for (const Fq& a : all) {
        CHECK(a.pow(25) == a);              // x^q = x
        CHECK(a.index() < 25);
        CHECK(f->element_from_index(a.index()) == a);
        if (!a.is_zero()) {
            CHECK(a * a.inv() == f->one());
            CHECK(a.pow(24) == f->one());   // x^(q-1) = 1
        }
    }
    // Spot-check distributivity on a grid.
    for (std::uint64_t i = 0; i < 25; i += 3)
        for (std::uint64_t j = 0; j < 25; j += 4)
            for (std::uint64_t l = 0; l < 25; l += 5) {
                const Fq a = all[i], b = all[j], c = all[l];
                CHECK(a * (b + c) == a * b + a * c);
            }
}

TEST_CASE("pow with big-integer exponents") {
    auto f = build_extension(3, 5);
    const Fq g = f->element_from_index(3);
    BigUint e = f->order();     // 243
    CHECK(g.pow(e) == g);       // x^q = x
    e.sub_small(1);
    CHECK(g.pow(e) == f->one());
}

TEST_CASE("square roots: small-field scan") {
    auto f7 = build_extension(7, 1);
    // Squares mod 7 are {0, 1, 2, 4}.
    CHECK(sqrt_in_field(f7->zero()).value() == f7->zero());
    CHECK(sqrt_in_field(f7->from_int(1)).value() == f7->from_int(1));
    // 3^2 = 2 and 4^2 = 2; the canonical answer is the smaller root 3.
    CHECK(sqrt_in_field(f7->from_int(2)).value() == f7->from_int(3));
    CHECK(sqrt_in_field(f7->from_int(4)).value() == f7->from_int(2));
    CHECK_FALSE(sqrt_in_field(f7->from_int(3)).has_value());
    CHECK_FALSE(sqrt_in_field(f7->from_int(5)).has_value());
    CHECK_FALSE(sqrt_in_field(f7->from_int(6)).has_value());
}

TEST_CASE("square roots: large prime field uses the general path") {
    auto f = build_extension(1000003, 1);
    for (std::uint64_t v : {2ull, 123456ull, 999999ull}) {
        const Fq a = f->from_int(v);
        const Fq sq = a * a;
        auto r = sqrt_in_field(sq);
        REQUIRE(r.has_value());
        CHECK((*r) * (*r) == sq);
        // Canonical choice: the smaller of the two roots.
        CHECK(r->less(-(*r)));
    }
    // Exactly (q-1)/2 nonzero squares exist; count a small stretch instead.
    unsigned hits = 0;
    for (std::uint64_t v = 1; v <= 40; ++v)
        if (sqrt_in_field(f->from_int(v)).has_value()) ++hits;
    CHECK(hits > 10);
    CHECK(hits < 30);
}

TEST_CASE("square roots in an extension beyond the scan threshold") {
    auto f = build_extension(3, 10); // 59049 elements
    for (std::uint64_t idx : {5ull, 1234ull, 40000ull}) {
        const Fq a = f->element_from_index(idx);
        const Fq sq = a * a;
        auto r = sqrt_in_field(sq);
        REQUIRE(r.has_value());
        CHECK((*r) * (*r) == sq);
    }
}

TEST_CASE("canonical element order matches enumeration indices") {
    auto f9 = build_extension(3, 2);
    for (std::uint64_t i = 0; i + 1 < 9; ++i)
        CHECK(f9->element_from_index(i).less(f9->element_from_index(i + 1)));
}

TEST_CASE("mixing contexts is rejected") {
    auto f3 = build_extension(3, 1);
    auto f9 = build_extension(3, 2);
    CHECK_THROWS_AS(f3->one() + f9->one(), CtxMismatch);
    CHECK_THROWS_AS(f3->one() * f9->one(), CtxMismatch);
}

TEST_CASE("arithmetic modulo p^2") {
    const std::uint32_t p = 7;
    W2Int a(10, p), b(44, p);
    CHECK((a + b).value() == 5);  // 54 mod 49
    CHECK((a * b).value() == 440 % 49);
    CHECK((a - b).value() == (49 + 10 - 44) % 49);
    W2Int m(21, p);               // 3 * 7
    CHECK(m.div_p_mod_p() == 3);
    CHECK_THROWS_AS(W2Int(10, p).div_p_mod_p(), DivisionByZero);
    CHECK(W2Int(23, p).mod_p() == 2);
}

TEST_CASE("projective points") {
    auto f7 = build_extension(7, 1);
    const ProjPoint inf = ProjPoint::infinity();
    const ProjPoint a(f7->from_int(3));
    CHECK(inf.is_infinity());
    CHECK_FALSE(a.is_infinity());
    CHECK(a.x() == f7->from_int(3));
    CHECK(inf == ProjPoint::infinity());
    CHECK(inf != a);
    CHECK(a == ProjPoint(f7->from_int(3)));
    CHECK_THROWS_AS(inf.x(), BadInput);
    CHECK(inf.to_string() == "inf");
}

TEST_CASE("big unsigned integers") {
    BigUint a = BigUint::power(2, 100);
    CHECK(a.bit_length() == 101);
    CHECK(a.bit(100));
    CHECK_FALSE(a.bit(99));
    CHECK_FALSE(a.fits_u64());
    CHECK_THROWS_AS(a.to_u64(), TooLarge);

    a.sub_small(1);               // 2^100 - 1: borrow ripples across limbs
    CHECK(a.bit_length() == 100);
    CHECK(a.bit(0));
    CHECK(a.is_odd());
    a.halve();
    CHECK(a.bit_length() == 99);

    BigUint b(10);
    b.mul_small(10);
    CHECK(b.to_u64() == 100);
    b.sub_small(100);
    CHECK(b.is_zero());
    CHECK_THROWS_AS(b.sub_small(1), TooLarge);

    CHECK(BigUint::power(3, 5).to_u64() == 243);
    CHECK(BigUint::power(101, 2).to_u64() == 10201);
}
