#include <catch2/catch_amalgamated.hpp>

#include "hankel/useries.hpp"
#include "test_support.hpp"

using namespace hankel;
using testsupport::random_useries;

namespace {
Field F3 = field_make(3);
Field F2 = field_make(2);
}

TEST_CASE("multiplicative identity") {
    USeries a = USeries::u_power(F3, 1, 10) + USeries::u_power(F3, 2, 10);
    USeries r = a * USeries::one(F3, 10);
    CHECK(equal_to_min_prec(r, a));
    CHECK(r.valuation() == 1);
}

TEST_CASE("geometric series inverse") {
    USeries a = USeries::one(F3, 8) - USeries::u_power(F3, 1, 8);
    USeries b = inverse(a);
    for (int64_t e = 0; e < 8; ++e) CHECK(b.coeff_at(e) == BiPoly::one(F3));
    CHECK(equal_to_min_prec(a * b, USeries::one(F3, 8)));
}

TEST_CASE("inverse demands a unit leading coefficient") {
    USeries a = USeries::monomial(F3, BiPoly::theta(F3), 0, 6) + USeries::u_power(F3, 1, 6);
    CHECK_THROWS_AS(inverse(a), NonUnitLeadingCoefficient);
}

TEST_CASE("laurent inverse of a shifted unit") {
    USeries a = (USeries::one(F3, 6) + USeries::u_power(F3, 1, 6)).shifted(2);
    USeries b = inverse(a);
    CHECK(b.valuation() == -2);
    CHECK(equal_to_min_prec(a * b, USeries::one(F3, 4)));
}

TEST_CASE("tau and chi") {
    USeries u = USeries::u_power(F3, 1, 5);
    USeries tu = tau(u);
    CHECK(tu.valuation() == 3);
    CHECK(tu.precision() == 3 * 5 - 2);

    BiPoly tmth = BiPoly::t(F3) - BiPoly::theta(F3);
    USeries s = USeries::monomial(F3, tmth, 1, 5);
    CHECK(tau(s).coeff_at(3) == BiPoly::t(F3) - BiPoly::theta(F3, 3));
    CHECK(chi(s).coeff_at(1) == BiPoly::t(F3, 3) - BiPoly::theta(F3));
    CHECK(chi(s).precision() == 5);
    CHECK(chi(USeries::u_power(F3, 1, 5)).coeff_at(1) == BiPoly::one(F3));
}

TEST_CASE("twists commute and compose to the Frobenius power") {
    std::mt19937_64 rng(37);
    for (int i = 0; i < 100; ++i) {
        const Field& f = i % 2 ? F3 : F2;
        USeries a = random_useries(rng, f, -2 + (i % 5), 6 + (i % 4), 2, 3);
        CHECK(equal_to_min_prec(tau(chi(a)), chi(tau(a))));
        CHECK(equal_to_min_prec(pow(a, f->q), chi(tau(a))));
        CHECK(equal_to_min_prec(frob_pow(a, 1), chi(tau(a))));
    }
}

TEST_CASE("multiplication is associative and commutative to min precision") {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 50; ++i) {
        USeries a = random_useries(rng, F3, 0, 7, 2, 2);
        USeries b = random_useries(rng, F3, 1, 6, 2, 2);
        USeries c = random_useries(rng, F3, 0, 5, 2, 2);
        CHECK(equal_to_min_prec(a * b, b * a));
        CHECK(equal_to_min_prec((a * b) * c, a * (b * c)));
    }
}

TEST_CASE("mul precision follows the stated rule") {
    std::mt19937_64 rng(43);
    USeries a = random_useries(rng, F3, 2, 9, 1, 1);
    USeries b = random_useries(rng, F3, 1, 7, 1, 1);
    USeries p = a * b;
    CHECK(p.precision() == std::min<int64_t>(9 + 1, 7 + 2));
}

TEST_CASE("exact scalar division") {
    BiPoly br = bracket(F3, 1);
    USeries a = USeries::monomial(F3, br, 1, 6);
    USeries q = exact_div_scalar(a, br);
    CHECK(q.coeff_at(1) == BiPoly::one(F3));

    USeries bad = USeries::u_power(F3, 1, 6) +
                  USeries::monomial(F3, BiPoly::theta(F3), 2, 6);
    try {
        exact_div_scalar(bad, BiPoly::theta(F3));
        FAIL("expected NonExactCoefficient");
    } catch (const NonExactCoefficient& e) {
        CHECK(e.exponent == 1);
        CHECK(!e.remainder.is_zero());
    }
}

TEST_CASE("v-lattice predicate") {
    USeries g_like = USeries::one(F3, 10) + USeries::u_power(F3, 2, 10) + USeries::u_power(F3, 8, 10);
    CHECK(in_v_lattice(g_like));
    USeries e_like = USeries::u_power(F3, 1, 10);
    CHECK(!in_v_lattice(e_like));
    CHECK(in_v_lattice(USeries::zero_to(F3, 10)));
    std::mt19937_64 rng(5);
    CHECK(in_v_lattice(random_useries(rng, F2, 1, 7, 2, 2)));  // q = 2: always
}

TEST_CASE("zero-to-precision semantics") {
    USeries z = USeries::zero_to(F3, 12);
    CHECK(z.is_zero_to_prec());
    CHECK(z.precision() == 12);
    CHECK_THROWS_AS(z.valuation(), std::domain_error);
    CHECK_THROWS_AS(z.leading(), std::domain_error);
    USeries a = USeries::u_power(F3, 1, 12);
    CHECK((a - a).is_zero_to_prec());
    CHECK((a - a).precision() == 12);
    USeries za = z * a;  // zero times val-1 series: zero to 13
    CHECK(za.is_zero_to_prec());
    CHECK(za.precision() == 13);
}

TEST_CASE("truncation and shifted exponents") {
    USeries a = USeries::u_power(F3, 1, 10) + USeries::u_power(F3, 4, 10);
    USeries t = a.truncated(3);
    CHECK(t.precision() == 3);
    CHECK(t.valuation() == 1);
    CHECK(a.truncated(1).is_zero_to_prec());
    CHECK(a.shifted(-3).valuation() == -2);
}

TEST_CASE("pow of power of q equals iterated frobenius power") {
    std::mt19937_64 rng(47);
    for (int i = 0; i < 20; ++i) {
        USeries a = random_useries(rng, F3, 1, 6, 1, 2);
        CHECK(equal_to_min_prec(pow(a, 9), frob_pow(a, 2)));
    }
}
