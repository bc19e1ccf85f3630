#include <catch2/catch_amalgamated.hpp>

#include "hankel/carlitz.hpp"

using namespace hankel;

namespace {
Field F3 = field_make(3);
Field F2 = field_make(2);

// test-side composition of twisted polynomials sum_i a_i x^(q^i):
// (a o b)_k = sum_{i+j=k} a_i * b_j^(q^i)
std::vector<BiPoly> compose_twisted(const std::vector<BiPoly>& a, const std::vector<BiPoly>& b) {
    const Field& f = a[0].field();
    std::vector<BiPoly> r(a.size() + b.size() - 1, BiPoly(f));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] += a[i] * frobenius_theta(b[j], static_cast<uint32_t>(i));
    return r;
}
}  // namespace

TEST_CASE("monic enumeration") {
    auto d0 = monic_enum(F3, 0);
    REQUIRE(d0.size() == 1);
    CHECK(d0[0].to_bipoly() == BiPoly::one(F3));

    auto d1 = monic_enum(F3, 1);
    REQUIRE(d1.size() == 3);
    CHECK(d1[0].to_bipoly() == BiPoly::theta(F3));
    CHECK(d1[1].to_bipoly() == BiPoly::theta(F3) + BiPoly::one(F3));
    CHECK(d1[2].to_bipoly() == BiPoly::theta(F3) + BiPoly::constant(F3, 2));

    CHECK(monic_enum(F2, 2).size() == 4);
}

TEST_CASE("carlitz module coefficients") {
    MonicPoly one{F3, {F3->one()}};
    auto r1 = carlitz_rho(one);
    REQUIRE(r1.size() == 1);
    CHECK(r1[0] == BiPoly::one(F3));

    MonicPoly th{F3, {F3->zero(), F3->one()}};
    auto rt = carlitz_rho(th);
    REQUIRE(rt.size() == 2);
    CHECK(rt[0] == BiPoly::theta(F3));
    CHECK(rt[1] == BiPoly::one(F3));

    // rho_{theta^2} = rho_theta o rho_theta, composed by the test-side oracle
    MonicPoly th2{F3, {F3->zero(), F3->zero(), F3->one()}};
    auto rt2 = carlitz_rho(th2);
    auto oracle = compose_twisted(rt, rt);
    REQUIRE(rt2.size() == 3);
    CHECK(rt2[0] == oracle[0]);
    CHECK(rt2[1] == oracle[1]);
    CHECK(rt2[2] == oracle[2]);
    CHECK(rt2[1] == BiPoly::theta(F3, 3) + BiPoly::theta(F3));
    // multiplicativity on a composite: rho_{theta*(theta+1)}
    MonicPoly th_p1{F3, {F3->one(), F3->one()}};
    MonicPoly prod{F3, {F3->zero(), F3->one(), F3->one()}};  // theta^2 + theta
    auto lhs = carlitz_rho(prod);
    auto rhs = compose_twisted(carlitz_rho(th), carlitz_rho(th_p1));
    REQUIRE(lhs.size() == rhs.size());
    for (size_t i = 0; i < lhs.size(); ++i) CHECK(lhs[i] == rhs[i]);
}

TEST_CASE("u_a parameters") {
    MonicPoly one{F3, {F3->one()}};
    USeries u1 = u_parameter(one, 8);
    CHECK(u1.valuation() == 1);
    CHECK(u1.coeff_at(1) == BiPoly::one(F3));
    for (int64_t e = 2; e < 8; ++e) CHECK(u1.coeff_at(e).is_zero());

    // q=3, a=theta: u^3 * (1 + theta u^2)^{-1} via the geometric oracle
    MonicPoly th{F3, {F3->zero(), F3->one()}};
    USeries ut = u_parameter(th, 12);
    CHECK(ut.valuation() == 3);
    for (int64_t m = 0; 3 + 2 * m < 12; ++m) {
        BiPoly expect = BiPoly::theta(F3, m);
        if (m % 2) expect = -expect;
        CHECK(ut.coeff_at(3 + 2 * m) == expect);
    }

    for (uint32_t d = 0; d <= 2; ++d) {
        for (const auto& a : monic_enum(F3, d)) {
            USeries ua = u_parameter(a, 30);
            CHECK(ua.valuation() == ipow(3, d));
            for (int64_t e = ua.valuation(); e < 30; ++e) CHECK(ua.coeff_at(e).is_t_free());
        }
    }
}

TEST_CASE("generator expansions match the displayed leading terms") {
    // q = 3: E = u + u^5 + ..., h = -u - u^5 - ..., g = 1 - [1]u^2 - [1]u^14 - ...
    GeneratorSet gs = make_generators(F3, 20);
    CHECK(gs.E.valuation() == 1);
    CHECK(gs.E.coeff_at(1) == BiPoly::one(F3));
    CHECK(gs.E.coeff_at(5) == BiPoly::one(F3));
    for (int64_t e = 2; e < 5; ++e) CHECK(gs.E.coeff_at(e).is_zero());

    CHECK(gs.h.coeff_at(1) == -BiPoly::one(F3));
    CHECK(gs.h.coeff_at(5) == -BiPoly::one(F3));
    for (int64_t e = 2; e < 5; ++e) CHECK(gs.h.coeff_at(e).is_zero());

    BiPoly br = bracket(F3, 1);
    CHECK(gs.g.coeff_at(0) == BiPoly::one(F3));
    CHECK(gs.g.coeff_at(2) == -br);
    CHECK(gs.g.coeff_at(14) == -br);
    for (int64_t e = 3; e < 14; ++e) CHECK(gs.g.coeff_at(e).is_zero());
    CHECK(gs.g.coeff_at(1).is_zero());

    CHECK(gs.delta.valuation() == 2);
    CHECK(gs.delta.coeff_at(2) == -BiPoly::one(F3));
    CHECK(in_v_lattice(gs.g));
    CHECK(in_v_lattice(gs.delta));
    CHECK(!in_v_lattice(gs.E));

    // q = 2: exponents collapse to q^2-2q+2 = 2 and q^3-2q^2+2q-1 = 3
    GeneratorSet g2 = make_generators(F2, 10);
    CHECK(g2.E.coeff_at(1) == BiPoly::one(F2));
    CHECK(g2.E.coeff_at(2) == BiPoly::one(F2));
    CHECK(g2.h.coeff_at(1) == BiPoly::one(F2));  // -1 = 1
    CHECK(g2.g.coeff_at(0) == BiPoly::one(F2));
    CHECK(g2.g.coeff_at(1) == bracket(F2, 1));
    CHECK(g2.g.coeff_at(3) == bracket(F2, 1));
    CHECK(g2.delta.valuation() == 1);
}

TEST_CASE("generator coefficients are integral (t-free)") {
    for (const Field& f : {F2, F3}) {
        GeneratorSet gs = make_generators(f, 25);
        for (const USeries* s : {&gs.E, &gs.g, &gs.h, &gs.delta}) {
            for (int64_t e = s->window_start(); e < s->precision(); ++e)
                CHECK(s->coeff_at(e).is_t_free());
        }
    }
}

TEST_CASE("delta is minus the (q-1)-th power of h") {
    GeneratorSet gs = make_generators(F3, 20);
    CHECK(equal_to_min_prec(gs.delta, -pow(gs.h, 2)));
    CHECK(gs.delta.valuation() == 2);
}

TEST_CASE("power sums and standalone wrappers agree with the shared set") {
    GeneratorSet gs = make_generators(F3, 15);
    CHECK(equal_to_min_prec(gs.E, series_E(F3, 15)));
    CHECK(equal_to_min_prec(gs.h, series_h(F3, 15)));
    CHECK(equal_to_min_prec(gs.g, series_g(F3, 15)));
    CHECK(equal_to_min_prec(gs.delta, series_delta(F3, 15)));
    CHECK(equal_to_min_prec(gs.E, power_sum(F3, 0, 15)));
    USeries p2 = power_sum(F3, 2, 15);
    CHECK(p2.valuation() == 1);
    CHECK(p2.coeff_at(1) == BiPoly::one(F3));
}

TEST_CASE("adding a degree layer never changes coefficients below its valuation") {
    // the sum is truncated at q^d >= N; recompute at higher precision and compare
    for (const Field& f : {F2, F3}) {
        GeneratorSet lo = make_generators(f, 12);
        GeneratorSet hi = make_generators(f, 40);
        CHECK(equal_to_min_prec(lo.E, hi.E));
        CHECK(equal_to_min_prec(lo.g, hi.g));
        CHECK(equal_to_min_prec(lo.h, hi.h));
        CHECK(equal_to_min_prec(lo.delta, hi.delta));
    }
}
