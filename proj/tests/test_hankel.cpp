#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "hankel/hankel.hpp"
#include "test_support.hpp"

using namespace hankel;
using testsupport::random_v_series;

namespace {

int64_t nu_k(uint32_t q, uint32_t k) {
    return (ipow(q, k) - 1) * (ipow(q, k - 1) - 1) / (static_cast<int64_t>(q) * q - 1);
}

}  // namespace

TEST_CASE("H_1 is the identity") {
    Field f = field_make(3);
    GeneratorSet gens = make_generators(f, 20);
    CHECK(equal_to_min_prec(hankel_det(gens.E, 1), gens.E));
}

TEST_CASE("subset determinant agrees with the 2x2 and 3x3 cofactor formulas") {
    Field f = field_make(3);
    std::mt19937_64 rng(53);
    std::vector<BiPoly> e;
    for (int i = 0; i < 9; ++i) e.push_back(testsupport::random_bipoly(rng, f, 2, 2, 3));
    std::function<BiPoly(size_t, size_t)> entry2 = [&](size_t i, size_t j) { return e[i * 2 + j]; };
    CHECK(subset_determinant<BiPoly>(2, entry2) == e[0] * e[3] - e[1] * e[2]);
    std::function<BiPoly(size_t, size_t)> entry3 = [&](size_t i, size_t j) { return e[i * 3 + j]; };
    BiPoly det3 = e[0] * (e[4] * e[8] - e[5] * e[7]) - e[1] * (e[3] * e[8] - e[5] * e[6]) +
                  e[2] * (e[3] * e[7] - e[4] * e[6]);
    CHECK(subset_determinant<BiPoly>(3, entry3) == det3);
}

TEST_CASE("moore determinants") {
    for (uint32_t q : {2u, 3u}) {
        Field f = field_make(q);
        for (uint32_t k = 1; k <= 4; ++k) {
            std::vector<int64_t> nu;
            for (uint32_t i = 0; i < k; ++i) nu.push_back(i);
            INFO("q=" << q << " k=" << k);
            CHECK(moore_det(f, nu) == bk_poly(f, k, Var::t));
        }
    }
    Field f = field_make(3);
    CHECK(moore_det(f, {2, 2}).is_zero());
    CHECK(moore_det(f, {0, 3, 3}).is_zero());
    // antisymmetry under a swap
    CHECK(moore_det(f, {1, 2}) == -moore_det(f, {2, 1}));
}

TEST_CASE("B_k(t) divides 50 random moore determinants, k <= 4") {
    std::mt19937_64 rng(59);
    std::uniform_int_distribution<int64_t> nv(0, 9);
    for (uint32_t q : {2u, 3u}) {
        Field f = field_make(q);
        for (int i = 0; i < 25; ++i) {
            uint32_t k = 2 + static_cast<uint32_t>(i % 3);
            std::vector<int64_t> nu;
            for (uint32_t j = 0; j < k; ++j) nu.push_back(nv(rng));
            BiPoly m = moore_det(f, nu);
            if (m.is_zero()) continue;
            INFO("q=" << q << " k=" << k);
            CHECK(try_exact_div(m, bk_poly(f, k, Var::t)).has_value());
        }
    }
}

TEST_CASE("H_k(d): valuation, leading coefficient, normalised quotient") {
    for (uint32_t q : {2u, 3u}) {
        Field f = field_make(q);
        GeneratorSet gens = make_generators(f, 60);
        Deformation def = make_deformation(gens, 55);
        for (uint32_t k = 1; k <= 3; ++k) {
            USeries hd = hankel_det(def.d_u, k);
            INFO("q=" << q << " k=" << k);
            REQUIRE(!hd.is_zero_to_prec());
            CHECK(hd.valuation() == nu_k(q, k));
            CHECK(hd.leading() == bk_poly(f, k, Var::t));
            USeries quotient = exact_div_scalar(hd.truncated(40), bk_poly(f, k, Var::t));
            CHECK(quotient.leading() == BiPoly::one(f));
            CHECK(in_v_lattice(quotient));
        }
    }
}

TEST_CASE("nu_k values match the closed form") {
    CHECK(nu_k(3, 1) == 0);
    CHECK(nu_k(3, 2) == 2);
    CHECK(nu_k(3, 3) == 26);
    CHECK(nu_k(2, 1) == 0);
    CHECK(nu_k(2, 2) == 1);
    CHECK(nu_k(2, 3) == 7);
}

TEST_CASE("s_0 multi-index: norm and coefficient determinant") {
    for (uint32_t q : {2u, 3u, 5u}) {
        for (uint32_t k = 1; k <= 5; ++k) {
            MultiIndex s0 = s0_index(q, k);
            int64_t expect = (ipow(q, k) - 1) * (ipow(q, k - 1) - 1) /
                             ((static_cast<int64_t>(q) * q - 1) * (q - 1));
            INFO("q=" << q << " k=" << k);
            CHECK(s0.weighted_norm(q) == expect);
        }
    }
    for (uint32_t q : {2u, 3u}) {
        Field f = field_make(q);
        int64_t S = milestone_index(q, 2) + 2;
        GeneratorSet gens = make_generators(f, (q - 1) * S + 1);
        DSeries d = d_series(gens, S);
        for (uint32_t k = 1; k <= 3; ++k) {
            INFO("q=" << q << " k=" << k);
            CHECK(hankel_coeff_det(d, s0_index(q, k)) == bk_poly(f, k, Var::t));
        }
    }
}

TEST_CASE("H_k(d) expands as the sum of coefficient determinants") {
    Field f = field_make(3);
    GeneratorSet gens = make_generators(f, 40);
    Deformation def = make_deformation(gens, 36);
    for (uint32_t k : {2u, 3u}) {
        USeries hd = hankel_det(def.d_u, k);
        int64_t cutoff = 6;
        std::vector<BiPoly> expect(static_cast<size_t>(cutoff + 1), BiPoly(f));
        for (const MultiIndex& s : multiindices_up_to(3, k, cutoff))
            expect[static_cast<size_t>(s.weighted_norm(3))] += hankel_coeff_det(def.d, s);
        for (int64_t n = 0; n <= cutoff; ++n) {
            INFO("k=" << k << " v-index " << n);
            CHECK(hd.coeff_at(2 * n) == expect[static_cast<size_t>(n)]);
        }
    }
}

TEST_CASE("permutation lemma: the s_0 norm strictly grows under shuffles") {
    for (uint32_t q : {2u, 3u, 5u}) {
        for (uint32_t k = 2; k <= 5; ++k) {
            MultiIndex s0 = s0_index(q, k);
            int64_t base = s0.weighted_norm(q);
            std::vector<size_t> perm(k);
            for (size_t i = 0; i < k; ++i) perm[i] = i;
            while (std::next_permutation(perm.begin(), perm.end())) {
                MultiIndex sp;
                for (size_t i = 0; i < k; ++i) sp.s.push_back(s0.s[perm[i]]);
                INFO("q=" << q << " k=" << k);
                CHECK(sp.weighted_norm(q) > base);
            }
        }
    }
}

TEST_CASE("permutation-degree lemma on sampled nonzero coefficient determinants") {
    Field f = field_make(3);
    int64_t S = milestone_index(3, 2) + 3;
    GeneratorSet gens = make_generators(f, 2 * S + 2);
    DSeries d = d_series(gens, S);
    for (uint32_t k : {2u, 3u}) {
        for (const MultiIndex& s : multiindices_up_to(3, k, 12)) {
            BiPoly ds = hankel_coeff_det(d, s);
            if (ds.is_zero()) continue;
            std::vector<int64_t> degs;
            for (int64_t si : s.s) degs.push_back(d.c[static_cast<size_t>(si)].deg_t());
            std::sort(degs.begin(), degs.end());
            for (size_t l = 0; l < degs.size(); ++l) {
                INFO("k=" << k << " l=" << l);
                CHECK(degs[l] >= static_cast<int64_t>(l));
            }
        }
    }
}

TEST_CASE("relationship between H_k(E_bold) and H_k(d)") {
    for (uint32_t q : {2u, 3u}) {
        Field f = field_make(q);
        GeneratorSet gens = make_generators(f, 130);
        Deformation def = make_deformation(gens, 125);
        for (uint32_t k = 1; k <= 2; ++k) {
            Witness w = relationship_check(gens, def, k, 120);
            INFO("q=" << q << " k=" << k << " first_fail=" << w.first_fail);
            CHECK(w.ok);
            CHECK(w.verified_to >= 120);
        }
    }
}

TEST_CASE("sylvester-type identity") {
    Field f3 = field_make(3);
    GeneratorSet g3 = make_generators(f3, 130);
    Deformation d3 = make_deformation(g3, 125);
    CHECK(sylvester_check(d3.d_u, 1, 2, 120).ok);

    Field f2 = field_make(2);
    GeneratorSet g2 = make_generators(f2, 130);
    Deformation d2 = make_deformation(g2, 125);
    CHECK(sylvester_check(d2.d_u, 2, 2, 120).ok);

    // the identity is generic: it also holds on a random series
    std::mt19937_64 rng(61);
    USeries r = random_v_series(rng, f3, 10, 120);
    CHECK(sylvester_check(r, 1, 2, 100).ok);
}

TEST_CASE("divisibility of H_k coefficients by B_k(t)") {
    Field f3 = field_make(3);
    GeneratorSet g3 = make_generators(f3, 80);
    Deformation d3 = make_deformation(g3, 72);
    CHECK(divisibility_check(d3.d_u, 2, 70).ok);

    std::mt19937_64 rng(67);
    Field f2 = field_make(2);
    USeries r = random_v_series(rng, f2, 20, 60);
    CHECK(divisibility_check(r, 3, 55).ok);

    // H_k(1) = 0: trivially divisible
    CHECK(divisibility_check(USeries::one(f3, 30), 2, 25).ok);
    CHECK(hankel_det(USeries::one(f3, 30), 2).is_zero_to_prec());

    CHECK_THROWS_AS(divisibility_check(USeries::u_power(f3, 1, 20), 2, 15),
                    std::invalid_argument);
}

TEST_CASE("hankel_det rejects unsupported orders") {
    Field f = field_make(3);
    CHECK_THROWS_AS(hankel_det(USeries::one(f, 10), 6), std::invalid_argument);
    CHECK_THROWS_AS(hankel_det(USeries::one(f, 10), 0), std::invalid_argument);
}
