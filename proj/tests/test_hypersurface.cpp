#include "conic/errors.hpp"
#include "conic/hypersurface.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace conic;

namespace {

Monomial mono(std::vector<std::int64_t> e) { return {std::move(e), 1.0}; }

} // namespace

TEST_CASE("weighted degree") {
    WeightedPolynomial cubic({1, 1, 1, 1}, {mono({3, 0, 0, 0}), mono({0, 3, 0, 0}), mono({0, 0, 3, 0}), mono({0, 0, 0, 3})});
    auto d = weighted_degree(cubic);
    CHECK(d.degree == 3);
    CHECK(d.homogeneous);

    WeightedPolynomial mixed({7, 7, 7, 3}, {mono({3, 0, 0, 0}), mono({0, 3, 0, 0}), mono({0, 0, 3, 0}), mono({0, 0, 0, 7})});
    CHECK(weighted_degree(mixed).degree == 21);
    CHECK(weighted_degree(mixed).homogeneous);

    WeightedPolynomial cusp({1, 1}, {mono({2, 0}), mono({0, 3})});
    CHECK(weighted_degree(cusp).degree == 2);
    CHECK_FALSE(weighted_degree(cusp).homogeneous);

    CHECK_THROWS_AS((void)weighted_degree(WeightedPolynomial({1, 1}, {})), DomainError);
    CHECK_THROWS_AS(WeightedPolynomial({2, 4}, {mono({1, 0})}), DomainError);
    CHECK_THROWS_AS(WeightedPolynomial({1, 0}, {mono({1, 0})}), DomainError);
    CHECK_THROWS_AS(WeightedPolynomial({1, 1}, {mono({1})}), DomainError);
    CHECK_THROWS_AS(WeightedPolynomial({1, 1}, {{{1, 0}, 0.0}}), DomainError);
}

TEST_CASE("Calabi-Yau link condition") {
    auto cubic = brieskorn_pham({3, 3, 3, 3});
    CHECK(cubic.weights() == std::vector<std::int64_t>{1, 1, 1, 1});
    CHECK(cy_link_condition(cubic));
    CHECK_FALSE(cy_link_condition(brieskorn_pham({4, 4, 4, 4})));
    auto mixed = brieskorn_pham({3, 3, 3, 7});
    CHECK(mixed.weights() == std::vector<std::int64_t>{7, 7, 7, 3});
    CHECK(weighted_degree(mixed).degree == 21);
    CHECK(cy_link_condition(mixed));
    CHECK_THROWS_AS((void)cy_link_condition(WeightedPolynomial({1, 1}, {mono({2, 0}), mono({0, 3})})), PreconditionError);
    CHECK_THROWS_AS((void)brieskorn_pham({1, 3}), DomainError);
}

TEST_CASE("link condition is invariant under permuting variables") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::int64_t> pick(2, 9);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::int64_t> a(4);
        for (auto& x : a) x = pick(rng);
        const bool base = cy_link_condition(brieskorn_pham(a));
        std::shuffle(a.begin(), a.end(), rng);
        CHECK(cy_link_condition(brieskorn_pham(a)) == base);
        // Brieskorn-Pham: d < |w| iff sum 1/a_j > 1.
        double s = 0.0;
        for (auto x : a) s += 1.0 / static_cast<double>(x);
        CHECK(base == (s > 1.0 + 1e-12));
    }
}

TEST_CASE("crepant chain examples") {
    auto c7 = bp_crepant_chain(3, 7);
    CHECK(c7.se_ok);
    CHECK(c7.resolvable);
    CHECK(c7.blowup_count == 2);
    CHECK(c7.family_count == 2);
    CHECK(c7.steps.size() == 2);
    CHECK(c7.crepant());
    CHECK(c7.steps[1].k == 4);

    CHECK_FALSE(bp_crepant_chain(3, 5).se_ok);
    auto c8 = bp_crepant_chain(3, 8);
    CHECK(c8.se_ok);
    CHECK_FALSE(c8.resolvable);
    CHECK(c8.family_count == 0);

    CHECK(blowup_discrepancy(3, 2) == 1);
    CHECK(blowup_discrepancy(3, 3) == 0);
    CHECK_THROWS_AS((void)bp_crepant_chain(1, 4), DomainError);
}

TEST_CASE("crepant chain properties") {
    for (std::int64_t m = 2; m <= 6; ++m) {
        for (std::int64_t k = 2; k <= 60; ++k) {
            CHECK(bp_crepant_chain(m, k + m).blowup_count == bp_crepant_chain(m, k).blowup_count + 1);
            CHECK(bp_crepant_chain(m, k).crepant());
        }
        std::int64_t first = 0;
        for (std::int64_t k = 2; first == 0; ++k) {
            const auto c = bp_crepant_chain(m, k);
            if (c.se_ok && c.resolvable) first = k;
        }
        CHECK(smallest_admissible_k(m) == first);
    }
}

TEST_CASE("table output") {
    CHECK(bp_table_csv(3, 6, 7) ==
          "m,k,se_ok,resolvable,blowup_count,family_count\n3,6,false,true,2,0\n3,7,true,true,2,2\n");
}
