#include "conic/errors.hpp"
#include "conic/toric.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace conic;

namespace {

constexpr double kPi = std::numbers::pi;

FanTriangulation fan_of(std::size_t m, std::vector<IntVector> rays) {
    return maximal_triangulation(cross_section(ToricCone(m, std::move(rays))));
}

FanTriangulation a1() { return fan_of(2, {{1, 0}, {1, 2}}); }
FanTriangulation z3() { return fan_of(3, {{1, 0, 1}, {0, 1, 1}, {-1, -1, 1}}); }

// Interior rays get `inner`, boundary rays zero.
std::vector<double> bump(const FanTriangulation& t, double inner) {
    std::vector<double> v(t.rays.size(), 0.0);
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (t.interior[j]) v[j] = inner;
    }
    return v;
}

} // namespace

TEST_CASE("cone validation") {
    CHECK_THROWS_AS(ToricCone(2, {{2, 0}, {0, 1}}), DomainError);
    CHECK_THROWS_AS(ToricCone(2, {{1, 0}, {-1, 0}, {0, 1}}), DomainError);
    CHECK_THROWS_AS(ToricCone(3, {{1, 0, 0}, {0, 1, 0}}), DomainError);
    CHECK_THROWS_AS(ToricCone(2, {{1, 0}, {1, 0}, {0, 1}}), DomainError);
    CHECK_THROWS_AS(ToricCone(1, {{1}}), DomainError);
    ToricCone c(2, {{1, 0}, {1, 2}});
    CHECK(c.facet_normals().size() == 2);
    CHECK(c.contains({1, 1}, true));
    CHECK(c.contains({1, 0}));
    CHECK_FALSE(c.contains({1, 0}, true));
    CHECK_FALSE(c.contains({0, 1}));
}

TEST_CASE("Gorenstein covectors") {
    auto a = gorenstein_covector(ToricCone(2, {{1, 0}, {1, 2}}));
    REQUIRE(a.gorenstein());
    CHECK(*a.covector == IntVector{1, 0});

    auto b = gorenstein_covector(ToricCone(3, {{1, 0, 1}, {0, 1, 1}, {-1, -1, 1}}));
    CHECK(*b.covector == IntVector{0, 0, 1});

    auto c = gorenstein_covector(ToricCone(3, {{0, 0, 1}, {1, 0, 1}, {0, 1, 1}, {1, 1, 2}}));
    CHECK_FALSE(c.gorenstein());
    REQUIRE(c.certificate);
    CHECK(c.certificate->forced == RationalVector{0, 0, 1});
    CHECK(c.certificate->ray == 3u);
    CHECK(c.certificate->value == 2);
    CHECK(c.certificate->describe() == "rays {0,1,2} force gamma = (0,0,1) but gamma(u_3) = 2");

    // gamma = (1/2, 1/2) solves the system but is not integral.
    auto d = gorenstein_covector(ToricCone(2, {{1, 1}, {3, -1}}));
    CHECK_FALSE(d.gorenstein());
    CHECK(d.certificate->non_integral);
    CHECK_THROWS_AS((void)cross_section(ToricCone(2, {{1, 1}, {3, -1}})), PreconditionError);
}

TEST_CASE("cross-section lattice points") {
    auto a = cross_section(ToricCone(2, {{1, 0}, {1, 2}}));
    REQUIRE(a.points.size() == 3);
    CHECK(a.points[1].ambient == IntVector{1, 1});
    CHECK(a.interior_count() == 1);

    auto z = cross_section(ToricCone(3, {{1, 0, 1}, {0, 1, 1}, {-1, -1, 1}}));
    CHECK(z.points.size() == 4);
    CHECK(z.interior_count() == 1);
    CHECK(z.boundary_count() == 3);
    for (const auto& p : z.points) CHECK(p.coords.size() == 2);
    // Coordinates are an affine lattice isomorphism: reconstruct the point.
    for (const auto& p : z.points) {
        IntVector x = z.origin;
        for (std::size_t i = 0; i < 2; ++i) {
            for (std::size_t k = 0; k < 3; ++k) x[k] += p.coords[i] * z.basis[i][k];
        }
        CHECK(x == p.ambient);
    }

    auto smooth = cross_section(ToricCone(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
    CHECK(smooth.gamma == IntVector{1, 1, 1});
    CHECK(smooth.interior_count() == 0);
    CHECK(smooth.points.size() == 3);
}

TEST_CASE("maximal triangulations are basic") {
    auto t = a1();
    CHECK(t.simplices.size() == 2);
    CHECK(t.maximal);
    CHECK(t.basic);
    CHECK(t.interior_count() == 1);

    auto z = z3();
    CHECK(z.simplices.size() == 3);
    for (auto d : z.determinants) CHECK(std::abs(d) == 1);
    CHECK(z.basic);

    auto smooth = fan_of(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    CHECK(smooth.simplices.size() == 1);
    CHECK(smooth.basic);

    // Triangle of area 8 with 12 boundary and 3 interior lattice points:
    // a unimodular triangulation has 2 * area = 16 triangles.
    auto big = fan_of(3, {{-1, -1, 1}, {3, -1, 1}, {-1, 3, 1}});
    CHECK(big.rays.size() == 15);
    CHECK(big.interior_count() == 3);
    CHECK(big.simplices.size() == 16);
    CHECK(big.maximal);
    CHECK(big.basic);

    // No interior point: boundary points are inserted along the edges.
    auto strip = fan_of(3, {{0, 0, 1}, {2, 0, 1}, {0, 1, 1}, {2, 1, 1}});
    CHECK(strip.interior_count() == 0);
    CHECK(strip.simplices.size() == 4);
    CHECK(strip.basic);

    auto hexagon = fan_of(3, {{1, 0, 1}, {0, 1, 1}, {-1, 1, 1}, {-1, 0, 1}, {0, -1, 1}, {1, -1, 1}});
    CHECK(hexagon.simplices.size() == 6);
    CHECK(hexagon.basic);

    auto long_segment = fan_of(2, {{1, 0}, {1, 5}});
    CHECK(long_segment.simplices.size() == 5);
    CHECK(long_segment.basic);

    CHECK_THROWS_AS((void)fan_of(4, {{1, 0, 0, 1}, {0, 1, 0, 1}, {0, 0, 1, 1}, {-1, -1, -1, 1}}), UnsupportedError);
}

TEST_CASE("support function convexity") {
    auto t = a1();
    const auto mid = *t.index_of({1, 1});
    std::vector<double> v(3, 0.0);
    v[mid] = 1.0;
    auto c = support_function_check(t, v);
    CHECK(c.strictly_convex);
    CHECK(c.compactly_supported);
    for (const auto& l : c.forms) {
        // Forms are (0, 1) and (2, -1) in some order.
        CHECK(((l == RationalVector{0, 1}) || (l == RationalVector{2, -1})));
    }

    auto zero = support_function_check(t, std::vector<double>(3, 0.0));
    CHECK(zero.convex);
    CHECK_FALSE(zero.strictly_convex);
    CHECK_FALSE(zero.equalities.empty());

    auto shifted = v;
    shifted[*t.index_of({1, 0})] = 0.5;
    CHECK_FALSE(support_function_check(t, shifted).compactly_supported);

    v[mid] = -1.0;
    auto bad = support_function_check(t, v);
    CHECK_FALSE(bad.convex);
    CHECK(bad.violations.size() == 2);
    CHECK_THROWS_AS((void)kahler_class(t, v), PreconditionError);
    CHECK_THROWS_AS((void)support_function_check(t, std::vector<double>{0.0}), DomainError);

    std::map<IntVector, double> keyed{{{1, 0}, 0.0}, {{1, 1}, 1.0}, {{1, 2}, 0.0}};
    CHECK(values_by_ray(t, keyed)[mid] == 1.0);
    keyed.erase({1, 2});
    CHECK_THROWS_AS((void)values_by_ray(t, keyed), DomainError);
    keyed[{2, 1}] = 0.0;
    CHECK_THROWS_AS((void)values_by_ray(t, keyed), DomainError);
}

TEST_CASE("Kahler classes") {
    auto t = a1();
    auto k = kahler_class(t, bump(t, 1.0));
    CHECK(k.kahler);
    CHECK(k.compactly_supported);
    REQUIRE(k.exceptional.size() == 1);
    CHECK(t.rays[k.exceptional[0]] == IntVector{1, 1});
    CHECK(k.coefficients[0] == doctest::Approx(-2 * kPi));
    CHECK(k.moment_set.size() == 3);

    auto flat = kahler_class(t, bump(t, 0.0));
    CHECK_FALSE(flat.kahler);
    CHECK(flat.coefficients[0] == 0.0);

    auto z = z3();
    auto kz = kahler_class(z, bump(z, 1.0));
    CHECK(kz.kahler);
    CHECK(kz.coefficients.size() == 1);
}

TEST_CASE("invariant A on hand-computed examples") {
    auto t = a1();
    auto v = bump(t, 1.0);
    CHECK(complement_volume(t, v) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(exceptional_face_volumes(t, v) == std::vector<double>{2.0});
    const double omega = quotient_link_volume(2, 2);
    CHECK(omega == doctest::Approx(kPi * kPi));
    CHECK(invariant_A(t, v, omega, AMethod::polytope_volume) == doctest::Approx(-4.0).epsilon(1e-12));
    CHECK(invariant_A(t, v, omega, AMethod::divisor_sum) == doctest::Approx(-4.0).epsilon(1e-12));

    // C^3/Z_3: F is the triangle (-1,-1), (2,-1), (-1,2) at height 1.
    auto z = z3();
    auto vz = bump(z, 1.0);
    CHECK(exceptional_face_volumes(z, vz) == std::vector<double>{4.5});
    CHECK(complement_volume(z, vz) == doctest::Approx(1.5).epsilon(1e-15));
    const double oz = quotient_link_volume(3, 3);
    CHECK(oz == doctest::Approx(kPi * kPi * kPi / 3));
    CHECK(invariant_A(z, vz, oz, AMethod::polytope_volume) == doctest::Approx(-18.0).epsilon(1e-12));
    CHECK(invariant_A(z, vz, oz, AMethod::divisor_sum) == doctest::Approx(-18.0).epsilon(1e-12));

    // A_2: lambda = (0, 2, 2, 0) along (1,0)..(1,3); the complement is the
    // quadrilateral 0, (0,2), (2,0), (6,-2) of area 4.
    auto a2 = fan_of(2, {{1, 0}, {1, 3}});
    auto v2 = bump(a2, 2.0);
    CHECK(complement_volume(a2, v2) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(invariant_A(a2, v2, quotient_link_volume(2, 3), AMethod::divisor_sum) ==
          doctest::Approx(-24.0).epsilon(1e-12));

    auto smooth = fan_of(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    CHECK(invariant_A(smooth, std::vector<double>(3, 0.0), 1.0, AMethod::divisor_sum) == 0.0);
    CHECK(invariant_A(smooth, std::vector<double>(3, 0.0), 1.0, AMethod::polytope_volume) == 0.0);
}

TEST_CASE("invariant A preconditions") {
    auto t = a1();
    auto v = bump(t, 1.0);
    CHECK_THROWS_AS((void)invariant_A(t, v, 0.0, AMethod::divisor_sum), DomainError);
    auto loose = v;
    loose[0] = 0.25;
    CHECK_THROWS_AS((void)invariant_A(t, loose, 1.0, AMethod::divisor_sum), PreconditionError);
    CHECK_THROWS_AS((void)invariant_A(t, bump(t, 0.0), 1.0, AMethod::polytope_volume), PreconditionError);
}

TEST_CASE("invariant A: sign, method agreement, homogeneity") {
    struct Case {
        std::size_t m;
        std::vector<IntVector> rays;
    };
    const std::vector<Case> cases{
        {2, {{1, 0}, {1, 2}}},
        {2, {{1, 0}, {1, 5}}},
        {3, {{1, 0, 1}, {0, 1, 1}, {-1, -1, 1}}},
        {3, {{1, 0, 1}, {0, 1, 1}, {-1, 1, 1}, {-1, 0, 1}, {0, -1, 1}, {1, -1, 1}}},
    };
    for (const auto& c : cases) {
        auto t = fan_of(c.m, c.rays);
        std::vector<double> v(t.rays.size(), 0.0);
        if (c.m == 2) {
            // Strictly concave profile along the segment, zero at the ends.
            for (std::size_t j = 0; j < v.size(); ++j) {
                const double s = static_cast<double>(t.coords[j][0] - t.coords[0][0]);
                const double n = static_cast<double>(t.coords[1][0] - t.coords[0][0]);
                v[j] = 0.3 * s * (n - s);
            }
        } else {
            v = bump(t, 0.7);
        }
        REQUIRE(support_function_check(t, v).strictly_convex);
        const double a = invariant_A(t, v, 1.0, AMethod::divisor_sum);
        const double b = invariant_A(t, v, 1.0, AMethod::polytope_volume);
        CHECK(a < 0.0);
        CHECK(std::abs(a - b) <= 1e-9 * std::abs(b));
        for (double s : {2.0, 3.0}) {
            std::vector<double> scaled = v;
            for (auto& x : scaled) x *= s;
            const double as = invariant_A(t, scaled, 1.0, AMethod::polytope_volume);
            CHECK(as == doctest::Approx(std::pow(s, static_cast<double>(c.m)) * b).epsilon(1e-12));
        }
    }
}
