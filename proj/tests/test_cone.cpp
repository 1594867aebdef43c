#include "conic/cone.hpp"
#include "conic/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace conic;

namespace {

constexpr double kPi = std::numbers::pi;

DiscretizedCone flat_disc(double r_max, std::size_t radial, std::size_t angular) {
    return build_cone(ConeLink::circle(2 * kPi), 0.0, r_max, radial, angular);
}

} // namespace

TEST_CASE("construction errors") {
    auto sphere = ConeLink::round_sphere(1);
    CHECK_THROWS_AS((void)build_cone(sphere, 0.0, 4.0, 8, 8), UnsupportedError);
    CHECK_THROWS_AS((void)build_cone(ConeLink::circle(1.0), 2.0, 1.0, 8, 8), DomainError);
    CHECK_THROWS_AS((void)build_cone(ConeLink::circle(1.0), 0.0, 1.0, 0, 8), DomainError);
    CHECK_THROWS_AS((void)build_cone(ConeLink::circle(1.0), 0.0, 1.0, 8, 2), DomainError);
    CHECK_THROWS_AS((void)build_cone(ConeLink::circle(1.0), 0.0, 1.0, 8, 8, RadialSpacing::geometric), DomainError);
    CHECK_THROWS_AS(ConeLink::circle(-1.0), DomainError);
    CHECK_THROWS_AS(ConeLink::graph(1, {1.0, 1.0, 1.0}, {{0, 1, 1.0, 0.0}}), DomainError);
}

TEST_CASE("grid layout and measures") {
    auto cone = flat_disc(4.0, 16, 32);
    CHECK(cone.has_apex());
    CHECK(cone.size() == 1 + 16 * 32);
    CHECK(cone.dimension() == 2);
    CHECK(cone.radius(0) == 0.0);
    CHECK(cone.radius(cone.vertex_at(3, 5)) == doctest::Approx(1.0));
    CHECK(cone.link_node(cone.vertex_at(3, 5)) == 5);
    CHECK(cone.total_measure() == doctest::Approx(16 * kPi).epsilon(1e-12));
    CHECK(cone.exact_volume() == doctest::Approx(16 * kPi).epsilon(1e-12));
    for (double m : cone.network().measures()) CHECK(m > 0.0);

    auto geo = build_cone(ConeLink::circle(kPi), 0.5, 8.0, 32, 16, RadialSpacing::geometric);
    CHECK_FALSE(geo.has_apex());
    CHECK(geo.level_radius(0) == doctest::Approx(0.5));
    CHECK(geo.level_radius(8) == doctest::Approx(1.0));
    CHECK(geo.total_measure() == doctest::Approx(kPi * (64.0 - 0.25) / 2.0).epsilon(1e-12));
}

TEST_CASE("round sphere link") {
    auto link = ConeLink::round_sphere(2);
    auto mesh = link.mesh(0);
    CHECK(mesh.size() == 162);
    CHECK(mesh.volume() == doctest::Approx(4 * kPi).epsilon(1e-12));
    CHECK(link.dimension() == 2);
    auto cone = build_cone(link, 1.0, 3.0, 8, 0);
    CHECK(cone.dimension() == 3);
    CHECK(cone.total_measure() == doctest::Approx(4 * kPi * (27.0 - 1.0) / 3.0).epsilon(1e-12));
    // Antipodal link nodes: distance through the apex.
    double far = 0.0;
    std::size_t anti = 0;
    for (std::size_t s = 0; s < mesh.size(); ++s) {
        if (mesh.dist(0, s) > far) {
            far = mesh.dist(0, s);
            anti = s;
        }
    }
    CHECK(far == doctest::Approx(kPi));
    CHECK(cone.distance(cone.vertex_at(0, 0), cone.vertex_at(0, anti)) == doctest::Approx(2.0));
}

TEST_CASE("graph link distances and default conductance") {
    // Square of side 1 as a 1D link.
    auto link = ConeLink::graph(1, {1, 1, 1, 1}, {{0, 1, 1, 0}, {1, 2, 1, 0}, {2, 3, 1, 0}, {3, 0, 1, 0}});
    auto mesh = link.mesh(0);
    CHECK(mesh.dist(0, 2) == doctest::Approx(2.0));
    CHECK(mesh.edges[0].conductance == doctest::Approx(1.0));
    CHECK_THROWS_AS(ConeLink::graph(1, {1, 1, 1}, {{0, 1, 1, 1}}), DomainError);
}

TEST_CASE("flat cone distance is Euclidean") {
    auto cone = flat_disc(4.0, 16, 64);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::size_t> pick(0, cone.size() - 1);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t u = pick(rng);
        const std::size_t v = pick(rng);
        const std::size_t w = pick(rng);
        auto xy = [&](std::size_t a) {
            const double th = 2 * kPi * static_cast<double>(cone.link_node(a)) / 64.0;
            return std::pair(cone.radius(a) * std::cos(th), cone.radius(a) * std::sin(th));
        };
        auto [x1, y1] = xy(u);
        auto [x2, y2] = xy(v);
        CHECK(cone.distance(u, v) == doctest::Approx(std::hypot(x1 - x2, y1 - y2)).epsilon(1e-10));
        CHECK(cone.distance(u, v) == doctest::Approx(cone.distance(v, u)));
        CHECK(cone.distance(u, w) <= cone.distance(u, v) + cone.distance(v, w) + 1e-12);
    }
}

TEST_CASE("anchored ball volumes") {
    auto plane = flat_disc(4.0, 256, 256);
    auto b = plane.ball_volume(0, 1.0);
    CHECK(b.volume == doctest::Approx(kPi).epsilon(0.02));
    CHECK_FALSE(b.clipped);

    for (double L : {kPi, 3 * kPi}) {
        auto cone = build_cone(ConeLink::circle(L), 0.0, 4.0, 128, 256);
        for (double r : {0.7, 1.5, 3.0}) {
            CHECK(cone.ball_volume(0, r).volume == doctest::Approx(L * r * r / 2).epsilon(0.02));
        }
    }

    auto whole = plane.ball_volume(0, 10.0);
    CHECK(whole.clipped);
    CHECK(whole.volume == doctest::Approx(plane.total_measure()));
    CHECK_THROWS_AS((void)plane.ball_volume(0, 0.0), DomainError);
}

TEST_CASE("homothety on a geometric grid") {
    // q^8 = 2: level k+8 is the image of level k under r -> 2r.
    auto cone = build_cone(ConeLink::circle(1.5 * kPi), 0.25, 16.0, 48, 48, RadialSpacing::geometric);
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> rad(0.05, 0.4);
    std::uniform_int_distribution<std::size_t> lvl(4, 16);
    std::uniform_int_distribution<std::size_t> node(0, 47);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t k = lvl(rng);
        const std::size_t s = node(rng);
        const double r = rad(rng) * cone.level_radius(k);
        const auto b1 = cone.ball_volume(cone.vertex_at(k, s), r);
        if (b1.clipped) continue;
        const double v1 = b1.volume;
        const double v2 = cone.ball_volume(cone.vertex_at(k + 8, s), 2 * r).volume;
        CHECK(v2 == doctest::Approx(4 * v1).epsilon(1e-9));
    }
}

TEST_CASE("volume lower bound V(x,r) >= c r^n") {
    auto cone = build_cone(ConeLink::circle(kPi), 0.0, 8.0, 64, 64);
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<std::size_t> pick(0, cone.size() - 1);
    std::uniform_real_distribution<double> rad(0.5, 3.0);
    double c = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t x = pick(rng);
        const double r = rad(rng);
        c = std::min(c, cone.ball_volume(x, r).volume / (r * r));
    }
    CHECK(c > 0.2);
}

TEST_CASE("doubling scans") {
    for (double L : {kPi, 2 * kPi, 3 * kPi}) {
        auto cone = build_cone(ConeLink::circle(L), 0.0, 8.0, 96, 192);
        DoublingOptions opts;
        opts.mode = SampleMode::anchored;
        opts.samples = 20;
        opts.r_lo = 0.8;
        opts.r_hi = 3.5;
        auto scan = doubling_scan(cone, opts);
        CHECK(scan.samples.size() == 20);
        for (const auto& s : scan.samples) {
            CHECK(s.ratio == doctest::Approx(4.0).epsilon(0.05));
            CHECK(s.kind == BallKind::anchored);
            CHECK(s.proof_case == 2);
        }
    }
    auto plane = flat_disc(8.0, 96, 192);
    DoublingOptions remote;
    remote.mode = SampleMode::remote;
    remote.samples = 20;
    remote.r_lo = 0.6;
    remote.r_hi = 1.5;
    auto scan = doubling_scan(plane, remote);
    CHECK(scan.constant <= 4.0 * 1.1);
    for (const auto& s : scan.samples) {
        CHECK(s.kind == BallKind::remote);
        CHECK(s.proof_case == 1);
        CHECK(2 * s.r <= plane.truncation_distance(s.x));
    }
    auto again = doubling_scan(plane, remote);
    CHECK(again.constant == scan.constant);
    CHECK(again.worst.x == scan.worst.x);

    auto holed = build_cone(ConeLink::circle(kPi), 1.0, 4.0, 8, 8);
    DoublingOptions anchored;
    anchored.mode = SampleMode::anchored;
    CHECK_THROWS_AS((void)doubling_scan(holed, anchored), DomainError);
}

TEST_CASE("separated nets") {
    auto cone = build_cone(ConeLink::circle(2 * kPi), 0.0, 4.0, 4, 16);
    // Radial segment r = 1..4 at one link node, unit spacing.
    std::vector<std::size_t> segment;
    for (std::size_t k = 0; k < 4; ++k) segment.push_back(cone.vertex_at(k, 0));
    CHECK(separated_net(cone, segment, 1.0).size() == 4);
    CHECK(separated_net(cone, segment, 10.0).size() == 1);
    CHECK_THROWS_AS((void)separated_net(cone, std::vector<std::size_t>{}, 1.0), DomainError);

    std::vector<std::size_t> all(cone.size());
    for (std::size_t v = 0; v < all.size(); ++v) all[v] = v;
    for (double s : {0.5, 1.0, 2.0}) {
        auto net = separated_net(cone, all, s);
        for (std::size_t i = 0; i < net.size(); ++i) {
            for (std::size_t j = i + 1; j < net.size(); ++j) CHECK(cone.distance(net[i], net[j]) >= s);
        }
        for (std::size_t v : all) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t x : net) best = std::min(best, cone.distance(x, v));
            CHECK(best <= s);
        }
    }
}

TEST_CASE("annular covering") {
    auto cone = build_cone(ConeLink::circle(2 * kPi), 0.125, 8.0, 48, 32, RadialSpacing::geometric);
    auto cov = annular_covering(cone, 1.0, 2.0, 3);
    REQUIRE(cov.cells.size() == 4);
    auto v = validate_covering(cov);
    CHECK(v.ok());
    CHECK(v.q1 <= 9);
    for (const auto& [pair, k] : v.witness) CHECK(k == pair.first);
    // A*_2 = A_1 u A_2 u A_3.
    CHECK(cov.cells[2].buffer == set_union(set_union(cov.cells[1].inner, cov.cells[2].inner), cov.cells[3].inner));
    for (std::size_t v2 : cov.cells[2].inner) {
        CHECK(cone.radius(v2) >= 2.0 * (1 - 1e-12));
        CHECK(cone.radius(v2) < 4.0);
    }
    const double m1 = set_measure(*cov.space, cov.cells[1].inner);
    const double m2 = set_measure(*cov.space, cov.cells[2].inner);
    CHECK(m2 / m1 == doctest::Approx(4.0).epsilon(1e-9));

    auto g = associated_graph(cov);
    CHECK(g.size() == 4);
    CHECK(g.edge_count() == 3);
    for (std::size_t i = 0; i + 1 < 4; ++i) CHECK(g.has_edge(i, i + 1));

    CHECK_THROWS_AS((void)annular_covering(cone, 1.0, 2.0, 4), DomainError);
    CHECK_THROWS_AS((void)annular_covering(cone, 1.0, 1.0, 2), DomainError);
}

TEST_CASE("net coverings pass validation with k(i,j) = i") {
    auto cone = build_cone(ConeLink::circle(2 * kPi), 0.5, 6.0, 40, 48, RadialSpacing::geometric);
    for (double R : {1.0, 1.5}) {
        const double delta = 0.5;
        auto A = cone.radial_band(R, 2 * R);
        auto outer = cone.neighborhood(A, delta * R);
        const double h = max_edge_length(cone, outer);
        const double s = (delta * R - h) / 3.0;
        REQUIRE(s > 0.0);
        auto cov = net_covering(cone, A, s, outer);
        auto v = validate_covering(cov);
        CHECK(v.ok());
        for (const auto& [pair, k] : v.witness) CHECK(k == pair.first);
    }
}

TEST_CASE("ball classification and parameter combination") {
    CHECK(classify_ball(10.0, false, 1.0, 0.5) == BallKind::remote);
    CHECK(classify_ball(0.0, true, 1.0, 0.5) == BallKind::anchored);
    CHECK(classify_ball(10.0, false, 4.0, 0.5) == BallKind::neither);
    CHECK_THROWS_AS((void)classify_ball(1.0, false, 1.0, 0.0), DomainError);
    CHECK(combine_parameter(1, 1) == doctest::Approx(0.125));
    CHECK(combine_parameter(0.5, 0.5) == doctest::Approx(1.0 / 64));
    CHECK(combine_parameter(0.3, 1) == doctest::Approx(0.3 / 8));
    CHECK_THROWS_AS((void)combine_parameter(1.5, 1), DomainError);
    CHECK_THROWS_AS((void)combine_parameter(1, 0), DomainError);
    CHECK(proof_case(10.0, 1.0, 0.5) == 1);
    CHECK(proof_case(2.0, 3.0, 0.5) == 2);
    CHECK(proof_case(2.0, 1.0, 0.5) == 3);
}

TEST_CASE("radius field") {
    auto cone = build_cone(ConeLink::circle(kPi), 0.0, 6.0, 24, 8);
    auto field = radius_field(cone);
    for (std::size_t v = 0; v < cone.size(); ++v) {
        CHECK(field.values[v] >= 1.0);
        if (cone.radius(v) >= 2.0) CHECK(field.values[v] == cone.radius(v));
    }
    CHECK(std::isfinite(field.equivalence));
    CHECK(field.equivalence < 2.0);
    CHECK(radius_function(2.0) == doctest::Approx(2.0));
    CHECK(radius_function(0.0) == doctest::Approx(1.0));
}
