#include "conic/errors.hpp"
#include "conic/graph.hpp"
#include "conic/spectral.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

using namespace conic;

namespace {

constexpr double kPi = std::numbers::pi;

// Unit interval cut into n cells: node measures 1/n, conductances n.
ConductanceNetwork unit_path(std::size_t n) {
    ConductanceNetwork net(std::vector<double>(n, 1.0 / static_cast<double>(n)));
    for (std::size_t i = 0; i + 1 < n; ++i) net.add_conductor(i, i + 1, static_cast<double>(n), 1.0 / static_cast<double>(n));
    return net;
}

std::vector<std::size_t> iota(std::size_t lo, std::size_t hi) {
    std::vector<std::size_t> v(hi - lo);
    std::iota(v.begin(), v.end(), lo);
    return v;
}

double weighted_sum(const ConductanceNetwork& net, const std::vector<double>& f) {
    double s = 0.0;
    for (std::size_t a = 0; a < net.size(); ++a) s += net.measure(a) * f[a];
    return s;
}

} // namespace

TEST_CASE("indicial roots") {
    const double eig[] = {5.0, 0.0, 5.0};
    auto spec = indicial_spectrum(3, eig);
    REQUIRE(spec.roots.size() == 3);
    CHECK(spec.roots[0].lambda == 0.0);
    CHECK(spec.roots[0].plus == doctest::Approx(4.0));
    CHECK(spec.roots[0].minus == doctest::Approx(0.0));
    CHECK(spec.roots[1].plus == doctest::Approx(5.0));
    CHECK(spec.roots[1].minus == doctest::Approx(-1.0));
    CHECK(spec.exceptional_weights == std::vector<double>{-1.0, 0.0, 4.0, 5.0});
    REQUIRE(spec.gap_negated);
    CHECK(spec.gap_negated->first == doctest::Approx(-5.0));
    CHECK(spec.gap_negated->second == doctest::Approx(-4.0));
    CHECK(spec.gap_direct->first == doctest::Approx(4.0));
    CHECK(spec.gap_direct->second == doctest::Approx(5.0));

    const double three[] = {3.0};
    auto two = indicial_spectrum(2, three);
    CHECK(two.roots[0].plus == doctest::Approx(3.0));
    CHECK(two.roots[0].minus == doctest::Approx(-1.0));

    const double zero[] = {0.0};
    CHECK_FALSE(indicial_spectrum(2, zero).gap_direct);

    const double bad[] = {-1.0};
    CHECK_THROWS_AS((void)indicial_spectrum(3, bad), DomainError);
    CHECK_THROWS_AS((void)indicial_spectrum(1, three), DomainError);
}

TEST_CASE("indicial identities on random spectra") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 50.0);
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 2 + trial % 4;
        std::vector<double> eig(6);
        for (auto& l : eig) l = u(rng);
        auto spec = indicial_spectrum(m, eig);
        for (const auto& r : spec.roots) {
            CHECK(r.plus + r.minus == doctest::Approx(2.0 * (m - 1)).epsilon(1e-14));
            CHECK(r.plus * r.minus == doctest::Approx(-r.lambda).epsilon(1e-12));
            CHECK(r.plus >= 2.0 * (m - 1));
        }
        CHECK(std::is_sorted(spec.exceptional_weights.begin(), spec.exceptional_weights.end()));
        CHECK(std::adjacent_find(spec.exceptional_weights.begin(), spec.exceptional_weights.end()) ==
              spec.exceptional_weights.end());
    }
}

TEST_CASE("unit interval Poincare constant tends to 1/pi^2") {
    auto net = unit_path(200);
    auto all = iota(0, 200);
    const double dense = poincare_constant(net, all, all);
    // Neumann eigenvalue of the path: (2n sin(pi / 2n))^2.
    const double exact = 1.0 / std::pow(400.0 * std::sin(kPi / 400.0), 2);
    CHECK(dense == doctest::Approx(exact).epsilon(1e-9));
    CHECK(dense == doctest::Approx(1.0 / (kPi * kPi)).epsilon(1e-4));

    PairOptions iterative;
    iterative.dense_limit = 10;
    CHECK(poincare_constant(net, all, all, iterative) == doctest::Approx(dense).epsilon(1e-8));
}

TEST_CASE("pair constant structure") {
    auto net = unit_path(60);
    auto inner = iota(20, 40);
    auto mid = iota(10, 50);
    auto all = iota(0, 60);
    // Monotone decreasing in the energy set.
    const double narrow = poincare_constant(net, inner, inner);
    const double wide = poincare_constant(net, inner, mid);
    const double widest = poincare_constant(net, inner, all);
    CHECK(wide <= narrow * (1 + 1e-12));
    CHECK(widest <= wide * (1 + 1e-12));
    // Schur path (variance smaller than energy) agrees with the iterative path.
    PairOptions iterative;
    iterative.dense_limit = 4;
    CHECK(pair_constant(net, inner, mid, all, iterative) == doctest::Approx(pair_constant(net, inner, mid, all)).epsilon(1e-8));
    // A single node has no variance.
    const std::size_t one[] = {5};
    CHECK(poincare_constant(net, one, all) == 0.0);

    // Two components inside the energy set.
    ConductanceNetwork split({1.0, 1.0, 1.0, 1.0});
    split.add_conductor(0, 1, 1.0, 1.0);
    split.add_conductor(2, 3, 1.0, 1.0);
    auto four = iota(0, 4);
    CHECK(std::isinf(poincare_constant(split, four, four)));

    CHECK_THROWS_AS((void)pair_constant(net, mid, inner, all), DomainError);
    CHECK_THROWS_AS((void)pair_constant(net, {}, inner, all), DomainError);
}

TEST_CASE("Poincare constant scales by a^2 under homothety") {
    // 8 rings per octave, so r -> 2r maps the grid onto itself.
    auto cone = build_cone(ConeLink::circle(2 * kPi), 0.25, 16.0, 48, 32, RadialSpacing::geometric);
    auto inner1 = cone.radial_band(1.0, 2.0);
    auto outer1 = cone.radial_band(0.5, 4.0);
    auto inner2 = cone.radial_band(2.0, 4.0);
    auto outer2 = cone.radial_band(1.0, 8.0);
    REQUIRE(inner1.size() == inner2.size());
    const double a = poincare_constant(cone.network(), inner1, outer1);
    const double b = poincare_constant(cone.network(), inner2, outer2);
    CHECK(b == doctest::Approx(4.0 * a).epsilon(1e-8));
}

TEST_CASE("scale-invariant Poincare scan") {
    auto cone = build_cone(ConeLink::circle(2 * kPi), 0.0, 8.0, 32, 32);
    PoincareScanOptions opts;
    opts.samples = 6;
    opts.r_lo = 1.0;
    opts.r_hi = 3.0;
    auto scan = scale_invariant_poincare_scan(cone, opts);
    CHECK(scan.samples.size() == 6);
    CHECK(std::isfinite(scan.constant));
    CHECK(scan.constant > 0.0);
    auto again = scale_invariant_poincare_scan(cone, opts);
    CHECK(again.constant == scan.constant);
    opts.delta = 0.0;
    CHECK_THROWS_AS((void)scale_invariant_poincare_scan(cone, opts), DomainError);
}

TEST_CASE("heat kernel basics") {
    auto cone = build_cone(ConeLink::circle(2 * kPi), 0.0, 4.0, 24, 32);
    const std::size_t x = cone.vertex_at(6, 3);
    const std::size_t y = cone.vertex_at(10, 12);
    const double times[] = {0.5, 0.1, 0.5};
    auto run = heat_kernel(cone, x, times);
    CHECK(run.converged);
    REQUIRE(run.samples.size() == 2);
    CHECK(run.samples[0].t == 0.1);
    CHECK(run.samples[1].t == 0.5);
    for (const auto& s : run.samples) {
        // Free boundary: heat is conserved.
        CHECK(weighted_sum(cone.network(), s.values) == doctest::Approx(1.0).epsilon(1e-10));
        for (double v : s.values) CHECK(v > 0.0);
    }
    // Symmetry h(t, x, y) = h(t, y, x).
    const double t1[] = {0.3};
    HeatOptions fixed;
    fixed.max_refinements = 0;
    fixed.initial_steps = 32;
    auto hx = heat_kernel(cone, x, t1, fixed);
    auto hy = heat_kernel(cone, y, t1, fixed);
    CHECK(hx.samples[0].values[y] == doctest::Approx(hy.samples[0].values[x]).epsilon(1e-10));

    const double none[] = {-1.0};
    CHECK_THROWS_AS((void)heat_kernel(cone, x, none), DomainError);
    CHECK_THROWS_AS((void)heat_kernel(cone, cone.size(), t1), DomainError);
}

TEST_CASE("heat kernel starts at the source") {
    auto net = unit_path(50);
    const double times[] = {1e-7};
    auto run = heat_kernel(net, 25, times);
    CHECK(run.samples[0].values[25] == doctest::Approx(50.0).epsilon(1e-3));
}

TEST_CASE("Gaussian fit on the flat plane") {
    auto cone = build_cone(ConeLink::circle(2 * kPi), 0.0, 5.0, 64, 96);
    const double times[] = {0.2, 0.4};
    auto run = heat_kernel(cone, 0, times);
    REQUIRE(run.converged);
    auto fit = gaussian_fit(run.samples, cone);
    CHECK(fit.pass);
    CHECK(fit.c2 == doctest::Approx(0.25).epsilon(0.1));
    CHECK(fit.C1 == fit.c2);
    CHECK(fit.c1 <= fit.C2);
    CHECK(fit.samples_used > 10);
    // V(o, sqrt t) = pi t, so the prefactors sit near 1/4.
    CHECK(fit.C2 == doctest::Approx(0.25).epsilon(0.1));

    auto broken = run.samples;
    broken[0].values[fit.upper_witness.y] = -1.0;
    auto bad = gaussian_fit(broken, cone);
    CHECK_FALSE(bad.pass);
    CHECK(bad.reason == "nonpositive or non-finite kernel value");

    // Growing in d fails the decay test.
    auto growing = run.samples;
    for (auto& s : growing) {
        for (std::size_t v = 0; v < cone.size(); ++v) s.values[v] = 1.0 + cone.radius(v);
    }
    CHECK_FALSE(gaussian_fit(growing, cone).pass);
}

TEST_CASE("Green's function on a 3D cone") {
    CHECK_THROWS_AS((void)greens_function(build_cone(ConeLink::circle(2 * kPi), 0.0, 4.0, 8, 8), 0), DomainError);

    auto cone = build_cone(ConeLink::round_sphere(2), 0.1, 12.0, 36, 0, RadialSpacing::geometric);
    const std::size_t x = cone.nearest_vertex(1.0, 0);
    auto g = greens_function(cone, x);
    CHECK(g.positive);
    CHECK_FALSE(g.interior.empty());
    CHECK(g.min_scaled > 0.0);
    // Near 1 / (4 pi) on the interior window.
    CHECK(g.constant * 4 * kPi == doctest::Approx(1.0).epsilon(0.2));
    CHECK(g.min_scaled * 4 * kPi == doctest::Approx(1.0).epsilon(0.2));

    auto integrated = time_integrated_kernel(cone, x);
    for (std::size_t y : g.interior) {
        CHECK(integrated.values[y] == doctest::Approx(g.values[y]).epsilon(1e-6));
    }
    CHECK(integrated.final_time > 100.0);
}

TEST_CASE("cell constants are independent of the worker count") {
    auto cone = build_cone(ConeLink::circle(2 * kPi), 0.25, 8.0, 40, 48, RadialSpacing::geometric);
    auto A = cone.radial_band(1.0, 2.0);
    auto outer = cone.neighborhood(A, 0.5);
    const double s = (0.5 - max_edge_length(cone, outer)) / 3.0;
    auto cov = net_covering(cone, A, s, outer);
    const double one = cell_constant(cone.network(), cov, 1);
    CHECK(one > 0.0);
    CHECK(cell_constant(cone.network(), cov, 3) == one);

    // Patching bound dominates the directly computed constant.
    auto v = validate_covering(cov);
    REQUIRE(v.ok());
    PatchingInput in;
    in.continuous_constant = one;
    in.discrete_constant = 1.0 / spectral_gap(associated_graph(cov));
    in.q1 = static_cast<int>(v.q1);
    in.q2 = v.q2;
    CHECK(poincare_constant(cone.network(), A, outer) <= patch_neumann(in));

    GoodCovering foreign = cov;
    foreign.space = std::make_shared<AtomSpace>(std::vector<double>{1.0});
    CHECK_THROWS_AS((void)cell_constant(cone.network(), foreign, 1), DomainError);
}
