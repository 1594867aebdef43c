#pragma once

// Heat kernels, Green's functions, Gaussian-bound fits, Poincare constants of
// domain pairs and the indicial roots of conical Laplacians.

#include "conic/cone.hpp"
#include "conic/covering.hpp"
#include "conic/network.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace conic {

/// h(t, source, .) as a density with respect to the vertex measure.
struct HeatKernelSample {
    double t = 0.0;
    std::size_t source = 0;
    std::vector<double> values;
};

struct HeatOptions {
    std::size_t initial_steps = 8;   ///< steps per output segment before refinement
    std::size_t max_refinements = 6;
    double rel_tol = 5e-3;           ///< accepted change between successive halvings
    double probe_floor = 1e-2;       ///< probe nodes carry at least this fraction of the max
};

struct HeatKernelRun {
    std::vector<HeatKernelSample> samples;
    std::size_t steps_per_segment = 0;
    double achieved_change = 0.0;
    bool converged = false;
};

/// Solves (d/dt + M^{-1} K) h = 0 from h(0) = e_x / mu_x with BDF2 (one
/// backward-Euler step per output segment), halving the step until
/// successive solutions at the probe nodes differ by less than rel_tol.
/// Samples come back in ascending time order.  Leaks in the network act as
/// a Robin boundary; without them the boundary is free.
[[nodiscard]] HeatKernelRun heat_kernel(const ConductanceNetwork& net, std::size_t source,
                                        std::span<const double> times, const HeatOptions& opts = {});
[[nodiscard]] HeatKernelRun heat_kernel(const DiscretizedCone& cone, std::size_t source,
                                        std::span<const double> times, const HeatOptions& opts = {});

/// Leak (n-2)/r_max per unit outer face: the Robin condition that the
/// fundamental solution d^{2-n} satisfies to leading order.
[[nodiscard]] ConductanceNetwork with_outer_robin(const DiscretizedCone& cone);

struct GaussianWitness {
    double t = 0.0;
    std::size_t x = 0;
    std::size_t y = 0;
    double distance = 0.0;
    double value = 0.0;
    double normalized = 0.0;  ///< h V(x, sqrt t)
};

struct GaussianFit {
    double c1 = 0.0;
    double C1 = 0.0;
    double c2 = 0.0;
    double C2 = 0.0;
    bool pass = false;
    std::string reason;
    GaussianWitness lower_witness;  ///< sample attaining c1 (or the first violation)
    GaussianWitness upper_witness;  ///< sample attaining C2
    std::size_t samples_used = 0;
};

struct GaussianFitOptions {
    double inner = 1.0;           ///< sandwich sqrt(t) inner <= d
    double outer = 4.0;           ///< d <= sqrt(t) outer
    double boundary_factor = 2.0; ///< drop nodes within boundary_factor sqrt(t) of the truncation
    double max_spread = 1e3;      ///< C2 / c1 above this fails the fit
};

/// Log-linear regression of log(h V(x, sqrt t)) against d^2/t over the
/// sandwich region gives the exponent b = c2 = C1; C2 and c1 are then the
/// extreme prefactors, so the two-sided bound holds on every admissible
/// sample once the data are positive and finite.
[[nodiscard]] GaussianFit gaussian_fit(std::span<const HeatKernelSample> samples, const DiscretizedCone& cone,
                                       const GaussianFitOptions& opts = {});

struct GreenOptions {
    double inner_cells = 3.0;  ///< interior nodes satisfy d >= inner_cells * h(source)
    double outer_ratio = 0.25; ///< and d <= outer_ratio * truncation distance of the source to r_max
};

struct GreenResult {
    std::vector<double> values;
    double constant = 0.0;      ///< max over interior y of G d^{n-2}
    double min_scaled = 0.0;    ///< min over interior y of G d^{n-2}
    std::size_t witness = 0;
    std::vector<std::size_t> interior;
    bool positive = false;
};

/// Solves K G = e_x with the outer Robin leak (inner hole, if any, free).
/// Throws DomainError for cones of dimension <= 2.
[[nodiscard]] GreenResult greens_function(const DiscretizedCone& cone, std::size_t source,
                                          const GreenOptions& opts = {});

struct IntegratedKernel {
    std::vector<double> values;
    double final_time = 0.0;
    std::size_t steps = 0;
};

/// int_0^T h dt by trapezoidal Crank-Nicolson with geometrically growing
/// steps, on the Robin network, stopping once a block adds less than tol.
[[nodiscard]] IntegratedKernel time_integrated_kernel(const DiscretizedCone& cone, std::size_t source,
                                                      double tol = 1e-5);

struct PairOptions {
    std::size_t dense_limit = 1500;  ///< larger variance sets use subspace iteration
    double tol = 1e-10;
};

/// sup over f on `energy_set` of sum_{var_set} mu |f - f_mean|^2 / E(f), the
/// mean taken over `mean_set` (mean_set within var_set within energy_set).
/// Reduces the energy to var_set by a Schur complement.  +inf when var_set
/// meets two components of the energy set.
[[nodiscard]] double pair_constant(const ConductanceNetwork& net, std::span<const std::size_t> mean_set,
                                   std::span<const std::size_t> var_set, std::span<const std::size_t> energy_set,
                                   const PairOptions& opts = {});

/// Lambda(U, U'): pair_constant with mean and variance over U.
[[nodiscard]] double poincare_constant(const ConductanceNetwork& net, std::span<const std::size_t> U,
                                       std::span<const std::size_t> U_prime, const PairOptions& opts = {});

/// Max over cells of Lambda-type constants on (U_i; U_i, U*_i) and
/// (U_i; U*_i, U#_i): the continuous constant S_c of a covering whose atoms
/// are the network nodes.
[[nodiscard]] double cell_constant(const ConductanceNetwork& net, const GoodCovering& cov, unsigned workers = 1,
                                   const PairOptions& opts = {});

struct PoincareSample {
    std::size_t x = 0;
    double r = 0.0;
    double scaled = 0.0;  ///< Lambda(B(x, delta r), B(x, r)) / r^2
    BallKind kind = BallKind::neither;
};

struct PoincareScan {
    double constant = 0.0;
    PoincareSample worst;
    std::vector<PoincareSample> samples;
    std::size_t clipped_excluded = 0;
};

struct PoincareScanOptions {
    double epsilon = 0.5;
    double delta = 0.5;
    SampleMode mode = SampleMode::mixed;
    std::size_t samples = 20;
    double r_lo = 1.0;
    double r_hi = 4.0;
    std::uint64_t seed = 0;
    std::size_t max_attempts = 100000;
};

[[nodiscard]] PoincareScan scale_invariant_poincare_scan(const DiscretizedCone& cone,
                                                         const PoincareScanOptions& opts);

struct IndicialRoots {
    double lambda = 0.0;
    double plus = 0.0;
    double minus = 0.0;
};

struct IndicialSpectrum {
    int m = 2;
    std::vector<double> link_eigenvalues;
    std::vector<IndicialRoots> roots;
    std::vector<double> exceptional_weights;
    /// Fredholm gap when -delta avoids the weights: (-mu_1^+, 2-2m).
    std::optional<std::pair<double, double>> gap_negated;
    /// Same gap when delta itself avoids the weights: (2m-2, mu_1^+).
    std::optional<std::pair<double, double>> gap_direct;
};

/// mu^{+-} = (m-1) +- sqrt((m-1)^2 + lambda), the roots of
/// mu^2 - (2m-2) mu - lambda = 0.  mu_1^+ uses the smallest positive lambda.
[[nodiscard]] IndicialSpectrum indicial_spectrum(int m, std::span<const double> link_eigenvalues);

} // namespace conic
