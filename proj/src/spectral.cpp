#include "conic/spectral.hpp"

#include "conic/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

namespace conic {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;
using Ldlt = Eigen::SimplicialLDLT<SpMat>;

constexpr double kInf = std::numeric_limits<double>::infinity();

SpMat mass_matrix(const ConductanceNetwork& net) {
    const auto n = static_cast<Eigen::Index>(net.size());
    SpMat m(n, n);
    std::vector<Eigen::Triplet<double>> trips;
    for (Eigen::Index a = 0; a < n; ++a) trips.emplace_back(a, a, net.measure(static_cast<std::size_t>(a)));
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
}

void factor(Ldlt& solver, const SpMat& a) {
    solver.compute(a);
    if (solver.info() != Eigen::Success) throw UnsupportedError("sparse factorization failed");
}

// Direct LDLT for small systems; preconditioned conjugate gradients above,
// where fill-in of three-dimensional grids makes factoring slow.
class SpdSolver {
public:
    static constexpr Eigen::Index kDirectLimit = 10000;

    SpdSolver() = default;
    SpdSolver(const SpdSolver&) = delete;
    SpdSolver& operator=(const SpdSolver&) = delete;

    void compute(SpMat a) {
        direct_ = a.rows() <= kDirectLimit;
        if (direct_) {
            factor(ldlt_, a);
        } else {
            // The iterative solver keeps a reference to its matrix.
            matrix_ = std::move(a);
            cg_.setTolerance(1e-11);
            cg_.setMaxIterations(20000);
            cg_.compute(matrix_);
            if (cg_.info() != Eigen::Success) throw UnsupportedError("preconditioner setup failed");
        }
    }

    [[nodiscard]] Vec solve(const Vec& b) const {
        if (direct_) return ldlt_.solve(b);
        return check(cg_.solve(b));
    }

    /// Warm-started variant; the direct path ignores the guess.
    [[nodiscard]] Vec solve(const Vec& b, const Vec& guess) const {
        if (direct_) return ldlt_.solve(b);
        return check(cg_.solveWithGuess(b, guess));
    }

private:
    Vec check(Vec x) const {
        if (cg_.info() != Eigen::Success) throw UnsupportedError("conjugate gradients did not converge");
        return x;
    }

    bool direct_ = true;
    Ldlt ldlt_;
    SpMat matrix_;
    Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper, Eigen::IncompleteCholesky<double>> cg_;
};

Vec point_density(const ConductanceNetwork& net, std::size_t source) {
    Vec h = Vec::Zero(static_cast<Eigen::Index>(net.size()));
    h[static_cast<Eigen::Index>(source)] = 1.0 / net.measure(source);
    return h;
}

// One pass over the output times with `steps` equal steps per segment: a
// backward-Euler step opens each segment, BDF2 continues it.  Both are
// L-stable, so the stiff modes of small cells near the apex are damped.
std::vector<Vec> march(const SpMat& k, const Vec& mass, std::size_t source_index, const std::vector<double>& times,
                       std::size_t steps, const ConductanceNetwork& net) {
    std::vector<Vec> out;
    Vec h = point_density(net, source_index);
    double t = 0.0;
    SpdSolver euler;
    SpdSolver bdf;
    const SpMat m = mass_matrix(net);
    for (double target : times) {
        const double dt = (target - t) / static_cast<double>(steps);
        euler.compute(m + dt * k);
        bdf.compute(1.5 * m + dt * k);
        Vec older = h;
        const Vec rhs = mass.cwiseProduct(h);
        h = euler.solve(rhs);
        for (std::size_t done = 1; done < steps; ++done) {
            Vec next = bdf.solve(mass.cwiseProduct(2.0 * h - 0.5 * older));
            older = std::move(h);
            h = std::move(next);
        }
        t = target;
        out.push_back(h);
    }
    return out;
}

} // namespace

HeatKernelRun heat_kernel(const ConductanceNetwork& net, std::size_t source, std::span<const double> times,
                          const HeatOptions& opts) {
    if (source >= net.size()) throw DomainError("heat source out of range");
    if (times.empty()) throw DomainError("heat kernel needs at least one time");
    std::vector<double> ts(times.begin(), times.end());
    for (double t : ts) {
        if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("heat kernel times must be positive");
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    if (opts.initial_steps < 2) throw DomainError("heat kernel needs at least two steps per segment");

    const SpMat k = net.stiffness(true);
    Vec mass(static_cast<Eigen::Index>(net.size()));
    for (std::size_t a = 0; a < net.size(); ++a) mass[static_cast<Eigen::Index>(a)] = net.measure(a);

    std::size_t steps = opts.initial_steps;
    auto prev = march(k, mass, source, ts, steps, net);
    HeatKernelRun run;
    for (std::size_t r = 0; r < opts.max_refinements; ++r) {
        steps *= 2;
        auto cur = march(k, mass, source, ts, steps, net);
        double change = 0.0;
        for (std::size_t i = 0; i < cur.size(); ++i) {
            const double floor = opts.probe_floor * cur[i].cwiseAbs().maxCoeff();
            for (Eigen::Index a = 0; a < cur[i].size(); ++a) {
                if (std::abs(cur[i][a]) >= floor) {
                    change = std::max(change, std::abs(cur[i][a] - prev[i][a]) / std::abs(cur[i][a]));
                }
            }
        }
        prev = std::move(cur);
        run.achieved_change = change;
        run.steps_per_segment = steps;
        if (change < opts.rel_tol) {
            run.converged = true;
            break;
        }
    }
    for (std::size_t i = 0; i < ts.size(); ++i) {
        run.samples.push_back({ts[i], source, std::vector<double>(prev[i].data(), prev[i].data() + prev[i].size())});
    }
    return run;
}

HeatKernelRun heat_kernel(const DiscretizedCone& cone, std::size_t source, std::span<const double> times,
                          const HeatOptions& opts) {
    return heat_kernel(cone.network(), source, times, opts);
}

ConductanceNetwork with_outer_robin(const DiscretizedCone& cone) {
    ConductanceNetwork net = cone.network();
    const std::size_t n = cone.dimension();
    if (n <= 2) return net;
    const double r_max = cone.spec().r_max;
    const double face = std::pow(r_max, static_cast<double>(n) - 1.0);
    const auto& mesh = cone.link_mesh();
    const std::size_t last = cone.level_count() - 1;
    for (std::size_t s = 0; s < mesh.size(); ++s) {
        net.add_leak(cone.vertex_at(last, s), mesh.measures[s] * face * (static_cast<double>(n) - 2.0) / r_max);
    }
    return net;
}

GaussianFit gaussian_fit(std::span<const HeatKernelSample> samples, const DiscretizedCone& cone,
                         const GaussianFitOptions& opts) {
    struct Point {
        GaussianWitness w;
        double s;
    };
    std::vector<Point> points;
    GaussianFit fit;
    bool bad_value = false;
    for (const auto& sample : samples) {
        if (sample.values.size() != cone.size()) throw DomainError("heat sample does not match the cone");
        const double root = std::sqrt(sample.t);
        const std::size_t x = sample.source;
        if (cone.truncation_distance(x) < opts.boundary_factor * root) continue;
        const double vol = cone.ball_volume(x, root).volume;
        for (std::size_t y = 0; y < cone.size(); ++y) {
            if (y == x) continue;
            const double d = cone.distance(x, y);
            if (d < opts.inner * root || d > opts.outer * root) continue;
            if (cone.truncation_distance(y) < opts.boundary_factor * root) continue;
            const double h = sample.values[y];
            GaussianWitness w{sample.t, x, y, d, h, h * vol};
            if (!(h > 0.0) || !std::isfinite(h)) {
                if (!bad_value) {
                    fit.lower_witness = w;
                    fit.reason = "nonpositive or non-finite kernel value";
                }
                bad_value = true;
                continue;
            }
            points.push_back({w, d * d / sample.t});
        }
    }
    if (points.empty() && !bad_value) throw DomainError("no admissible Gaussian-fit samples");
    fit.samples_used = points.size();
    if (points.size() < 2) {
        fit.pass = false;
        if (fit.reason.empty()) fit.reason = "too few positive samples";
        return fit;
    }

    double ms = 0.0;
    double ml = 0.0;
    for (const auto& p : points) {
        ms += p.s;
        ml += std::log(p.w.normalized);
    }
    ms /= static_cast<double>(points.size());
    ml /= static_cast<double>(points.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (const auto& p : points) {
        sxy += (p.s - ms) * (std::log(p.w.normalized) - ml);
        sxx += (p.s - ms) * (p.s - ms);
    }
    const double b = sxx > 0.0 ? -sxy / sxx : 0.0;
    fit.c2 = b;
    fit.C1 = b;
    fit.C2 = 0.0;
    fit.c1 = kInf;
    for (const auto& p : points) {
        const double pref = p.w.normalized * std::exp(b * p.s);
        if (pref > fit.C2) {
            fit.C2 = pref;
            fit.upper_witness = p.w;
        }
        if (pref < fit.c1) {
            fit.c1 = pref;
            if (!bad_value) fit.lower_witness = p.w;
        }
    }

    bool ok = !bad_value;
    if (ok && !(b > 0.0)) {
        ok = false;
        fit.reason = "kernel does not decay in d^2/t";
    }
    if (ok && !(std::isfinite(fit.C2) && fit.c1 > 0.0 && std::isfinite(fit.c1))) {
        ok = false;
        fit.reason = "non-finite constants";
    }
    if (ok && fit.C2 / fit.c1 > opts.max_spread) {
        ok = false;
        fit.reason = "prefactor spread exceeds the limit";
    }
    if (ok) {
        constexpr double slack = 1e-12;
        for (const auto& p : points) {
            const double q = p.w.normalized;
            if (q < fit.c1 * std::exp(-fit.C1 * p.s) * (1 - slack) || q > fit.C2 * std::exp(-fit.c2 * p.s) * (1 + slack)) {
                ok = false;
                fit.reason = "pointwise bound violated";
                fit.lower_witness = p.w;
                break;
            }
        }
    }
    fit.pass = ok;
    return fit;
}

GreenResult greens_function(const DiscretizedCone& cone, std::size_t source, const GreenOptions& opts) {
    const std::size_t n = cone.dimension();
    if (n <= 2) throw DomainError("the Green bound needs cone dimension n > 2");
    if (source >= cone.size()) throw DomainError("Green source out of range");
    const ConductanceNetwork net = with_outer_robin(cone);
    SpdSolver solver;
    solver.compute(net.stiffness(true));
    Vec rhs = Vec::Zero(static_cast<Eigen::Index>(net.size()));
    rhs[static_cast<Eigen::Index>(source)] = 1.0;
    const Vec g = solver.solve(rhs);

    GreenResult out;
    out.values.assign(g.data(), g.data() + g.size());
    out.positive = (g.array() > 0.0).all();
    const std::size_t src[] = {source};
    const double h = max_edge_length(cone, src);
    const double d_lo = opts.inner_cells * h;
    const double d_hi = opts.outer_ratio * (cone.spec().r_max - cone.radius(source));
    out.constant = 0.0;
    out.min_scaled = kInf;
    const double power = static_cast<double>(n) - 2.0;
    for (std::size_t y = 0; y < cone.size(); ++y) {
        const double d = cone.distance(source, y);
        if (y == source || d < d_lo || d > d_hi) continue;
        out.interior.push_back(y);
        const double scaled = out.values[y] * std::pow(d, power);
        if (scaled > out.constant) {
            out.constant = scaled;
            out.witness = y;
        }
        out.min_scaled = std::min(out.min_scaled, scaled);
    }
    return out;
}

IntegratedKernel time_integrated_kernel(const DiscretizedCone& cone, std::size_t source, double tol) {
    if (source >= cone.size()) throw DomainError("source out of range");
    if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
    const ConductanceNetwork net = with_outer_robin(cone);
    if (!net.has_leaks()) throw DomainError("time integration needs a leaking boundary (n > 2)");
    const SpMat k = net.stiffness(true);
    const SpMat m = mass_matrix(net);
    Vec mass(static_cast<Eigen::Index>(net.size()));
    for (std::size_t a = 0; a < net.size(); ++a) mass[static_cast<Eigen::Index>(a)] = net.measure(a);

    const std::size_t src[] = {source};
    const double h_src = max_edge_length(cone, src);
    double dt = 0.05 * h_src * h_src;
    constexpr std::size_t block = 8;
    constexpr std::size_t max_blocks = 80;

    Vec h = point_density(net, source);
    Vec integral = Vec::Zero(h.size());
    IntegratedKernel out;
    double t = 0.0;
    SpdSolver solver;
    for (std::size_t b = 0; b < max_blocks; ++b) {
        solver.compute(m + (dt / 2.0) * k);
        Vec added = Vec::Zero(h.size());
        std::size_t done = 0;
        if (b == 0) {
            for (int half = 0; half < 4; ++half) {
                const Vec rhs = mass.cwiseProduct(h);
                h = solver.solve(rhs, h);
                added += (dt / 2.0) * h;
            }
            done = 2;
        }
        for (; done < block; ++done) {
            Vec next = solver.solve(mass.cwiseProduct(h) - (dt / 2.0) * (k * h), h);
            added += (dt / 2.0) * (h + next);
            h = std::move(next);
        }
        integral += added;
        t += dt * static_cast<double>(block);
        out.steps += block;
        double rel = 0.0;
        for (Eigen::Index a = 0; a < h.size(); ++a) {
            if (integral[a] > 0.0) rel = std::max(rel, added[a] / integral[a]);
        }
        if (b > 0 && rel < tol) break;
        dt *= 2.0;
    }
    out.final_time = t;
    out.values.assign(integral.data(), integral.data() + integral.size());
    return out;
}

namespace {

std::vector<std::size_t> sorted_unique(std::span<const std::size_t> s) {
    std::vector<std::size_t> v(s.begin(), s.end());
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// Variance form W f = D (f - abar) - a sum_v D_v (f_v - abar), abar = a.f,
// restricted to local variance indices.
struct VarianceForm {
    Vec d;  ///< measures on the variance set
    Vec a;  ///< mean weights on the variance set, summing to 1

    [[nodiscard]] Vec apply(const Vec& f) const {
        const double mean = a.dot(f);
        const Vec centred = f.array() - mean;
        const Vec df = d.cwiseProduct(centred);
        return df - a * df.sum();
    }

    [[nodiscard]] Eigen::MatrixXd dense() const {
        Eigen::MatrixXd w = d.asDiagonal();
        const Vec d1 = d;
        w -= d1 * a.transpose();
        w -= a * d1.transpose();
        w += d.sum() * a * a.transpose();
        return w;
    }
};

double largest_generalized(const Eigen::MatrixXd& w, const Eigen::MatrixXd& e) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(w, e, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw UnsupportedError("generalized eigensolver failed");
    return std::max(0.0, es.eigenvalues().maxCoeff());
}

} // namespace

double pair_constant(const ConductanceNetwork& net, std::span<const std::size_t> mean_set,
                     std::span<const std::size_t> var_set, std::span<const std::size_t> energy_set,
                     const PairOptions& opts) {
    const auto mean = sorted_unique(mean_set);
    const auto var = sorted_unique(var_set);
    const auto energy = sorted_unique(energy_set);
    if (mean.empty()) throw DomainError("pair constant needs a nonempty mean set");
    for (std::size_t a : energy) {
        if (a >= net.size()) throw DomainError("node out of range");
    }
    if (!std::includes(var.begin(), var.end(), mean.begin(), mean.end()) ||
        !std::includes(energy.begin(), energy.end(), var.begin(), var.end())) {
        throw DomainError("pair constant needs mean set within variance set within energy set");
    }
    if (var.size() == 1) return 0.0;

    const auto label = net.components(energy);
    const long comp = label[var.front()];
    for (std::size_t a : var) {
        if (label[a] != comp) return kInf;
    }

    // Local numbering: variance nodes first, then the rest of the component.
    std::vector<long> local(net.size(), -1);
    std::vector<std::size_t> nodes;
    for (std::size_t a : var) {
        local[a] = static_cast<long>(nodes.size());
        nodes.push_back(a);
    }
    const std::size_t nv = nodes.size();
    for (std::size_t a : energy) {
        if (label[a] == comp && local[a] < 0) {
            local[a] = static_cast<long>(nodes.size());
            nodes.push_back(a);
        }
    }
    const auto n = static_cast<Eigen::Index>(nodes.size());
    std::vector<Eigen::Triplet<double>> trips;
    for (const auto& c : net.conductors()) {
        const long i = local[c.a];
        const long j = local[c.b];
        if (i < 0 || j < 0) continue;
        trips.emplace_back(i, i, c.conductance);
        trips.emplace_back(j, j, c.conductance);
        trips.emplace_back(i, j, -c.conductance);
        trips.emplace_back(j, i, -c.conductance);
    }
    SpMat e(n, n);
    e.setFromTriplets(trips.begin(), trips.end());

    VarianceForm form;
    form.d.resize(static_cast<Eigen::Index>(nv));
    form.a = Vec::Zero(static_cast<Eigen::Index>(nv));
    double mean_measure = 0.0;
    for (std::size_t a : mean) mean_measure += net.measure(a);
    for (std::size_t i = 0; i < nv; ++i) form.d[static_cast<Eigen::Index>(i)] = net.measure(nodes[i]);
    for (std::size_t a : mean) form.a[local[a]] = net.measure(a) / mean_measure;

    const auto nvi = static_cast<Eigen::Index>(nv);
    if (nv <= opts.dense_limit) {
        // Schur complement of the energy onto the variance nodes.
        Eigen::MatrixXd s = Eigen::MatrixXd(e.topLeftCorner(nvi, nvi));
        const Eigen::Index nb = n - nvi;
        if (nb > 0) {
            SpMat ebb = e.bottomRightCorner(nb, nb);
            Ldlt solver;
            factor(solver, ebb);
            const Eigen::MatrixXd ebv = Eigen::MatrixXd(e.bottomLeftCorner(nb, nvi));
            const Eigen::MatrixXd z = solver.solve(ebv);
            s -= Eigen::MatrixXd(e.topRightCorner(nvi, nb)) * z;
        }
        // Ground the first variance node: W and S both ignore constants.
        const Eigen::MatrixXd w = form.dense();
        const Eigen::MatrixXd s_red = s.bottomRightCorner(nvi - 1, nvi - 1);
        const Eigen::MatrixXd w_red = w.bottomRightCorner(nvi - 1, nvi - 1);
        return largest_generalized(w_red, 0.5 * (s_red + s_red.transpose()));
    }

    // Subspace iteration on E^{-1} W with node 0 grounded, Rayleigh-Ritz each sweep.
    const Eigen::Index ng = n - 1;
    SpMat eg = e.bottomRightCorner(ng, ng);
    Ldlt solver;
    factor(solver, eg);
    constexpr Eigen::Index width = 8;
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXd x(n, width);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < width; ++j) x(i, j) = i == 0 ? 0.0 : gauss(rng);
    }
    auto apply_w = [&](const Vec& f) {
        Vec out = Vec::Zero(n);
        out.head(nvi) = form.apply(f.head(nvi));
        return out;
    };
    double previous = 0.0;
    for (int iter = 0; iter < 500; ++iter) {
        Eigen::MatrixXd y(n, width);
        for (Eigen::Index j = 0; j < width; ++j) {
            const Vec wx = apply_w(x.col(j));
            y(0, j) = 0.0;
            y.col(j).tail(ng) = solver.solve(wx.tail(ng));
        }
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
        const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, width);
        Eigen::MatrixXd wq(n, width);
        for (Eigen::Index j = 0; j < width; ++j) wq.col(j) = apply_w(q.col(j));
        const Eigen::MatrixXd gw = q.transpose() * wq;
        const Eigen::MatrixXd eq = e * q;
        const Eigen::MatrixXd ge = q.transpose() * eq;
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (gw + gw.transpose()),
                                                                     0.5 * (ge + ge.transpose()));
        if (es.info() != Eigen::Success) throw UnsupportedError("Rayleigh-Ritz step failed");
        const double top = es.eigenvalues().maxCoeff();
        x = q * es.eigenvectors();
        if (iter > 0 && std::abs(top - previous) <= opts.tol * std::abs(top)) return std::max(0.0, top);
        previous = top;
    }
    return std::max(0.0, previous);
}

double poincare_constant(const ConductanceNetwork& net, std::span<const std::size_t> U,
                         std::span<const std::size_t> U_prime, const PairOptions& opts) {
    return pair_constant(net, U, U, U_prime, opts);
}

double cell_constant(const ConductanceNetwork& net, const GoodCovering& cov, unsigned workers,
                     const PairOptions& opts) {
    if (!cov.space || cov.space->size() != net.size()) throw DomainError("covering atoms must be the network nodes");
    std::vector<double> per_cell(cov.cells.size(), 0.0);
    auto run = [&](std::size_t i) {
        const auto& c = cov.cells[i];
        per_cell[i] = std::max(pair_constant(net, c.inner, c.inner, c.buffer, opts),
                               pair_constant(net, c.inner, c.buffer, c.outer, opts));
    };
    workers = std::max(1u, workers);
    if (workers == 1 || cov.cells.size() < 2) {
        for (std::size_t i = 0; i < cov.cells.size(); ++i) run(i);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < cov.cells.size(); i += workers) run(i);
            });
        }
        for (auto& t : pool) t.join();
    }
    double s = 0.0;
    for (double v : per_cell) s = std::max(s, v);
    return s;
}

PoincareScan scale_invariant_poincare_scan(const DiscretizedCone& cone, const PoincareScanOptions& opts) {
    if (!(opts.delta > 0.0) || opts.delta > 1.0 || !(opts.epsilon > 0.0) || opts.epsilon > 1.0) {
        throw DomainError("Poincare scan parameters must lie in (0, 1]");
    }
    if (!(opts.r_lo > 0.0) || !(opts.r_hi >= opts.r_lo)) throw DomainError("sample radii need 0 < r_lo <= r_hi");
    if (opts.mode == SampleMode::anchored && !cone.has_apex()) {
        throw DomainError("anchored samples need a cone with an apex vertex");
    }
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t first = cone.has_apex() && opts.mode == SampleMode::remote ? 1 : 0;
    std::uniform_int_distribution<std::size_t> pick(first, cone.size() - 1);

    PoincareScan scan;
    std::size_t attempts = 0;
    while (scan.samples.size() < opts.samples && attempts < opts.max_attempts) {
        ++attempts;
        std::size_t x = 0;
        double r_hi = opts.r_hi;
        if (opts.mode != SampleMode::anchored) x = pick(rng);
        if (opts.mode == SampleMode::remote) {
            r_hi = std::min(r_hi, opts.epsilon * cone.radius(x) / 2.0);
            if (r_hi < opts.r_lo) continue;
        }
        const double r = opts.r_lo * std::exp(unit(rng) * std::log(r_hi / opts.r_lo));
        if (r > cone.truncation_distance(x)) {
            ++scan.clipped_excluded;
            continue;
        }
        const auto outer = cone.ball(x, r);
        const auto inner = cone.ball(x, opts.delta * r);
        PoincareSample s;
        s.x = x;
        s.r = r;
        s.scaled = poincare_constant(cone.network(), inner, outer) / (r * r);
        s.kind = classify_ball(cone, x, r, opts.epsilon);
        scan.samples.push_back(s);
    }
    if (scan.samples.empty()) throw DomainError("no unclipped sample balls; adjust radii or the truncation");
    scan.worst = scan.samples.front();
    for (const auto& s : scan.samples) {
        const auto& w = scan.worst;
        if (s.scaled > w.scaled || (s.scaled == w.scaled && std::pair(s.x, s.r) < std::pair(w.x, w.r))) scan.worst = s;
    }
    scan.constant = scan.worst.scaled;
    return scan;
}

IndicialSpectrum indicial_spectrum(int m, std::span<const double> link_eigenvalues) {
    if (m < 2) throw DomainError("complex dimension m must be at least 2");
    IndicialSpectrum out;
    out.m = m;
    out.link_eigenvalues.assign(link_eigenvalues.begin(), link_eigenvalues.end());
    for (double l : out.link_eigenvalues) {
        if (!(l >= 0.0) || !std::isfinite(l)) throw DomainError("link eigenvalues must be finite and nonnegative");
    }
    std::sort(out.link_eigenvalues.begin(), out.link_eigenvalues.end());
    const double a = static_cast<double>(m - 1);
    std::vector<double> weights{0.0, 2.0 * a};
    for (double l : out.link_eigenvalues) {
        const double s = std::sqrt(a * a + l);
        out.roots.push_back({l, a + s, a - s});
        weights.push_back(a + s);
        weights.push_back(a - s);
    }
    std::sort(weights.begin(), weights.end());
    for (double w : weights) {
        if (out.exceptional_weights.empty() ||
            std::abs(w - out.exceptional_weights.back()) > 1e-12 * std::max(1.0, std::abs(w))) {
            out.exceptional_weights.push_back(w);
        }
    }
    for (const auto& r : out.roots) {
        if (r.lambda > 0.0) {
            out.gap_negated = std::pair(-r.plus, -2.0 * a);
            out.gap_direct = std::pair(2.0 * a, r.plus);
            break;
        }
    }
    return out;
}

} // namespace conic
