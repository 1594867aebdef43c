#include "conic/graph.hpp"

#include "conic/errors.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <thread>

namespace conic {

WeightedGraph WeightedGraph::from_measures(std::vector<double> measures, const std::vector<Edge>& edges) {
    WeightedGraph g;
    for (double m : measures) g.add_vertex(m);
    for (const auto& [i, j] : edges) g.add_edge(i, j);
    return g;
}

std::size_t WeightedGraph::add_vertex(double measure, std::int64_t id) {
    if (!(measure > 0.0) || !std::isfinite(measure)) {
        throw DomainError("vertex measure must be finite and strictly positive, got " + std::to_string(measure));
    }
    measures_.push_back(measure);
    ids_.push_back(id);
    adjacency_.emplace_back();
    return measures_.size() - 1;
}

std::size_t WeightedGraph::add_vertex(double measure) {
    return add_vertex(measure, static_cast<std::int64_t>(measures_.size()));
}

void WeightedGraph::add_edge(std::size_t i, std::size_t j) {
    if (i >= size() || j >= size()) throw DomainError("edge endpoint out of range");
    if (i == j) throw DomainError("self-loop at vertex " + std::to_string(ids_[i]));
    if (has_edge(i, j)) {
        throw DomainError("duplicate edge {" + std::to_string(ids_[i]) + "," + std::to_string(ids_[j]) + "}");
    }
    edges_.emplace_back(std::min(i, j), std::max(i, j));
    adjacency_[i].push_back(j);
    adjacency_[j].push_back(i);
}

bool WeightedGraph::has_edge(std::size_t i, std::size_t j) const {
    const auto& a = adjacency_.at(i);
    return std::find(a.begin(), a.end(), j) != a.end();
}

double WeightedGraph::edge_measure(std::size_t i, std::size_t j) const {
    return std::max(measures_.at(i), measures_.at(j));
}

double WeightedGraph::total_measure() const noexcept {
    return std::accumulate(measures_.begin(), measures_.end(), 0.0);
}

std::vector<std::size_t> WeightedGraph::components() const {
    constexpr auto unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> label(size(), unset);
    std::size_t next = 0;
    std::vector<std::size_t> stack;
    for (std::size_t s = 0; s < size(); ++s) {
        if (label[s] != unset) continue;
        label[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            std::size_t v = stack.back();
            stack.pop_back();
            for (std::size_t w : adjacency_[v]) {
                if (label[w] == unset) {
                    label[w] = next;
                    stack.push_back(w);
                }
            }
        }
        ++next;
    }
    return label;
}

bool WeightedGraph::is_connected() const {
    if (empty()) return false;
    auto label = components();
    return std::all_of(label.begin(), label.end(), [](std::size_t l) { return l == 0; });
}

SubsetCut subset_cut(const WeightedGraph& g, std::span<const std::size_t> subset) {
    std::vector<char> inside(g.size(), 0);
    SubsetCut cut;
    for (std::size_t v : subset) {
        if (v >= g.size()) throw DomainError("subset vertex out of range");
        if (!inside[v]) {
            inside[v] = 1;
            cut.subset.push_back(v);
            cut.interior_measure += g.measure(v);
        }
    }
    std::sort(cut.subset.begin(), cut.subset.end());
    for (const auto& [i, j] : g.edges()) {
        if (inside[i] != inside[j]) cut.boundary_measure += g.edge_measure(i, j);
    }
    return cut;
}

namespace {

using Mask = std::uint64_t;

// Bitmask view of a small graph used by the exact enumerations.
struct MaskGraph {
    std::vector<double> measure;
    std::vector<Mask> neighbor_mask;
    std::vector<std::vector<std::pair<std::size_t, double>>> incident;  // (neighbor, m(i,j))

    explicit MaskGraph(const WeightedGraph& g) : measure(g.measures().begin(), g.measures().end()) {
        neighbor_mask.assign(g.size(), 0);
        incident.resize(g.size());
        for (const auto& [i, j] : g.edges()) {
            neighbor_mask[i] |= Mask{1} << j;
            neighbor_mask[j] |= Mask{1} << i;
            double w = g.edge_measure(i, j);
            incident[i].emplace_back(j, w);
            incident[j].emplace_back(i, w);
        }
    }

    // Summation order is fixed by vertex index so the value of a subset does
    // not depend on how the subset space is partitioned.
    [[nodiscard]] std::pair<double, double> evaluate(Mask mask) const {
        double interior = 0.0;
        double boundary = 0.0;
        for (std::size_t v = 0; v < measure.size(); ++v) {
            if (!(mask >> v & 1U)) continue;
            interior += measure[v];
            if ((neighbor_mask[v] & ~mask) == 0) continue;
            for (const auto& [w, m] : incident[v]) {
                if (!(mask >> w & 1U)) boundary += m;
            }
        }
        return {interior, boundary};
    }
};

struct Candidate {
    double score;
    Mask mask;
};

// Scans masks 1 .. 2^n - 1, keeping the candidate with the largest score
// (ties: smallest mask).  `score` returns NaN for inadmissible subsets.
Candidate best_subset(const MaskGraph& mg, const EnumerationOptions& opts,
                      const std::function<double(Mask, double, double)>& score) {
    const std::size_t n = mg.measure.size();
    const Mask end = Mask{1} << n;
    const unsigned workers = std::max(1U, std::min<unsigned>(opts.workers, 64U));

    auto better = [](const Candidate& a, const Candidate& b) {
        if (std::isnan(b.score)) return !std::isnan(a.score);
        if (std::isnan(a.score)) return false;
        if (a.score != b.score) return a.score > b.score;
        return a.mask < b.mask;
    };
    auto scan = [&](Mask lo, Mask hi) {
        Candidate best{std::numeric_limits<double>::quiet_NaN(), 0};
        for (Mask mask = lo; mask < hi; ++mask) {
            auto [interior, boundary] = mg.evaluate(mask);
            Candidate c{score(mask, interior, boundary), mask};
            if (better(c, best)) best = c;
        }
        return best;
    };

    if (workers == 1 || end < 4096) return scan(1, end);

    std::vector<Candidate> partial(workers);
    std::vector<std::thread> pool;
    const Mask chunk = (end - 1 + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        Mask lo = 1 + w * chunk;
        Mask hi = std::min(end, lo + chunk);
        pool.emplace_back([&, w, lo, hi] {
            partial[w] = lo < hi ? scan(lo, hi) : Candidate{std::numeric_limits<double>::quiet_NaN(), 0};
        });
    }
    for (auto& t : pool) t.join();
    Candidate best = partial.front();
    for (const auto& c : partial) {
        if (better(c, best)) best = c;
    }
    return best;
}

void check_enumerable(const WeightedGraph& g, const EnumerationOptions& opts) {
    if (g.empty()) throw DomainError("graph has no vertices");
    const std::size_t hard_cap = 40;
    if (g.size() > std::min(opts.cap, hard_cap)) {
        throw CapacityError("exact subset enumeration refused: " + std::to_string(g.size()) +
                            " vertices exceeds cap " + std::to_string(std::min(opts.cap, hard_cap)));
    }
}

bool at_most_half(double interior, double total) {
    return 2.0 * interior <= total * (1.0 + 1e-12);
}

std::vector<std::size_t> mask_to_vertices(Mask mask, std::size_t n) {
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < n; ++v) {
        if (mask >> v & 1U) out.push_back(v);
    }
    return out;
}

} // namespace

SubsetCut cheeger_cut(const WeightedGraph& g, const EnumerationOptions& opts) {
    check_enumerable(g, opts);
    const MaskGraph mg(g);
    const double total = g.total_measure();
    // Maximise -ratio so the shared "largest score" scan yields the infimum.
    auto best = best_subset(mg, opts, [&](Mask, double interior, double boundary) {
        if (!at_most_half(interior, total)) return std::numeric_limits<double>::quiet_NaN();
        return -(boundary / interior);
    });
    if (std::isnan(best.score)) {
        SubsetCut none;
        none.boundary_measure = std::numeric_limits<double>::infinity();
        return none;
    }
    auto vertices = mask_to_vertices(best.mask, g.size());
    return subset_cut(g, vertices);
}

double cheeger_constant(const WeightedGraph& g, const EnumerationOptions& opts) {
    auto cut = cheeger_cut(g, opts);
    if (cut.subset.empty()) return std::numeric_limits<double>::infinity();
    return cut.boundary_measure / cut.interior_measure;
}

double isoperimetric_constant(const WeightedGraph& g, double nu, IsoperimetricMode mode,
                              const EnumerationOptions& opts, std::span<const std::size_t> frozen) {
    check_enumerable(g, opts);
    if (!(nu > 1.0)) throw DomainError("isoperimetric order must lie in (1, inf]");
    Mask frozen_mask = 0;
    for (std::size_t v : frozen) {
        if (v >= g.size()) throw DomainError("frozen vertex out of range");
        frozen_mask |= Mask{1} << v;
    }
    const double exponent = std::isinf(nu) ? 1.0 : (nu - 1.0) / nu;
    const double total = g.total_measure();
    const MaskGraph mg(g);
    auto best = best_subset(mg, opts, [&](Mask mask, double interior, double boundary) {
        if (mask & frozen_mask) return std::numeric_limits<double>::quiet_NaN();
        if (mode == IsoperimetricMode::neumann && !at_most_half(interior, total)) {
            return std::numeric_limits<double>::quiet_NaN();
        }
        const double numerator = mode == IsoperimetricMode::neumann ? interior : std::pow(interior, exponent);
        if (boundary == 0.0) return std::numeric_limits<double>::infinity();
        return numerator / boundary;
    });
    if (std::isnan(best.score)) return 0.0;  // no admissible subset
    return best.score;
}

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;

SparseMatrix edge_laplacian(const WeightedGraph& g) {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(4 * g.edge_count());
    for (const auto& [i, j] : g.edges()) {
        const double w = g.edge_measure(i, j);
        const auto a = static_cast<Eigen::Index>(i);
        const auto b = static_cast<Eigen::Index>(j);
        triplets.emplace_back(a, a, w);
        triplets.emplace_back(b, b, w);
        triplets.emplace_back(a, b, -w);
        triplets.emplace_back(b, a, -w);
    }
    const auto n = static_cast<Eigen::Index>(g.size());
    SparseMatrix lap(n, n);
    lap.setFromTriplets(triplets.begin(), triplets.end());
    return lap;
}

double dense_gap(const WeightedGraph& g) {
    const Eigen::MatrixXd lap = Eigen::MatrixXd(edge_laplacian(g));
    Eigen::VectorXd inv_sqrt(static_cast<Eigen::Index>(g.size()));
    for (std::size_t i = 0; i < g.size(); ++i) inv_sqrt[static_cast<Eigen::Index>(i)] = 1.0 / std::sqrt(g.measure(i));
    const Eigen::MatrixXd sym = inv_sqrt.asDiagonal() * lap * inv_sqrt.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
    return std::max(0.0, solver.eigenvalues()[1]);
}

// Block inverse iteration on the grounded Laplacian.  Iterates are kept
// M-orthogonal to constants, so the Ritz values approximate the nonzero
// spectrum from below.
double sparse_gap(const WeightedGraph& g) {
    const auto n = static_cast<Eigen::Index>(g.size());
    const SparseMatrix lap = edge_laplacian(g);
    const SparseMatrix grounded = lap.bottomRightCorner(n - 1, n - 1);
    Eigen::SimplicialLDLT<SparseMatrix> solver(grounded);
    if (solver.info() != Eigen::Success) throw std::runtime_error("spectral gap: factorisation failed");

    Eigen::VectorXd mass(n);
    for (Eigen::Index i = 0; i < n; ++i) mass[i] = g.measure(static_cast<std::size_t>(i));
    const double total = mass.sum();

    auto project = [&](Eigen::MatrixXd& block) {
        for (Eigen::Index c = 0; c < block.cols(); ++c) {
            double mean = mass.dot(block.col(c)) / total;
            block.col(c).array() -= mean;
        }
    };
    auto m_orthonormalise = [&](Eigen::MatrixXd& block) {
        Eigen::MatrixXd gram = block.transpose() * mass.asDiagonal() * block;
        Eigen::LLT<Eigen::MatrixXd> llt(gram);
        block = llt.matrixU().solve<Eigen::OnTheRight>(block);
    };

    const Eigen::Index width = std::min<Eigen::Index>(6, n - 1);
    Eigen::MatrixXd block(n, width);
    for (Eigen::Index c = 0; c < width; ++c) {
        for (Eigen::Index i = 0; i < n; ++i) {
            block(i, c) = std::cos(0.37 * static_cast<double>((c + 1) * (i + 1)) + 0.11 * static_cast<double>(c));
        }
    }
    project(block);
    m_orthonormalise(block);

    double previous = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < 2000; ++iter) {
        Eigen::MatrixXd rhs = mass.asDiagonal() * block;
        Eigen::MatrixXd next = Eigen::MatrixXd::Zero(n, width);
        for (Eigen::Index c = 0; c < width; ++c) {
            next.col(c).tail(n - 1) = solver.solve(rhs.col(c).tail(n - 1));
        }
        project(next);
        m_orthonormalise(next);
        Eigen::MatrixXd reduced = next.transpose() * lap * next;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(reduced);
        block = next * ritz.eigenvectors();
        const double value = ritz.eigenvalues()[0];
        if (std::abs(value - previous) <= 1e-13 * std::abs(value)) return value;
        previous = value;
    }
    return previous;
}

} // namespace

double spectral_gap(const WeightedGraph& g) {
    if (g.empty()) throw DomainError("graph has no vertices");
    if (g.size() == 1) return std::numeric_limits<double>::infinity();
    if (!g.is_connected()) return 0.0;
    return g.size() < 200 ? dense_gap(g) : sparse_gap(g);
}

double rayleigh_quotient(const WeightedGraph& g, std::span<const double> f) {
    if (f.size() != g.size()) throw DomainError("function size does not match vertex count");
    double mean = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) mean += f[i] * g.measure(i);
    mean /= g.total_measure();
    double numerator = 0.0;
    for (const auto& [i, j] : g.edges()) numerator += (f[i] - f[j]) * (f[i] - f[j]) * g.edge_measure(i, j);
    double denominator = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) denominator += (f[i] - mean) * (f[i] - mean) * g.measure(i);
    if (denominator == 0.0) return std::numeric_limits<double>::infinity();
    return numerator / denominator;
}

double degree_bound_m0(const WeightedGraph& g) {
    if (g.empty()) throw DomainError("graph has no vertices");
    double best = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double sum = 0.0;
        for (std::size_t j : g.neighbors(i)) sum += g.edge_measure(i, j);
        best = std::max(best, sum / g.measure(i));
    }
    return best;
}

CheegerGapReport cheeger_gap_report(const WeightedGraph& g, const EnumerationOptions& opts) {
    if (g.size() < 2) throw PreconditionError("Cheeger/gap comparison needs at least two vertices");
    CheegerGapReport report;
    report.h = cheeger_constant(g, opts);
    report.lambda = spectral_gap(g);
    report.m0 = degree_bound_m0(g);
    if (report.m0 == 0.0) {
        // Edgeless: both constants vanish.
        report.lower_ok = report.h == 0.0 && report.lambda == 0.0;
        report.upper_ok = report.lower_ok;
        return report;
    }
    const double tol = 1e-10;
    const double lower = report.h * report.h / (8.0 * report.m0);
    report.lower_ok = lower <= report.lambda * (1.0 + tol) + tol * 1e-3;
    report.upper_ok = report.lambda <= report.h * (1.0 + tol) + tol * 1e-3;
    return report;
}

} // namespace conic
