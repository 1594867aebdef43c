#pragma once

// Measured conductance networks: the discrete form of (M, g, mu) used by the
// cone and spectral code.  Energy is sum c_ab |f(a)-f(b)|^2 plus optional
// leak terms sum k_a f(a)^2 that model a Robin boundary.

#include <Eigen/SparseCore>

#include <cstddef>
#include <span>
#include <vector>

namespace conic {

struct Conductor {
    std::size_t a = 0;
    std::size_t b = 0;
    double conductance = 0.0;
    double length = 0.0;  ///< metric length of the edge, for mesh-size bounds
};

class ConductanceNetwork {
public:
    ConductanceNetwork() = default;
    explicit ConductanceNetwork(std::vector<double> measures);

    std::size_t add_node(double measure);
    void add_conductor(std::size_t a, std::size_t b, double conductance, double length);
    void add_leak(std::size_t a, double conductance);

    [[nodiscard]] std::size_t size() const noexcept { return measures_.size(); }
    [[nodiscard]] double measure(std::size_t a) const { return measures_.at(a); }
    [[nodiscard]] std::span<const double> measures() const noexcept { return measures_; }
    [[nodiscard]] std::span<const Conductor> conductors() const noexcept { return conductors_; }
    /// Indices into conductors() of the edges at node a.
    [[nodiscard]] std::span<const std::size_t> incident(std::size_t a) const { return incident_.at(a); }
    [[nodiscard]] double leak(std::size_t a) const { return leaks_.at(a); }
    [[nodiscard]] bool has_leaks() const noexcept;
    [[nodiscard]] double total_measure() const noexcept;

    /// Stiffness matrix of the energy form; leaks on the diagonal if requested.
    [[nodiscard]] Eigen::SparseMatrix<double> stiffness(bool with_leaks = false) const;
    [[nodiscard]] double energy(std::span<const double> f, bool with_leaks = false) const;

    /// Adjacency lists (neighbor node indices), as needed by AtomSpace.
    [[nodiscard]] std::vector<std::vector<std::size_t>> adjacency() const;

    /// Component label per node of the sub-network induced on `nodes`
    /// (labels 0..; -1 for nodes outside the subset).
    [[nodiscard]] std::vector<long> components(std::span<const std::size_t> nodes) const;

private:
    std::vector<double> measures_;
    std::vector<double> leaks_;
    std::vector<Conductor> conductors_;
    std::vector<std::vector<std::size_t>> incident_;
};

} // namespace conic
