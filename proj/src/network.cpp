#include "conic/network.hpp"

#include "conic/errors.hpp"

#include <cmath>
#include <numeric>

namespace conic {

ConductanceNetwork::ConductanceNetwork(std::vector<double> measures) {
    for (double m : measures) add_node(m);
}

std::size_t ConductanceNetwork::add_node(double measure) {
    if (!(measure > 0.0) || !std::isfinite(measure)) throw DomainError("node measures must be finite and positive");
    measures_.push_back(measure);
    leaks_.push_back(0.0);
    incident_.emplace_back();
    return measures_.size() - 1;
}

void ConductanceNetwork::add_conductor(std::size_t a, std::size_t b, double conductance, double length) {
    if (a >= size() || b >= size() || a == b) throw DomainError("conductor endpoints must be distinct nodes");
    if (!(conductance > 0.0) || !std::isfinite(conductance)) throw DomainError("conductance must be positive");
    if (!(length > 0.0) || !std::isfinite(length)) throw DomainError("edge length must be positive");
    incident_[a].push_back(conductors_.size());
    incident_[b].push_back(conductors_.size());
    conductors_.push_back({a, b, conductance, length});
}

void ConductanceNetwork::add_leak(std::size_t a, double conductance) {
    if (!(conductance >= 0.0) || !std::isfinite(conductance)) throw DomainError("leak must be nonnegative");
    leaks_.at(a) += conductance;
}

bool ConductanceNetwork::has_leaks() const noexcept {
    for (double k : leaks_) {
        if (k > 0.0) return true;
    }
    return false;
}

double ConductanceNetwork::total_measure() const noexcept {
    return std::accumulate(measures_.begin(), measures_.end(), 0.0);
}

Eigen::SparseMatrix<double> ConductanceNetwork::stiffness(bool with_leaks) const {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(4 * conductors_.size() + size());
    for (const auto& c : conductors_) {
        trips.emplace_back(c.a, c.a, c.conductance);
        trips.emplace_back(c.b, c.b, c.conductance);
        trips.emplace_back(c.a, c.b, -c.conductance);
        trips.emplace_back(c.b, c.a, -c.conductance);
    }
    for (std::size_t a = 0; a < size(); ++a) {
        trips.emplace_back(a, a, with_leaks ? leaks_[a] : 0.0);
    }
    const auto n = static_cast<Eigen::Index>(size());
    Eigen::SparseMatrix<double> k(n, n);
    k.setFromTriplets(trips.begin(), trips.end());
    return k;
}

double ConductanceNetwork::energy(std::span<const double> f, bool with_leaks) const {
    if (f.size() != size()) throw DomainError("function size does not match the network");
    double e = 0.0;
    for (const auto& c : conductors_) {
        const double d = f[c.a] - f[c.b];
        e += c.conductance * d * d;
    }
    if (with_leaks) {
        for (std::size_t a = 0; a < size(); ++a) e += leaks_[a] * f[a] * f[a];
    }
    return e;
}

std::vector<std::vector<std::size_t>> ConductanceNetwork::adjacency() const {
    std::vector<std::vector<std::size_t>> adj(size());
    for (const auto& c : conductors_) {
        adj[c.a].push_back(c.b);
        adj[c.b].push_back(c.a);
    }
    return adj;
}

std::vector<long> ConductanceNetwork::components(std::span<const std::size_t> nodes) const {
    std::vector<long> label(size(), -1);
    std::vector<char> inside(size(), 0);
    for (std::size_t a : nodes) inside.at(a) = 1;
    long next = 0;
    std::vector<std::size_t> stack;
    for (std::size_t start : nodes) {
        if (label[start] >= 0) continue;
        label[start] = next;
        stack.push_back(start);
        while (!stack.empty()) {
            const std::size_t a = stack.back();
            stack.pop_back();
            for (std::size_t ci : incident_[a]) {
                const auto& c = conductors_[ci];
                const std::size_t b = c.a == a ? c.b : c.a;
                if (inside[b] && label[b] < 0) {
                    label[b] = next;
                    stack.push_back(b);
                }
            }
        }
        ++next;
    }
    return label;
}

} // namespace conic
