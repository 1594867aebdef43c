#include "conic/covering.hpp"

#include "conic/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace conic {

AtomSpace::AtomSpace(std::vector<double> measures, std::vector<std::vector<std::size_t>> adjacency,
                     std::vector<std::int64_t> ids)
    : measures_(std::move(measures)), adjacency_(std::move(adjacency)), ids_(std::move(ids)) {
    for (double m : measures_) {
        if (!(m >= 0.0) || !std::isfinite(m)) throw DomainError("atom measures must be finite and nonnegative");
    }
    if (adjacency_.empty()) adjacency_.resize(measures_.size());
    if (adjacency_.size() != measures_.size()) throw DomainError("adjacency size does not match atom count");
    for (const auto& nbrs : adjacency_) {
        for (std::size_t b : nbrs) {
            if (b >= measures_.size()) throw DomainError("adjacency refers to unknown atom");
        }
    }
    if (ids_.empty()) {
        for (std::size_t a = 0; a < measures_.size(); ++a) ids_.push_back(static_cast<std::int64_t>(a));
    }
    if (ids_.size() != measures_.size()) throw DomainError("id list size does not match atom count");
    for (std::size_t a = 0; a < ids_.size(); ++a) {
        if (!index_.emplace(ids_[a], a).second) throw DomainError("duplicate atom id " + std::to_string(ids_[a]));
    }
}

std::size_t AtomSpace::index_of(std::int64_t id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw DomainError("unknown atom id " + std::to_string(id));
    return it->second;
}

AtomSet make_atom_set(std::vector<std::size_t> atoms) {
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    return atoms;
}

AtomSet set_union(const AtomSet& a, const AtomSet& b) {
    AtomSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool is_subset(const AtomSet& inner, const AtomSet& outer) {
    return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

double set_measure(const AtomSpace& space, const AtomSet& set) {
    double total = 0.0;
    for (std::size_t a : set) total += space.measure(a);
    return total;
}

bool closures_meet(const AtomSpace& space, const AtomSet& a, const AtomSet& b) {
    for (std::size_t x : a) {
        if (std::binary_search(b.begin(), b.end(), x)) return true;
        for (std::size_t y : space.neighbors(x)) {
            if (std::binary_search(b.begin(), b.end(), y)) return true;
        }
    }
    return false;
}

namespace {

// Unordered pairs i <= j whose inner cells have meeting closures, found via
// an atom -> cells index instead of testing all pairs.
std::vector<std::pair<std::size_t, std::size_t>> touching_pairs(const GoodCovering& cov) {
    const AtomSpace& space = *cov.space;
    std::vector<std::vector<std::size_t>> cells_of(space.size());
    for (std::size_t i = 0; i < cov.cells.size(); ++i) {
        for (std::size_t a : cov.cells[i].inner) cells_of[a].push_back(i);
    }
    std::set<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < cov.cells.size(); ++i) {
        for (std::size_t a : cov.cells[i].inner) {
            auto visit = [&](std::size_t b) {
                for (std::size_t j : cells_of[b]) pairs.emplace(std::min(i, j), std::max(i, j));
            };
            visit(a);
            for (std::size_t b : space.neighbors(a)) visit(b);
        }
    }
    return {pairs.begin(), pairs.end()};
}

void check_cell_sets(const GoodCovering& cov) {
    if (!cov.space) throw DomainError("covering has no atom space");
    auto check = [&](const AtomSet& s) {
        for (std::size_t a : s) {
            if (a >= cov.space->size()) throw DomainError("covering refers to unknown atom");
        }
        if (!std::is_sorted(s.begin(), s.end()) || std::adjacent_find(s.begin(), s.end()) != s.end()) {
            throw DomainError("atom sets must be sorted and duplicate-free");
        }
    };
    for (const auto& c : cov.cells) {
        check(c.inner);
        check(c.buffer);
        check(c.outer);
    }
    check(cov.target);
    check(cov.target_outer);
}

} // namespace

CoveringValidation validate_covering(const GoodCovering& cov) {
    check_cell_sets(cov);
    const AtomSpace& space = *cov.space;
    CoveringValidation out;
    const std::size_t n = cov.cells.size();

    // (i) A within the union of cells, outer cells within A#.
    AtomSet inner_union;
    AtomSet outer_union;
    for (const auto& c : cov.cells) {
        inner_union = set_union(inner_union, c.inner);
        outer_union = set_union(outer_union, c.outer);
    }
    if (!is_subset(cov.target, inner_union)) {
        out.violations.push_back({1, 0, 0, "target A is not covered by the cells U_i"});
    }
    if (!is_subset(outer_union, cov.target_outer)) {
        out.violations.push_back({1, 0, 0, "union of outer cells U#_i leaves A#"});
    }

    // (ii) nested triples, and positive cell measures.
    std::vector<double> inner_measure(n);
    std::vector<double> buffer_measure(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& c = cov.cells[i];
        if (!is_subset(c.inner, c.buffer)) out.violations.push_back({2, i, i, "U_i is not contained in U*_i"});
        if (!is_subset(c.buffer, c.outer)) out.violations.push_back({2, i, i, "U*_i is not contained in U#_i"});
        inner_measure[i] = set_measure(space, c.inner);
        buffer_measure[i] = set_measure(space, c.buffer);
        if (!(inner_measure[i] > 0.0)) out.violations.push_back({5, i, i, "cell U_i has zero measure"});
    }

    // (iii) overlap count of the outer cells.
    std::vector<std::vector<std::size_t>> outer_of(space.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a : cov.cells[i].outer) outer_of[a].push_back(i);
    }
    std::vector<std::size_t> stamp(n, static_cast<std::size_t>(-1));
    for (std::size_t i0 = 0; i0 < n; ++i0) {
        std::size_t count = 0;
        for (std::size_t a : cov.cells[i0].outer) {
            for (std::size_t i : outer_of[a]) {
                if (stamp[i] != i0) {
                    stamp[i] = i0;
                    ++count;
                }
            }
        }
        out.q1 = std::max(out.q1, count);
    }

    // (iv) witnesses and (v) measure comparability.
    for (const auto& [i, j] : touching_pairs(cov)) {
        const AtomSet both = set_union(cov.cells[i].inner, cov.cells[j].inner);
        std::vector<std::size_t> order{i};
        if (j != i) order.push_back(j);
        for (std::size_t k = 0; k < n; ++k) {
            if (k != i && k != j) order.push_back(k);
        }
        bool found = false;
        for (std::size_t k : order) {
            if (is_subset(both, cov.cells[k].buffer)) {
                out.witness[{i, j}] = k;
                const double smaller = std::min(inner_measure[i], inner_measure[j]);
                if (smaller > 0.0) out.q2 = std::max(out.q2, buffer_measure[k] / smaller);
                found = true;
                break;
            }
        }
        if (!found) {
            out.violations.push_back({4, i, j, "no cell k with U_i and U_j inside U*_k"});
        }
    }
    return out;
}

WeightedGraph associated_graph(const GoodCovering& cov) {
    auto validation = validate_covering(cov);
    if (!validation.ok()) {
        throw PreconditionError("associated graph requires a valid good covering: " +
                                validation.violations.front().message);
    }
    WeightedGraph g;
    for (const auto& c : cov.cells) g.add_vertex(set_measure(*cov.space, c.inner));
    for (const auto& [pair, k] : validation.witness) {
        (void)k;
        if (pair.first != pair.second) g.add_edge(pair.first, pair.second);
    }
    return g;
}

namespace {

void check_patching(const PatchingInput& in) {
    if (!(in.p >= 1.0) || !std::isfinite(in.p)) throw DomainError("patching exponent p must lie in [1, inf)");
    if (!(in.nu > in.p)) throw DomainError("patching requires p < nu");
    if (!(in.continuous_constant > 0.0) || !(in.discrete_constant > 0.0) || in.q1 < 1 || !(in.q2 > 0.0)) {
        throw DomainError("patching constants must be positive");
    }
}

// Shared factor Q1 (1 + S_d Q2 (2^p Q1^2)^{nu/(nu-p)})^{(nu-p)/nu} S_c, with
// nu = inf treated through its limits p/nu -> 0, nu/(nu-p) -> 1, (nu-p)/nu -> 1.
double patch_core(const PatchingInput& in, double power_of_two) {
    check_patching(in);
    const double q1 = static_cast<double>(in.q1);
    const bool infinite = std::isinf(in.nu);
    const double p_over_nu = infinite ? 0.0 : in.p / in.nu;
    const double inner_exp = infinite ? 1.0 : in.nu / (in.nu - in.p);
    const double outer_exp = infinite ? 1.0 : (in.nu - in.p) / in.nu;
    const double bracket = 1.0 + in.discrete_constant * in.q2 * std::pow(std::pow(2.0, in.p) * q1 * q1, inner_exp);
    return in.continuous_constant * q1 * std::pow(2.0, power_of_two + p_over_nu) * std::pow(bracket, outer_exp);
}

} // namespace

double patch_dirichlet(const PatchingInput& in) {
    return patch_core(in, in.p - 1.0);
}

double patch_neumann(const PatchingInput& in) {
    return patch_core(in, 2.0 * in.p - 1.0);
}

} // namespace conic
