#pragma once

// Good coverings (U_i, U*_i, U#_i) of a target A inside A#, their validation,
// the associated weighted graph and the closed-form patching constants.

#include "conic/graph.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace conic {

/// Finite measure space of atoms with an adjacency relation.  Two atom sets
/// have intersecting closures when they share an atom or contain adjacent
/// atoms, the discrete stand-in for topological closure.
class AtomSpace {
public:
    AtomSpace() = default;
    explicit AtomSpace(std::vector<double> measures, std::vector<std::vector<std::size_t>> adjacency = {},
                       std::vector<std::int64_t> ids = {});

    [[nodiscard]] std::size_t size() const noexcept { return measures_.size(); }
    [[nodiscard]] double measure(std::size_t a) const { return measures_.at(a); }
    [[nodiscard]] std::int64_t id(std::size_t a) const { return ids_.at(a); }
    [[nodiscard]] const std::vector<std::size_t>& neighbors(std::size_t a) const { return adjacency_.at(a); }
    /// Index of an external id; throws DomainError when absent.
    [[nodiscard]] std::size_t index_of(std::int64_t id) const;

private:
    std::vector<double> measures_;
    std::vector<std::vector<std::size_t>> adjacency_;
    std::vector<std::int64_t> ids_;
    std::map<std::int64_t, std::size_t> index_;
};

/// Sorted, duplicate-free list of atom indices.
using AtomSet = std::vector<std::size_t>;

[[nodiscard]] AtomSet make_atom_set(std::vector<std::size_t> atoms);
[[nodiscard]] AtomSet set_union(const AtomSet& a, const AtomSet& b);
[[nodiscard]] bool is_subset(const AtomSet& inner, const AtomSet& outer);
[[nodiscard]] double set_measure(const AtomSpace& space, const AtomSet& set);
[[nodiscard]] bool closures_meet(const AtomSpace& space, const AtomSet& a, const AtomSet& b);

struct CoveringCell {
    AtomSet inner;   ///< U_i
    AtomSet buffer;  ///< U*_i
    AtomSet outer;   ///< U#_i
};

struct GoodCovering {
    std::shared_ptr<const AtomSpace> space;
    std::vector<CoveringCell> cells;
    AtomSet target;        ///< A
    AtomSet target_outer;  ///< A#
};

struct CoveringViolation {
    int condition = 0;  ///< 1..5 as in the definition of a good covering
    std::size_t i = 0;
    std::size_t j = 0;
    std::string message;
};

struct CoveringValidation {
    std::size_t q1 = 0;
    double q2 = 0.0;
    /// k(i,j) for every pair i <= j whose closures meet.
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> witness;
    std::vector<CoveringViolation> violations;

    [[nodiscard]] bool ok() const noexcept { return violations.empty(); }
};

/// Checks conditions (i)-(v).  Witness search prefers k = i, then k = j,
/// then ascending k.  Violations are data, never exceptions.
[[nodiscard]] CoveringValidation validate_covering(const GoodCovering& cov);

/// Nerve of the covering: m(i) = mu(U_i), edge iff closures of U_i, U_j meet.
/// Throws PreconditionError for coverings that fail validation.
[[nodiscard]] WeightedGraph associated_graph(const GoodCovering& cov);

/// Constants feeding the patching theorems.  `nu` may be +inf.
struct PatchingInput {
    double continuous_constant = 1.0;  ///< S_c
    double discrete_constant = 1.0;    ///< S_d
    int q1 = 1;
    double q2 = 1.0;
    double p = 2.0;
    double nu = kInfiniteOrder;
};

/// S = S_c Q1 2^{p-1+p/nu} (1 + S_d Q2 (2^p Q1^2)^{nu/(nu-p)})^{(nu-p)/nu}.
[[nodiscard]] double patch_dirichlet(const PatchingInput& in);
/// Same as patch_dirichlet with 2^{2p-1+p/nu}; equals 2^p * patch_dirichlet.
[[nodiscard]] double patch_neumann(const PatchingInput& in);

} // namespace conic
