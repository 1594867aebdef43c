#pragma once

// Weighted homogeneous hypersurface links: weighted degree, the Calabi-Yau
// link condition d < |w| and the crepant blow-up chain of
// z_0^m + ... + z_{m-1}^m + z_m^k.

#include <cstdint>
#include <string>
#include <vector>

namespace conic {

struct Monomial {
    std::vector<std::int64_t> exponents;
    double coefficient = 1.0;
};

/// Weights are positive with gcd 1; coefficients are only checked nonzero.
class WeightedPolynomial {
public:
    WeightedPolynomial(std::vector<std::int64_t> weights, std::vector<Monomial> monomials);

    [[nodiscard]] const std::vector<std::int64_t>& weights() const noexcept { return weights_; }
    [[nodiscard]] const std::vector<Monomial>& monomials() const noexcept { return monomials_; }
    [[nodiscard]] std::int64_t weight_sum() const noexcept;

private:
    std::vector<std::int64_t> weights_;
    std::vector<Monomial> monomials_;
};

struct WeightedDegree {
    std::int64_t degree = 0;  ///< of the first monomial
    bool homogeneous = false;
};

/// Throws DomainError for a polynomial without monomials.
[[nodiscard]] WeightedDegree weighted_degree(const WeightedPolynomial& p);

/// d < |w|.  Throws PreconditionError unless p is homogeneous.
[[nodiscard]] bool cy_link_condition(const WeightedPolynomial& p);

/// sum_j z_j^{a_j} with w_j = L / a_j reduced to gcd 1 (L = lcm a_j).
[[nodiscard]] WeightedPolynomial brieskorn_pham(const std::vector<std::int64_t>& exponents);

/// Adjunction: blowing up the origin of a hypersurface of multiplicity
/// `degree` in C^{m+1} changes K by (m - degree) E.
[[nodiscard]] std::int64_t blowup_discrepancy(std::int64_t m, std::int64_t degree);

struct BlowupStep {
    std::int64_t k = 0;        ///< exponent of z_m before this step
    std::int64_t degree = 0;   ///< multiplicity min(m, k)
    std::int64_t discrepancy = 0;
};

struct CrepantChain {
    std::int64_t m = 0;
    std::int64_t k = 0;
    bool se_ok = false;            ///< k > m (m - 1)
    bool resolvable = false;       ///< k mod m in {0, 1}; false means the criterion is not met
    std::int64_t blowup_count = 0; ///< floor(k / m)
    std::int64_t family_count = 0; ///< floor(k / m) when both flags hold, else 0
    std::vector<BlowupStep> steps; ///< each step leaves a singularity of type k - m
    [[nodiscard]] bool crepant() const noexcept;
};

/// Throws DomainError unless m >= 2 and k >= 2.
[[nodiscard]] CrepantChain bp_crepant_chain(std::int64_t m, std::int64_t k);

/// Least k > m (m - 1) with k mod m in {0, 1}.
[[nodiscard]] std::int64_t smallest_admissible_k(std::int64_t m);

/// CSV rows "m,k,se_ok,resolvable,blowup_count,family_count" for k_lo..k_hi.
[[nodiscard]] std::string bp_table_csv(std::int64_t m, std::int64_t k_lo, std::int64_t k_hi);

} // namespace conic
