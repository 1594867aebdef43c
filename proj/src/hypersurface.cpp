#include "conic/hypersurface.hpp"

#include "conic/errors.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace conic {

WeightedPolynomial::WeightedPolynomial(std::vector<std::int64_t> weights, std::vector<Monomial> monomials)
    : weights_(std::move(weights)), monomials_(std::move(monomials)) {
    if (weights_.empty()) throw DomainError("weights must be nonempty");
    std::int64_t g = 0;
    for (auto w : weights_) {
        if (w <= 0) throw DomainError("weights must be positive integers");
        g = std::gcd(g, w);
    }
    if (g != 1) throw DomainError("weights must have gcd 1");
    for (const auto& mono : monomials_) {
        if (mono.exponents.size() != weights_.size()) throw DomainError("monomial has the wrong number of exponents");
        if (std::any_of(mono.exponents.begin(), mono.exponents.end(), [](auto a) { return a < 0; })) {
            throw DomainError("exponents must be nonnegative");
        }
        if (mono.coefficient == 0.0) throw DomainError("monomial coefficients must be nonzero");
    }
}

std::int64_t WeightedPolynomial::weight_sum() const noexcept {
    return std::accumulate(weights_.begin(), weights_.end(), std::int64_t{0});
}

WeightedDegree weighted_degree(const WeightedPolynomial& p) {
    if (p.monomials().empty()) throw DomainError("polynomial has no monomials");
    auto degree_of = [&](const Monomial& mono) {
        std::int64_t d = 0;
        for (std::size_t i = 0; i < mono.exponents.size(); ++i) d += mono.exponents[i] * p.weights()[i];
        return d;
    };
    WeightedDegree out;
    out.degree = degree_of(p.monomials().front());
    out.homogeneous = std::all_of(p.monomials().begin(), p.monomials().end(),
                                  [&](const Monomial& mono) { return degree_of(mono) == out.degree; });
    return out;
}

bool cy_link_condition(const WeightedPolynomial& p) {
    const auto d = weighted_degree(p);
    if (!d.homogeneous) throw PreconditionError("the link condition needs a weighted homogeneous polynomial");
    return d.degree < p.weight_sum();
}

WeightedPolynomial brieskorn_pham(const std::vector<std::int64_t>& exponents) {
    if (exponents.empty()) throw DomainError("Brieskorn-Pham polynomial needs exponents");
    std::int64_t l = 1;
    for (auto a : exponents) {
        if (a < 2) throw DomainError("Brieskorn-Pham exponents must be at least 2");
        l = std::lcm(l, a);
    }
    std::vector<std::int64_t> w;
    std::int64_t g = 0;
    for (auto a : exponents) {
        w.push_back(l / a);
        g = std::gcd(g, l / a);
    }
    for (auto& x : w) x /= g;
    std::vector<Monomial> monos;
    for (std::size_t j = 0; j < exponents.size(); ++j) {
        Monomial mono;
        mono.exponents.assign(exponents.size(), 0);
        mono.exponents[j] = exponents[j];
        monos.push_back(std::move(mono));
    }
    return {std::move(w), std::move(monos)};
}

std::int64_t blowup_discrepancy(std::int64_t m, std::int64_t degree) {
    return m - degree;
}

bool CrepantChain::crepant() const noexcept {
    return std::all_of(steps.begin(), steps.end(), [](const BlowupStep& s) { return s.discrepancy == 0; });
}

CrepantChain bp_crepant_chain(std::int64_t m, std::int64_t k) {
    if (m < 2 || k < 2) throw DomainError("the family needs m >= 2 and k >= 2");
    CrepantChain out;
    out.m = m;
    out.k = k;
    out.se_ok = k > m * (m - 1);
    out.resolvable = k % m == 0 || k % m == 1;
    out.blowup_count = k / m;
    out.family_count = out.se_ok && out.resolvable ? out.blowup_count : 0;
    for (std::int64_t kk = k; kk >= m; kk -= m) {
        const std::int64_t degree = std::min(m, kk);
        out.steps.push_back({kk, degree, blowup_discrepancy(m, degree)});
    }
    return out;
}

std::int64_t smallest_admissible_k(std::int64_t m) {
    if (m < 2) throw DomainError("m must be at least 2");
    std::int64_t k = m * (m - 1) + 1;
    while (k % m != 0 && k % m != 1) ++k;
    return k;
}

std::string bp_table_csv(std::int64_t m, std::int64_t k_lo, std::int64_t k_hi) {
    std::ostringstream os;
    os << "m,k,se_ok,resolvable,blowup_count,family_count\n";
    for (std::int64_t k = k_lo; k <= k_hi; ++k) {
        const auto c = bp_crepant_chain(m, k);
        os << c.m << ',' << c.k << ',' << (c.se_ok ? "true" : "false") << ',' << (c.resolvable ? "true" : "false")
           << ',' << c.blowup_count << ',' << c.family_count << '\n';
    }
    return os.str();
}

} // namespace conic
