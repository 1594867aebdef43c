#pragma once

// Toric Kahler cones: Gorenstein covector, the cross-section polytope, basic
// lattice triangulations, support functions, Kahler classes and the
// invariant A.  Lattice geometry is exact; floating point enters only when A
// is returned.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace conic {

using Rational = boost::multiprecision::cpp_rational;
using IntVector = std::vector<std::int64_t>;
using RationalVector = std::vector<Rational>;

/// Cone spanned by primitive lattice rays u_1..u_d in Z^m.  The rays must
/// span R^m and the cone must contain no line, so that its dual (the moment
/// cone {y : <u_j, y> >= 0}) is full-dimensional and strictly convex.
class ToricCone {
public:
    ToricCone(std::size_t dim, std::vector<IntVector> rays);

    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] const std::vector<IntVector>& rays() const noexcept { return rays_; }
    /// Primitive inward normals of the facets of cone(u): the extreme rays
    /// of the moment cone.
    [[nodiscard]] const std::vector<IntVector>& facet_normals() const noexcept { return normals_; }
    /// Sum of the facet normals; strictly positive on every ray.
    [[nodiscard]] const IntVector& positive_covector() const noexcept { return xi_; }

    /// x in cone(u); `strict` asks for the relative interior.
    [[nodiscard]] bool contains(const IntVector& x, bool strict = false) const;

private:
    std::size_t dim_;
    std::vector<IntVector> rays_;
    std::vector<IntVector> normals_;
    IntVector xi_;
};

/// Why no integral gamma exists: gamma is forced to `forced` by the rays in
/// `basis`; either some ray then has gamma(u) != 1 or `forced` is not integral.
struct GorensteinCertificate {
    std::vector<std::size_t> basis;
    RationalVector forced;
    std::optional<std::size_t> ray;  ///< first inconsistent ray, if any
    Rational value;                  ///< gamma(u_ray) under `forced`
    bool non_integral = false;
    [[nodiscard]] std::string describe() const;
};

struct GorensteinData {
    std::optional<IntVector> covector;
    std::optional<GorensteinCertificate> certificate;
    [[nodiscard]] bool gorenstein() const noexcept { return covector.has_value(); }
};

/// Solves gamma(u_j) = 1 over the integers.  The solution is unique when it
/// exists because the rays span.
[[nodiscard]] GorensteinData gorenstein_covector(const ToricCone& cone);

struct LatticePoint {
    IntVector ambient;                ///< point of Z^m with gamma = 1
    IntVector coords;                 ///< coordinates in the lattice of H_gamma
    bool interior = false;            ///< in the relative interior of P
    std::optional<std::size_t> ray;   ///< index of the matching input ray
};

/// P = H_gamma cap cone(u).  H_gamma-coordinates come from a unimodular
/// basis (origin, b_1..b_{m-1}) with gamma(origin) = 1 and gamma(b_i) = 0.
struct CrossSection {
    std::size_t dim = 2;  ///< m; the polytope has dimension m - 1
    IntVector gamma;
    IntVector origin;
    std::vector<IntVector> basis;
    std::vector<IntVector> vertices;       ///< the rays, ambient
    std::vector<IntVector> vertex_coords;  ///< the rays, H_gamma coordinates
    std::vector<LatticePoint> points;      ///< every lattice point, lexicographic in ambient coordinates

    [[nodiscard]] std::size_t interior_count() const noexcept;
    [[nodiscard]] std::size_t boundary_count() const noexcept { return points.size() - interior_count(); }
};

/// Throws PreconditionError without a Gorenstein covector.
[[nodiscard]] CrossSection cross_section(const ToricCone& cone, const GorensteinData& data);
[[nodiscard]] CrossSection cross_section(const ToricCone& cone);

struct FanTriangulation {
    std::size_t dim = 2;
    /// Input rays first (in input order), then the other boundary lattice
    /// points, then interior points, each group lexicographic.
    std::vector<IntVector> rays;
    std::vector<IntVector> coords;
    std::vector<bool> interior;  ///< ray lies in the relative interior of P
    std::size_t input_rays = 0;
    std::vector<std::vector<std::size_t>> simplices;
    std::vector<std::int64_t> determinants;  ///< of vertex differences, per simplex
    bool maximal = false;
    bool basic = false;

    [[nodiscard]] std::size_t interior_count() const noexcept;
    [[nodiscard]] std::optional<std::size_t> index_of(const IntVector& ray) const;
};

/// Triangulation of P using every lattice point as a vertex: a fan from the
/// first interior point (or a vertex fan when there is none), refined by
/// inserting the remaining points.  Polytopes of dimension >= 3 throw
/// UnsupportedError.
[[nodiscard]] FanTriangulation maximal_triangulation(const CrossSection& section);

struct ConvexityWitness {
    std::size_t simplex = 0;
    std::size_t ray = 0;
    double slack = 0.0;  ///< <l_sigma, u> - h(u)
};

struct SupportCheck {
    bool convex = false;
    bool strictly_convex = false;
    bool compactly_supported = false;
    std::vector<RationalVector> forms;        ///< l_sigma per simplex
    std::vector<ConvexityWitness> equalities; ///< off-cone rays with zero slack
    std::vector<ConvexityWitness> violations; ///< rays with negative slack
};

/// Values are indexed like tri.rays.  Strict convexity is
/// <l_sigma, u> >= h(u) at every ray with equality only on sigma; compact
/// support means h vanishes at every boundary ray.  Checks are exact.
[[nodiscard]] SupportCheck support_function_check(const FanTriangulation& tri, std::span<const double> values);

/// Values keyed by ray; throws DomainError for unknown or missing rays.
[[nodiscard]] std::vector<double> values_by_ray(const FanTriangulation& tri, const std::map<IntVector, double>& values);

struct Halfspace {
    IntVector normal;   ///< u_j
    double offset = 0;  ///< lambda_j: <u_j, y> >= lambda_j
};

struct KahlerClass {
    std::vector<std::size_t> exceptional;  ///< interior rays j
    std::vector<double> lambda;            ///< lambda_j on the exceptional rays
    std::vector<double> coefficients;      ///< -2 pi lambda_j on c_j
    std::vector<Halfspace> moment_set;     ///< C_h over every ray
    bool compactly_supported = false;
    bool kahler = false;  ///< strictly convex; false flags a degenerate (merely convex) class
};

/// Throws PreconditionError when the values are not convex.
[[nodiscard]] KahlerClass kahler_class(const FanTriangulation& tri, std::span<const double> values);

enum class AMethod { divisor_sum, polytope_volume };

/// vol(C minus C_h) by a half-space polytope computation.
[[nodiscard]] double complement_volume(const FanTriangulation& tri, std::span<const double> values);
/// Lattice-normalized volumes of the compact faces of C_h, one per interior ray.
[[nodiscard]] std::vector<double> exceptional_face_volumes(const FanTriangulation& tri, std::span<const double> values);

/// A = [omega]^m / ((m-1) m! Omega).  divisor_sum pairs each lambda_j with
/// int_{E_j} [omega]^{m-1} = (2 pi)^{m-1} (m-1)! vol(F_j); polytope_volume uses
/// [omega]^m = -(2 pi)^m m! vol(C minus C_h).  Needs a strictly convex,
/// compactly supported class (PreconditionError) and omega > 0 (DomainError).
[[nodiscard]] double invariant_A(const FanTriangulation& tri, std::span<const double> values, double omega,
                                 AMethod method);

/// vol(S^{2m-1}) / |Gamma| for quotient links.
[[nodiscard]] double quotient_link_volume(std::size_t m, std::size_t group_order);

} // namespace conic
