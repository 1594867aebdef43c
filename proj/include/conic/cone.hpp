#pragma once

// Discretized metric cones C(S) = (r_min, r_max] x S with g = dr^2 + r^2 g_S:
// links, the radial-by-link grid, exact cone distances, balls, separated nets,
// annular and net coverings, ball classification and volume-doubling scans.

#include "conic/covering.hpp"
#include "conic/network.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace conic {

struct LinkEdge {
    std::size_t a = 0;
    std::size_t b = 0;
    double length = 0.0;
    double conductance = 0.0;  ///< conductance of the link energy, per unit r^{n-3}
};

/// Discretized compact link (S, g_S): node measures, weighted edges and a
/// full table of intrinsic distances.
struct LinkMesh {
    std::size_t dimension = 1;
    std::vector<double> measures;
    std::vector<LinkEdge> edges;
    std::vector<double> distance;  ///< row-major node x node

    [[nodiscard]] std::size_t size() const noexcept { return measures.size(); }
    [[nodiscard]] double volume() const noexcept;
    [[nodiscard]] double dist(std::size_t a, std::size_t b) const { return distance[a * size() + b]; }
};

class ConeLink {
public:
    enum class Kind { circle, graph };

    /// Circle of length L, discretized at build time with angular_steps nodes.
    static ConeLink circle(double length);
    /// Icosphere approximation of the unit round S^2 with cotangent weights and
    /// great-circle distances, total area normalized to 4 pi.
    static ConeLink round_sphere(unsigned subdivisions);
    /// Arbitrary connected graph link of the given dimension.  Edges with a
    /// nonpositive conductance get the default (m_a + m_b) / (2 l^2).
    /// Distances are shortest paths in the edge lengths.
    static ConeLink graph(std::size_t dimension, std::vector<double> measures, std::vector<LinkEdge> edges);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] double length() const noexcept { return length_; }
    [[nodiscard]] std::size_t dimension() const noexcept;

    /// Mesh used by the cone; angular_steps only matters for circles.
    [[nodiscard]] LinkMesh mesh(std::size_t angular_steps) const;

private:
    Kind kind_ = Kind::circle;
    double length_ = 0.0;
    LinkMesh mesh_;
};

enum class RadialSpacing { uniform, geometric };

struct ConeSpec {
    ConeLink link = ConeLink::circle(6.283185307179586);
    double r_min = 0.0;
    double r_max = 8.0;
    std::size_t radial_steps = 64;
    std::size_t angular_steps = 64;
    RadialSpacing spacing = RadialSpacing::uniform;
};

struct BallVolume {
    double volume = 0.0;
    bool clipped = false;  ///< ball reaches past the truncation
};

/// Radial grid times link mesh.  Vertex 0 is the apex when r_min = 0; the
/// remaining vertices are stored level-major.  Cell measures and conductances
/// integrate the cone metric exactly in r, so on a geometric grid the
/// homothety r -> q^j r maps the grid onto itself.
class DiscretizedCone {
public:
    explicit DiscretizedCone(ConeSpec spec);

    [[nodiscard]] const ConeSpec& spec() const noexcept { return spec_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return dimension_; }
    [[nodiscard]] const LinkMesh& link_mesh() const noexcept { return mesh_; }
    [[nodiscard]] const ConductanceNetwork& network() const noexcept { return network_; }
    [[nodiscard]] std::size_t size() const noexcept { return network_.size(); }

    [[nodiscard]] bool has_apex() const noexcept { return has_apex_; }
    [[nodiscard]] std::optional<std::size_t> apex() const noexcept;

    [[nodiscard]] std::size_t level_count() const noexcept { return radii_.size(); }
    [[nodiscard]] double level_radius(std::size_t k) const { return radii_.at(k); }
    [[nodiscard]] std::size_t vertex_at(std::size_t level, std::size_t link_node) const;
    /// Vertex on the level closest to r, at the given link node.
    [[nodiscard]] std::size_t nearest_vertex(double r, std::size_t link_node) const;

    [[nodiscard]] double radius(std::size_t v) const;
    /// Link node of v; the apex reports 0.
    [[nodiscard]] std::size_t link_node(std::size_t v) const;
    [[nodiscard]] bool is_apex(std::size_t v) const noexcept { return has_apex_ && v == 0; }

    /// Cone distance d^2 = r1^2 + r2^2 - 2 r1 r2 cos(min(d_S, pi)).
    [[nodiscard]] double distance(std::size_t u, std::size_t v) const;
    [[nodiscard]] std::vector<double> distances_from(std::size_t u) const;
    /// Distance from v to the truncation: r_max - r, and r - r_min when there is a hole.
    [[nodiscard]] double truncation_distance(std::size_t v) const;

    [[nodiscard]] std::vector<std::size_t> ball(std::size_t x, double r) const;
    [[nodiscard]] BallVolume ball_volume(std::size_t x, double r) const;
    /// Vertices within distance `radius` of some vertex of `region`.
    [[nodiscard]] std::vector<std::size_t> neighborhood(std::span<const std::size_t> region, double radius) const;
    /// Vertices with lo <= r < hi.
    [[nodiscard]] std::vector<std::size_t> radial_band(double lo, double hi) const;

    /// Vol(S) (r_max^n - r_min^n) / n.
    [[nodiscard]] double exact_volume() const noexcept;
    [[nodiscard]] double total_measure() const noexcept { return network_.total_measure(); }

private:
    ConeSpec spec_;
    LinkMesh mesh_;
    std::size_t dimension_ = 2;
    bool has_apex_ = false;
    std::vector<double> radii_;
    std::size_t offset_ = 0;
    ConductanceNetwork network_;
};

[[nodiscard]] DiscretizedCone build_cone(const ConeLink& link, double r_min, double r_max, std::size_t radial_steps,
                                         std::size_t angular_steps, RadialSpacing spacing = RadialSpacing::uniform);

/// Cone vertices as an atom space (measures and grid adjacency).
[[nodiscard]] std::shared_ptr<const AtomSpace> atom_space(const DiscretizedCone& cone);

/// Greedy s-separated net of `region`, scanning vertices in ascending order.
[[nodiscard]] std::vector<std::size_t> separated_net(const DiscretizedCone& cone, std::span<const std::size_t> region,
                                                     double s);

/// A_0 = D_R, A_i = A(kappa^{i-1} R, kappa^i R) for 1 <= i <= levels, with
/// buffers and outer cells the +-1 unions.
[[nodiscard]] GoodCovering annular_covering(const DiscretizedCone& cone, double R, double kappa, std::size_t levels);

/// V_i = B(x_i, s), V*_i = V#_i = B(x_i, 3s + h) over a separated net of
/// `region`, h being the longest grid edge touching `target_outer`.  The
/// extra h absorbs the adjacency used for discrete closures.
[[nodiscard]] GoodCovering net_covering(const DiscretizedCone& cone, std::span<const std::size_t> region, double s,
                                        std::span<const std::size_t> target_outer);

/// Longest grid edge with an endpoint in `nodes`.
[[nodiscard]] double max_edge_length(const DiscretizedCone& cone, std::span<const std::size_t> nodes);

enum class BallKind { anchored, remote, neither };

/// Anchored iff the centre is the base point; remote iff r <= eps d(o,x) / 2.
[[nodiscard]] BallKind classify_ball(double distance_to_base, bool at_base, double r, double epsilon);
/// Base point is the apex (d(o,x) = r(x)).
[[nodiscard]] BallKind classify_ball(const DiscretizedCone& cone, std::size_t x, double r, double epsilon);
[[nodiscard]] const char* to_string(BallKind kind) noexcept;

/// delta = eps delta0^2 / 8.
[[nodiscard]] double combine_parameter(double epsilon, double delta0);

enum class SampleMode { anchored, remote, mixed };

struct DoublingOptions {
    SampleMode mode = SampleMode::mixed;
    std::size_t samples = 100;
    double r_lo = 0.5;
    double r_hi = 2.0;
    double epsilon = 0.5;
    std::uint64_t seed = 0;
    std::size_t max_attempts = 100000;
};

struct DoublingSample {
    std::size_t x = 0;
    double r = 0.0;
    double ratio = 0.0;
    BallKind kind = BallKind::neither;
    int proof_case = 0;  ///< 1: remote, 2: r >= 3/2 d(o,x), 3: intermediate
};

struct DoublingScan {
    double constant = 0.0;
    DoublingSample worst;
    std::vector<DoublingSample> samples;
    std::size_t clipped_excluded = 0;
};

/// Max of V(x,2r)/V(x,r) over seeded samples whose doubled ball is unclipped.
[[nodiscard]] DoublingScan doubling_scan(const DiscretizedCone& cone, const DoublingOptions& opts);
[[nodiscard]] int proof_case(double distance_to_base, double r, double epsilon);

/// rho = r for r >= 2 and 1 + r^2/4 below, so rho >= 1 and rho = r on the end.
struct RadiusField {
    std::vector<double> values;
    double equivalence = 1.0;  ///< c with c^-1 w <= rho <= c w, w = (1 + d(o,x)^2)^{1/2}
};

[[nodiscard]] double radius_function(double r) noexcept;
[[nodiscard]] RadiusField radius_field(const DiscretizedCone& cone);

} // namespace conic
