#include "conic/cone.hpp"

#include "conic/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <queue>
#include <random>

namespace conic {

namespace {

constexpr std::size_t kMaxLinkNodes = 4096;

std::vector<double> all_pairs_shortest(std::size_t n, const std::vector<LinkEdge>& edges) {
    std::vector<std::vector<std::pair<std::size_t, double>>> adj(n);
    for (const auto& e : edges) {
        adj[e.a].emplace_back(e.b, e.length);
        adj[e.b].emplace_back(e.a, e.length);
    }
    std::vector<double> dist(n * n, std::numeric_limits<double>::infinity());
    using Item = std::pair<double, std::size_t>;
    for (std::size_t s = 0; s < n; ++s) {
        double* row = dist.data() + s * n;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        row[s] = 0.0;
        pq.emplace(0.0, s);
        while (!pq.empty()) {
            auto [d, a] = pq.top();
            pq.pop();
            if (d > row[a]) continue;
            for (auto [b, w] : adj[a]) {
                if (d + w < row[b]) {
                    row[b] = d + w;
                    pq.emplace(row[b], b);
                }
            }
        }
    }
    return dist;
}

using Vec3 = std::array<double, 3>;

Vec3 normalized(const Vec3& v) {
    const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    return {v[0] / n, v[1] / n, v[2] / n};
}

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

// Integral of r^{n-1} over [lo, hi].
double radial_mass(double lo, double hi, std::size_t n) {
    const double e = static_cast<double>(n);
    return (std::pow(hi, e) - std::pow(lo, e)) / e;
}

// Integral of r^{n-3} over [lo, hi].
double angular_weight(double lo, double hi, std::size_t n) {
    if (n == 2) return std::log(hi / lo);
    const double e = static_cast<double>(n) - 2.0;
    return (std::pow(hi, e) - std::pow(lo, e)) / e;
}

} // namespace

double LinkMesh::volume() const noexcept {
    double v = 0.0;
    for (double m : measures) v += m;
    return v;
}

ConeLink ConeLink::circle(double length) {
    if (!(length > 0.0) || !std::isfinite(length)) throw DomainError("circle link length must be positive");
    ConeLink link;
    link.kind_ = Kind::circle;
    link.length_ = length;
    return link;
}

ConeLink ConeLink::round_sphere(unsigned subdivisions) {
    if (subdivisions > 5) throw DomainError("sphere subdivision level above 5 is not supported");
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> pts{{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                          {0, -1, -t}, {0, 1, -t}, {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
    for (auto& p : pts) p = normalized(p);
    std::vector<std::array<std::size_t, 3>> faces{
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
        {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
        {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
    for (unsigned level = 0; level < subdivisions; ++level) {
        std::map<std::pair<std::size_t, std::size_t>, std::size_t> midpoint;
        auto mid = [&](std::size_t a, std::size_t b) {
            auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            const Vec3 m{(pts[a][0] + pts[b][0]) / 2, (pts[a][1] + pts[b][1]) / 2, (pts[a][2] + pts[b][2]) / 2};
            pts.push_back(normalized(m));
            midpoint.emplace(key, pts.size() - 1);
            return pts.size() - 1;
        };
        std::vector<std::array<std::size_t, 3>> next;
        next.reserve(faces.size() * 4);
        for (const auto& f : faces) {
            const std::size_t ab = mid(f[0], f[1]);
            const std::size_t bc = mid(f[1], f[2]);
            const std::size_t ca = mid(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        faces = std::move(next);
    }

    const std::size_t n = pts.size();
    std::vector<double> area(n, 0.0);
    std::map<std::pair<std::size_t, std::size_t>, double> cot;
    for (const auto& f : faces) {
        const double a = norm(cross(sub(pts[f[1]], pts[f[0]]), sub(pts[f[2]], pts[f[0]]))) / 2.0;
        for (std::size_t k = 0; k < 3; ++k) {
            area[f[k]] += a / 3.0;
            const std::size_t o = f[k];
            const std::size_t p = f[(k + 1) % 3];
            const std::size_t q = f[(k + 2) % 3];
            const Vec3 u = sub(pts[p], pts[o]);
            const Vec3 v = sub(pts[q], pts[o]);
            cot[std::minmax(p, q)] += dot(u, v) / norm(cross(u, v)) / 2.0;
        }
    }
    double total = 0.0;
    for (double a : area) total += a;
    const double scale = 4.0 * std::numbers::pi / total;

    ConeLink link;
    link.kind_ = Kind::graph;
    link.mesh_.dimension = 2;
    for (double a : area) link.mesh_.measures.push_back(a * scale);
    for (const auto& [key, w] : cot) {
        const double arc = std::acos(std::clamp(dot(pts[key.first], pts[key.second]), -1.0, 1.0));
        link.mesh_.edges.push_back({key.first, key.second, arc, w});
    }
    link.mesh_.distance.resize(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            link.mesh_.distance[a * n + b] = a == b ? 0.0 : std::acos(std::clamp(dot(pts[a], pts[b]), -1.0, 1.0));
        }
    }
    return link;
}

ConeLink ConeLink::graph(std::size_t dimension, std::vector<double> measures, std::vector<LinkEdge> edges) {
    const std::size_t n = measures.size();
    if (dimension < 1) throw DomainError("link dimension must be at least 1");
    if (n < 2) throw DomainError("graph link needs at least two nodes");
    if (n > kMaxLinkNodes) throw CapacityError("graph link has too many nodes");
    for (double m : measures) {
        if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("link node measures must be positive");
    }
    for (auto& e : edges) {
        if (e.a >= n || e.b >= n || e.a == e.b) throw DomainError("link edge endpoints invalid");
        if (!(e.length > 0.0) || !std::isfinite(e.length)) throw DomainError("link edge lengths must be positive");
        if (!(e.conductance > 0.0)) e.conductance = (measures[e.a] + measures[e.b]) / 2.0 / (e.length * e.length);
    }
    ConeLink link;
    link.kind_ = Kind::graph;
    link.mesh_.dimension = dimension;
    link.mesh_.distance = all_pairs_shortest(n, edges);
    for (double d : link.mesh_.distance) {
        if (std::isinf(d)) throw DomainError("graph link must be connected");
    }
    link.mesh_.measures = std::move(measures);
    link.mesh_.edges = std::move(edges);
    return link;
}

std::size_t ConeLink::dimension() const noexcept {
    return kind_ == Kind::circle ? 1 : mesh_.dimension;
}

LinkMesh ConeLink::mesh(std::size_t angular_steps) const {
    if (kind_ == Kind::graph) return mesh_;
    if (angular_steps < 3) throw DomainError("circle link needs at least 3 angular steps");
    if (angular_steps > kMaxLinkNodes) throw CapacityError("too many angular steps");
    const std::size_t n = angular_steps;
    const double h = length_ / static_cast<double>(n);
    LinkMesh m;
    m.dimension = 1;
    m.measures.assign(n, h);
    for (std::size_t s = 0; s < n; ++s) m.edges.push_back({s, (s + 1) % n, h, 1.0 / h});
    m.distance.resize(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            const double d = std::abs(static_cast<double>(a) - static_cast<double>(b)) * h;
            m.distance[a * n + b] = std::min(d, length_ - d);
        }
    }
    return m;
}

DiscretizedCone::DiscretizedCone(ConeSpec spec) : spec_(std::move(spec)) {
    const double r_min = spec_.r_min;
    const double r_max = spec_.r_max;
    if (!(r_min >= 0.0) || !std::isfinite(r_max) || !(r_max > r_min)) {
        throw DomainError("cone needs 0 <= r_min < r_max < inf");
    }
    if (spec_.radial_steps < 1) throw DomainError("cone needs at least one radial step");
    if (r_min == 0.0 && spec_.link.kind() == ConeLink::Kind::graph) {
        throw UnsupportedError("apex gluing is only defined for circle links; use r_min > 0");
    }
    if (r_min == 0.0 && spec_.spacing == RadialSpacing::geometric) {
        throw DomainError("geometric radial spacing needs r_min > 0");
    }
    mesh_ = spec_.link.mesh(spec_.angular_steps);
    dimension_ = mesh_.dimension + 1;
    has_apex_ = r_min == 0.0;
    offset_ = has_apex_ ? 1 : 0;

    const std::size_t steps = spec_.radial_steps;
    std::vector<double> lo;
    std::vector<double> hi;
    if (spec_.spacing == RadialSpacing::uniform) {
        const double dr = (r_max - r_min) / static_cast<double>(steps);
        for (std::size_t k = has_apex_ ? 1 : 0; k <= steps; ++k) {
            const double r = k == steps ? r_max : r_min + static_cast<double>(k) * dr;
            radii_.push_back(r);
            lo.push_back(std::max(r_min, r - dr / 2.0));
            hi.push_back(std::min(r_max, r + dr / 2.0));
        }
    } else {
        const double log_q = std::log(r_max / r_min) / static_cast<double>(steps);
        for (std::size_t k = 0; k <= steps; ++k) {
            radii_.push_back(k == steps ? r_max : r_min * std::exp(log_q * static_cast<double>(k)));
        }
        for (std::size_t k = 0; k <= steps; ++k) {
            lo.push_back(k == 0 ? r_min : std::sqrt(radii_[k - 1] * radii_[k]));
            hi.push_back(k == steps ? r_max : std::sqrt(radii_[k] * radii_[k + 1]));
        }
    }

    const std::size_t n_link = mesh_.size();
    const std::size_t n = dimension_;
    const double first_dr = has_apex_ ? radii_.front() : 0.0;
    if (has_apex_) network_.add_node(mesh_.volume() * radial_mass(0.0, first_dr / 2.0, n));
    for (std::size_t k = 0; k < radii_.size(); ++k) {
        for (std::size_t s = 0; s < n_link; ++s) network_.add_node(mesh_.measures[s] * radial_mass(lo[k], hi[k], n));
    }
    if (has_apex_) {
        const double c = std::pow(first_dr / 2.0, static_cast<double>(n) - 1.0) / first_dr;
        for (std::size_t s = 0; s < n_link; ++s) network_.add_conductor(0, offset_ + s, mesh_.measures[s] * c, first_dr);
    }
    for (std::size_t k = 0; k < radii_.size(); ++k) {
        const double w = angular_weight(lo[k], hi[k], n);
        for (const auto& e : mesh_.edges) {
            network_.add_conductor(vertex_at(k, e.a), vertex_at(k, e.b), e.conductance * w, radii_[k] * e.length);
        }
        if (k + 1 < radii_.size()) {
            const double dr = radii_[k + 1] - radii_[k];
            const double c = std::pow(hi[k], static_cast<double>(n) - 1.0) / dr;
            for (std::size_t s = 0; s < n_link; ++s) {
                network_.add_conductor(vertex_at(k, s), vertex_at(k + 1, s), mesh_.measures[s] * c, dr);
            }
        }
    }
}

std::optional<std::size_t> DiscretizedCone::apex() const noexcept {
    if (has_apex_) return 0;
    return std::nullopt;
}

std::size_t DiscretizedCone::vertex_at(std::size_t level, std::size_t link_node) const {
    if (level >= radii_.size() || link_node >= mesh_.size()) throw DomainError("grid position out of range");
    return offset_ + level * mesh_.size() + link_node;
}

std::size_t DiscretizedCone::nearest_vertex(double r, std::size_t link_node) const {
    auto it = std::lower_bound(radii_.begin(), radii_.end(), r);
    std::size_t k = static_cast<std::size_t>(it - radii_.begin());
    if (k == radii_.size()) {
        k = radii_.size() - 1;
    } else if (k > 0 && r - radii_[k - 1] < radii_[k] - r) {
        --k;
    }
    if (has_apex_ && r < radii_.front() / 2.0) return 0;
    return vertex_at(k, link_node);
}

double DiscretizedCone::radius(std::size_t v) const {
    if (v >= size()) throw DomainError("vertex out of range");
    if (is_apex(v)) return 0.0;
    return radii_[(v - offset_) / mesh_.size()];
}

std::size_t DiscretizedCone::link_node(std::size_t v) const {
    if (v >= size()) throw DomainError("vertex out of range");
    if (is_apex(v)) return 0;
    return (v - offset_) % mesh_.size();
}

double DiscretizedCone::distance(std::size_t u, std::size_t v) const {
    if (u == v) return 0.0;
    const double r1 = radius(u);
    const double r2 = radius(v);
    if (is_apex(u) || is_apex(v)) return r1 + r2;
    const double theta = std::min(mesh_.dist(link_node(u), link_node(v)), std::numbers::pi);
    const double s = std::sin(theta / 2.0);
    return std::sqrt((r1 - r2) * (r1 - r2) + 4.0 * r1 * r2 * s * s);
}

std::vector<double> DiscretizedCone::distances_from(std::size_t u) const {
    std::vector<double> d(size());
    for (std::size_t v = 0; v < size(); ++v) d[v] = distance(u, v);
    return d;
}

double DiscretizedCone::truncation_distance(std::size_t v) const {
    const double r = radius(v);
    double d = spec_.r_max - r;
    if (spec_.r_min > 0.0) d = std::min(d, r - spec_.r_min);
    return d;
}

std::vector<std::size_t> DiscretizedCone::ball(std::size_t x, double r) const {
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < size(); ++v) {
        if (distance(x, v) <= r) out.push_back(v);
    }
    return out;
}

BallVolume DiscretizedCone::ball_volume(std::size_t x, double r) const {
    if (!(r > 0.0)) throw DomainError("ball radius must be positive");
    BallVolume out;
    for (std::size_t v = 0; v < size(); ++v) {
        if (distance(x, v) <= r) out.volume += network_.measure(v);
    }
    out.clipped = r > truncation_distance(x);
    return out;
}

std::vector<std::size_t> DiscretizedCone::neighborhood(std::span<const std::size_t> region, double radius) const {
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < size(); ++v) {
        const double rv = this->radius(v);
        for (std::size_t u : region) {
            if (std::abs(this->radius(u) - rv) <= radius && distance(u, v) <= radius) {
                out.push_back(v);
                break;
            }
        }
    }
    return out;
}

std::vector<std::size_t> DiscretizedCone::radial_band(double lo, double hi) const {
    // Relative slack keeps grid radii that equal a band edge up to rounding on
    // the same side under homothety.
    constexpr double slack = 1e-12;
    std::vector<std::size_t> out;
    for (std::size_t v = 0; v < size(); ++v) {
        const double r = radius(v);
        if (r >= lo * (1.0 - slack) && r < hi * (1.0 - slack)) out.push_back(v);
    }
    return out;
}

double DiscretizedCone::exact_volume() const noexcept {
    return mesh_.volume() * radial_mass(spec_.r_min, spec_.r_max, dimension_);
}

DiscretizedCone build_cone(const ConeLink& link, double r_min, double r_max, std::size_t radial_steps,
                           std::size_t angular_steps, RadialSpacing spacing) {
    return DiscretizedCone(ConeSpec{link, r_min, r_max, radial_steps, angular_steps, spacing});
}

std::shared_ptr<const AtomSpace> atom_space(const DiscretizedCone& cone) {
    const auto m = cone.network().measures();
    return std::make_shared<AtomSpace>(std::vector<double>(m.begin(), m.end()), cone.network().adjacency());
}

std::vector<std::size_t> separated_net(const DiscretizedCone& cone, std::span<const std::size_t> region, double s) {
    if (region.empty()) throw DomainError("separated net needs a nonempty region");
    if (!(s > 0.0)) throw DomainError("net separation must be positive");
    std::vector<std::size_t> sorted(region.begin(), region.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> net;
    for (std::size_t v : sorted) {
        bool far = true;
        for (std::size_t x : net) {
            if (cone.distance(x, v) < s) {
                far = false;
                break;
            }
        }
        if (far) net.push_back(v);
    }
    return net;
}

GoodCovering annular_covering(const DiscretizedCone& cone, double R, double kappa, std::size_t levels) {
    if (!(R > cone.spec().r_min) || !(kappa > 1.0) || levels < 1) {
        throw DomainError("annular covering needs R > r_min, kappa > 1 and at least one level");
    }
    const double outer = R * std::pow(kappa, static_cast<double>(levels));
    if (outer > cone.spec().r_max * (1.0 + 1e-12)) throw DomainError("annuli exceed the truncation radius");

    std::vector<AtomSet> annuli;
    annuli.push_back(make_atom_set(cone.radial_band(0.0, R)));
    double lo = R;
    for (std::size_t i = 1; i <= levels; ++i) {
        const double hi = lo * kappa;
        annuli.push_back(make_atom_set(cone.radial_band(lo, hi)));
        lo = hi;
    }
    for (const auto& a : annuli) {
        if (a.empty()) throw DomainError("an annulus contains no grid level; refine the radial grid");
    }

    const std::size_t count = annuli.size();
    auto span_union = [&](const std::vector<AtomSet>& sets, std::size_t i) {
        AtomSet u = sets[i];
        if (i > 0) u = set_union(u, sets[i - 1]);
        if (i + 1 < count) u = set_union(u, sets[i + 1]);
        return u;
    };
    std::vector<AtomSet> buffers;
    for (std::size_t i = 0; i < count; ++i) buffers.push_back(span_union(annuli, i));

    GoodCovering cov;
    cov.space = atom_space(cone);
    for (std::size_t i = 0; i < count; ++i) {
        cov.cells.push_back({annuli[i], buffers[i], span_union(buffers, i)});
        cov.target = set_union(cov.target, annuli[i]);
    }
    cov.target_outer = cov.target;
    return cov;
}

double max_edge_length(const DiscretizedCone& cone, std::span<const std::size_t> nodes) {
    double h = 0.0;
    for (std::size_t v : nodes) {
        for (std::size_t ci : cone.network().incident(v)) h = std::max(h, cone.network().conductors()[ci].length);
    }
    return h;
}

GoodCovering net_covering(const DiscretizedCone& cone, std::span<const std::size_t> region, double s,
                          std::span<const std::size_t> target_outer) {
    const auto net = separated_net(cone, region, s);
    const double wide = 3.0 * s + max_edge_length(cone, target_outer);
    GoodCovering cov;
    cov.space = atom_space(cone);
    for (std::size_t x : net) {
        auto outer = cone.ball(x, wide);
        cov.cells.push_back({cone.ball(x, s), outer, outer});
    }
    cov.target = make_atom_set({region.begin(), region.end()});
    cov.target_outer = make_atom_set({target_outer.begin(), target_outer.end()});
    return cov;
}

BallKind classify_ball(double distance_to_base, bool at_base, double r, double epsilon) {
    if (!(epsilon > 0.0) || epsilon > 1.0) throw DomainError("remote parameter must lie in (0, 1]");
    if (at_base) return BallKind::anchored;
    if (r <= epsilon * distance_to_base / 2.0) return BallKind::remote;
    return BallKind::neither;
}

BallKind classify_ball(const DiscretizedCone& cone, std::size_t x, double r, double epsilon) {
    return classify_ball(cone.radius(x), cone.is_apex(x), r, epsilon);
}

const char* to_string(BallKind kind) noexcept {
    switch (kind) {
    case BallKind::anchored: return "anchored";
    case BallKind::remote: return "remote";
    case BallKind::neither: return "neither";
    }
    return "neither";
}

double combine_parameter(double epsilon, double delta0) {
    if (!(epsilon > 0.0) || epsilon > 1.0 || !(delta0 > 0.0) || delta0 > 1.0) {
        throw DomainError("parameters must lie in (0, 1]");
    }
    return epsilon * delta0 * delta0 / 8.0;
}

int proof_case(double distance_to_base, double r, double epsilon) {
    if (r <= epsilon * distance_to_base / 2.0 && distance_to_base > 0.0) return 1;
    if (r >= 1.5 * distance_to_base) return 2;
    return 3;
}

DoublingScan doubling_scan(const DiscretizedCone& cone, const DoublingOptions& opts) {
    if (!(opts.r_lo > 0.0) || !(opts.r_hi >= opts.r_lo)) throw DomainError("sample radii need 0 < r_lo <= r_hi");
    if (!(opts.epsilon > 0.0) || opts.epsilon > 1.0) throw DomainError("remote parameter must lie in (0, 1]");
    if (opts.mode == SampleMode::anchored && !cone.has_apex()) {
        throw DomainError("anchored samples need a cone with an apex vertex");
    }
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t first = cone.has_apex() && opts.mode == SampleMode::remote ? 1 : 0;
    std::uniform_int_distribution<std::size_t> pick(first, cone.size() - 1);
    auto log_uniform = [&](double lo, double hi) { return lo * std::exp(unit(rng) * std::log(hi / lo)); };

    DoublingScan scan;
    std::size_t attempts = 0;
    while (scan.samples.size() < opts.samples && attempts < opts.max_attempts) {
        ++attempts;
        std::size_t x = 0;
        double r_hi = opts.r_hi;
        if (opts.mode != SampleMode::anchored) x = pick(rng);
        const double ell = cone.radius(x);
        if (opts.mode == SampleMode::remote) {
            r_hi = std::min(r_hi, opts.epsilon * ell / 2.0);
            if (r_hi < opts.r_lo) continue;
        }
        const double r = log_uniform(opts.r_lo, r_hi);
        if (2.0 * r > cone.truncation_distance(x)) {
            ++scan.clipped_excluded;
            continue;
        }
        DoublingSample s;
        s.x = x;
        s.r = r;
        s.ratio = cone.ball_volume(x, 2.0 * r).volume / cone.ball_volume(x, r).volume;
        s.kind = classify_ball(cone, x, r, opts.epsilon);
        s.proof_case = proof_case(ell, r, opts.epsilon);
        scan.samples.push_back(s);
    }
    if (scan.samples.empty()) throw DomainError("no unclipped sample balls; adjust radii or the truncation");
    scan.worst = scan.samples.front();
    for (const auto& s : scan.samples) {
        const auto& w = scan.worst;
        if (s.ratio > w.ratio || (s.ratio == w.ratio && std::pair(s.x, s.r) < std::pair(w.x, w.r))) scan.worst = s;
    }
    scan.constant = scan.worst.ratio;
    return scan;
}

double radius_function(double r) noexcept {
    return r >= 2.0 ? r : 1.0 + r * r / 4.0;
}

RadiusField radius_field(const DiscretizedCone& cone) {
    RadiusField field;
    field.values.reserve(cone.size());
    for (std::size_t v = 0; v < cone.size(); ++v) {
        const double r = cone.radius(v);
        const double rho = radius_function(r);
        const double w = std::sqrt(1.0 + r * r);
        field.values.push_back(rho);
        field.equivalence = std::max({field.equivalence, rho / w, w / rho});
    }
    return field;
}

} // namespace conic
