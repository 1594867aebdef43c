#include "conic/toric.hpp"

#include "conic/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <set>
#include <sstream>

namespace conic {

namespace {

using Matrix = std::vector<RationalVector>;

RationalVector to_rational(const IntVector& v) {
    return RationalVector(v.begin(), v.end());
}

Rational dot(const RationalVector& a, const RationalVector& b) {
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::int64_t dot(const IntVector& a, const IntVector& b) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Rational determinant(Matrix a) {
    const std::size_t n = a.size();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            if (a[r][c] == 0) continue;
            const Rational f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return det;
}

// Unique solution of a x = b for square a, or nothing when a is singular.
std::optional<RationalVector> solve(Matrix a, RationalVector b) {
    const std::size_t n = a.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return std::nullopt;
        std::swap(a[p], a[c]);
        std::swap(b[p], b[c]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) continue;
            const Rational f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
            b[r] -= f * b[c];
        }
    }
    RationalVector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

std::size_t rank(Matrix a) {
    std::size_t r = 0;
    const std::size_t cols = a.empty() ? 0 : a[0].size();
    for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
        std::size_t p = r;
        while (p < a.size() && a[p][c] == 0) ++p;
        if (p == a.size()) continue;
        std::swap(a[p], a[r]);
        for (std::size_t i = r + 1; i < a.size(); ++i) {
            if (a[i][c] == 0) continue;
            const Rational f = a[i][c] / a[r][c];
            for (std::size_t k = c; k < cols; ++k) a[i][k] -= f * a[r][k];
        }
        ++r;
    }
    return r;
}

std::int64_t to_int(const Rational& q) {
    if (denominator(q) != 1) throw UnsupportedError("expected an integral value");
    return static_cast<std::int64_t>(numerator(q));
}

IntVector primitive(IntVector v) {
    std::int64_t g = 0;
    for (auto x : v) g = std::gcd(g, x);
    if (g > 1) {
        for (auto& x : v) x /= g;
    }
    return v;
}

// Generalized cross product of m-1 vectors in Z^m.
IntVector normal_of(const std::vector<IntVector>& rows, std::size_t m) {
    IntVector n(m);
    for (std::size_t i = 0; i < m; ++i) {
        Matrix minor;
        for (const auto& r : rows) {
            RationalVector row;
            for (std::size_t k = 0; k < m; ++k) {
                if (k != i) row.push_back(r[k]);
            }
            minor.push_back(std::move(row));
        }
        const Rational d = determinant(std::move(minor));
        n[i] = (i % 2 == 0 ? 1 : -1) * to_int(d);
    }
    return n;
}

void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& fn) {
    if (k > n) return;
    std::vector<std::size_t> idx(k);
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        fn(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

std::string format(const RationalVector& v) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ')';
    return os.str();
}

// Columns of a unimodular V with gamma V = e_1.
std::vector<IntVector> unimodular_basis(const IntVector& gamma) {
    const std::size_t m = gamma.size();
    std::vector<IntVector> cols(m, IntVector(m, 0));
    for (std::size_t i = 0; i < m; ++i) cols[i][i] = 1;
    IntVector g = gamma;
    while (true) {
        std::size_t pivot = m;
        for (std::size_t i = 0; i < m; ++i) {
            if (g[i] != 0 && (pivot == m || std::abs(g[i]) < std::abs(g[pivot]))) pivot = i;
        }
        bool reduced = true;
        for (std::size_t j = 0; j < m; ++j) {
            if (j == pivot || g[j] == 0) continue;
            reduced = false;
            const std::int64_t q = g[j] / g[pivot];
            g[j] -= q * g[pivot];
            for (std::size_t r = 0; r < m; ++r) cols[j][r] -= q * cols[pivot][r];
        }
        if (reduced) {
            if (std::abs(g[pivot]) != 1) throw DomainError("Gorenstein covector must be primitive");
            if (g[pivot] < 0) {
                for (auto& x : cols[pivot]) x = -x;
            }
            std::swap(cols[0], cols[pivot]);
            return cols;
        }
    }
}

// Inverse of the integer matrix with the given columns (det +-1).
std::vector<IntVector> unimodular_inverse(const std::vector<IntVector>& cols) {
    const std::size_t m = cols.size();
    std::vector<IntVector> inv(m, IntVector(m));
    for (std::size_t j = 0; j < m; ++j) {
        Matrix a(m, RationalVector(m));
        for (std::size_t r = 0; r < m; ++r) {
            for (std::size_t c = 0; c < m; ++c) a[r][c] = cols[c][r];
        }
        RationalVector e(m, 0);
        e[j] = 1;
        const auto x = solve(std::move(a), std::move(e));
        for (std::size_t r = 0; r < m; ++r) inv[r][j] = to_int((*x)[r]);
    }
    return inv;
}

// ---- exact polytope volumes in dimension 2 and 3 ---------------------------

struct RHalfspace {
    RationalVector a;  ///< <a, y> >= b
    Rational b;
};

struct LexLess {
    bool operator()(const RationalVector& x, const RationalVector& y) const {
        return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end());
    }
};

std::vector<RationalVector> polytope_vertices(const std::vector<RHalfspace>& hs, std::size_t m) {
    std::set<RationalVector, LexLess> found;
    for_each_subset(hs.size(), m, [&](const std::vector<std::size_t>& idx) {
        Matrix a;
        RationalVector b;
        for (std::size_t i : idx) {
            a.push_back(hs[i].a);
            b.push_back(hs[i].b);
        }
        auto x = solve(std::move(a), std::move(b));
        if (!x) return;
        for (const auto& h : hs) {
            if (dot(h.a, *x) < h.b) return;
        }
        found.insert(*x);
    });
    return {found.begin(), found.end()};
}

// Counter-clockwise order of planar points (x, y) around the origin.
bool angle_less(const Rational& x1, const Rational& y1, const Rational& x2, const Rational& y2) {
    auto half = [](const Rational& x, const Rational& y) { return y < 0 || (y == 0 && x < 0) ? 1 : 0; };
    const int h1 = half(x1, y1);
    const int h2 = half(x2, y2);
    if (h1 != h2) return h1 < h2;
    return x1 * y2 - y1 * x2 > 0;
}

RationalVector centroid(const std::vector<RationalVector>& pts) {
    RationalVector c(pts.front().size(), 0);
    for (const auto& p : pts) {
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += p[i];
    }
    for (auto& x : c) x /= static_cast<long long>(pts.size());
    return c;
}

RationalVector minus(const RationalVector& a, const RationalVector& b) {
    RationalVector d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
    return d;
}

RationalVector cross(const RationalVector& a, const RationalVector& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Rational polytope_volume(const std::vector<RHalfspace>& hs, std::size_t m) {
    const auto verts = polytope_vertices(hs, m);
    if (verts.size() < m + 1) return 0;
    const RationalVector c = centroid(verts);
    if (m == 2) {
        std::vector<RationalVector> p;
        for (const auto& v : verts) p.push_back(minus(v, c));
        std::sort(p.begin(), p.end(), [](const auto& u, const auto& v) { return angle_less(u[0], u[1], v[0], v[1]); });
        Rational twice = 0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            const auto& u = p[i];
            const auto& v = p[(i + 1) % p.size()];
            twice += u[0] * v[1] - u[1] * v[0];
        }
        return abs(twice) / 2;
    }
    if (m != 3) throw UnsupportedError("polytope volumes are implemented for dimension 2 and 3");
    std::set<std::vector<std::size_t>> seen;
    Rational six = 0;
    for (const auto& h : hs) {
        std::vector<std::size_t> on;
        for (std::size_t i = 0; i < verts.size(); ++i) {
            if (dot(h.a, verts[i]) == h.b) on.push_back(i);
        }
        if (on.size() < 3 || !seen.insert(on).second) continue;
        std::vector<RationalVector> face;
        for (std::size_t i : on) face.push_back(verts[i]);
        const RationalVector fc = centroid(face);
        const RationalVector r = minus(face.front(), fc);
        const RationalVector s = cross(h.a, r);
        std::vector<std::pair<Rational, Rational>> planar;
        std::vector<std::size_t> order(face.size());
        std::iota(order.begin(), order.end(), 0);
        for (const auto& f : face) {
            const auto d = minus(f, fc);
            planar.emplace_back(dot(d, r), dot(d, s));
        }
        std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
            return angle_less(planar[i].first, planar[i].second, planar[j].first, planar[j].second);
        });
        const RationalVector p0 = minus(face[order[0]], c);
        for (std::size_t k = 1; k + 1 < order.size(); ++k) {
            const RationalVector p1 = minus(face[order[k]], c);
            const RationalVector p2 = minus(face[order[k + 1]], c);
            six += abs(dot(p0, cross(p1, p2)));
        }
    }
    return six / 6;
}

Rational exact(double x) {
    if (!std::isfinite(x)) throw DomainError("support values must be finite");
    return Rational(x);
}

RationalVector exact_values(const FanTriangulation& tri, std::span<const double> values) {
    if (values.size() != tri.rays.size()) throw DomainError("need one support value per ray");
    RationalVector out;
    for (double v : values) out.push_back(exact(v));
    return out;
}

Matrix simplex_rows(const FanTriangulation& tri, const std::vector<std::size_t>& s) {
    Matrix rows;
    for (std::size_t i : s) rows.push_back(to_rational(tri.rays[i]));
    return rows;
}

RationalVector linear_form(const FanTriangulation& tri, const std::vector<std::size_t>& s, const RationalVector& lam) {
    RationalVector b;
    for (std::size_t i : s) b.push_back(lam[i]);
    auto l = solve(simplex_rows(tri, s), std::move(b));
    if (!l) throw DomainError("degenerate cone: generators are linearly dependent");
    return *l;
}

std::vector<Rational> face_volumes_exact(const FanTriangulation& tri, const RationalVector& lam) {
    std::vector<RationalVector> forms;
    for (const auto& s : tri.simplices) forms.push_back(linear_form(tri, s, lam));
    std::vector<Rational> out;
    for (std::size_t j = 0; j < tri.rays.size(); ++j) {
        if (!tri.interior[j]) continue;
        const RationalVector u = to_rational(tri.rays[j]);
        const Rational norm2 = dot(u, u);
        if (tri.dim == 2) {
            std::vector<std::size_t> star;
            for (std::size_t k = 0; k < tri.simplices.size(); ++k) {
                const auto& s = tri.simplices[k];
                if (std::find(s.begin(), s.end(), j) != s.end()) star.push_back(k);
            }
            if (star.size() != 2) throw UnsupportedError("interior ray without two adjacent cones");
            const auto e = minus(forms[star[1]], forms[star[0]]);
            out.push_back(abs(u[0] * e[1] - u[1] * e[0]) / norm2);
            continue;
        }
        // Walk the link of j: each ccw triangle (j, a, b) sends a to b.
        std::map<std::size_t, std::pair<std::size_t, std::size_t>> next;  // a -> (b, simplex)
        for (std::size_t k = 0; k < tri.simplices.size(); ++k) {
            const auto& s = tri.simplices[k];
            for (std::size_t r = 0; r < 3; ++r) {
                if (s[r] == j) next[s[(r + 1) % 3]] = {s[(r + 2) % 3], k};
            }
        }
        if (next.empty()) throw UnsupportedError("interior ray outside the triangulation");
        std::vector<RationalVector> polygon;
        std::size_t a = next.begin()->first;
        for (std::size_t step = 0; step < next.size(); ++step) {
            const auto it = next.find(a);
            if (it == next.end()) throw UnsupportedError("open star around an interior ray");
            polygon.push_back(forms[it->second.second]);
            a = it->second.first;
        }
        Rational twice = 0;
        for (std::size_t k = 1; k + 1 < polygon.size(); ++k) {
            twice += dot(u, cross(minus(polygon[k], polygon[0]), minus(polygon[k + 1], polygon[0])));
        }
        out.push_back(abs(twice) / (2 * norm2));
    }
    return out;
}

Rational complement_volume_exact(const FanTriangulation& tri, const RationalVector& lam) {
    const std::size_t m = tri.dim;
    RationalVector xi(m, 0);
    for (const auto& r : tri.rays) {
        for (std::size_t i = 0; i < m; ++i) xi[i] += r[i];
    }
    std::vector<RHalfspace> cone;
    std::vector<RHalfspace> shifted;
    for (std::size_t j = 0; j < tri.rays.size(); ++j) {
        cone.push_back({to_rational(tri.rays[j]), 0});
        shifted.push_back({to_rational(tri.rays[j]), lam[j]});
    }
    // Truncate both by <xi, y> <= T beyond every vertex of C_h.
    Rational top = 1;
    for (const auto& v : polytope_vertices(shifted, m)) top = std::max(top, Rational(dot(xi, v) + 1));
    RationalVector neg(m);
    for (std::size_t i = 0; i < m; ++i) neg[i] = -xi[i];
    cone.push_back({neg, -top});
    shifted.push_back({neg, -top});
    return polytope_volume(cone, m) - polytope_volume(shifted, m);
}

double factorial(std::size_t n) {
    double f = 1.0;
    for (std::size_t i = 2; i <= n; ++i) f *= static_cast<double>(i);
    return f;
}

} // namespace

// ---- cone -------------------------------------------------------------------

ToricCone::ToricCone(std::size_t dim, std::vector<IntVector> rays) : dim_(dim), rays_(std::move(rays)) {
    if (dim_ < 2) throw DomainError("toric cones need dimension m >= 2");
    if (rays_.empty()) throw DomainError("toric cone needs at least one ray");
    std::set<IntVector> distinct;
    Matrix rows;
    for (const auto& r : rays_) {
        if (r.size() != dim_) throw DomainError("ray has the wrong dimension");
        std::int64_t g = 0;
        for (auto x : r) g = std::gcd(g, x);
        if (g != 1) throw DomainError("rays must be primitive lattice vectors");
        if (!distinct.insert(r).second) throw DomainError("duplicate ray");
        rows.push_back(to_rational(r));
    }
    if (rank(rows) != dim_) throw DomainError("rays must span R^m");

    std::set<IntVector> normals;
    for_each_subset(rays_.size(), dim_ - 1, [&](const std::vector<std::size_t>& idx) {
        std::vector<IntVector> sub;
        for (std::size_t i : idx) sub.push_back(rays_[i]);
        IntVector n = normal_of(sub, dim_);
        if (std::all_of(n.begin(), n.end(), [](auto x) { return x == 0; })) return;
        n = primitive(n);
        bool pos = true;
        bool neg = true;
        for (const auto& r : rays_) {
            const auto v = dot(n, r);
            pos = pos && v >= 0;
            neg = neg && v <= 0;
        }
        if (neg && !pos) {
            for (auto& x : n) x = -x;
        }
        if (pos || neg) normals.insert(n);
    });
    normals_.assign(normals.begin(), normals.end());
    xi_.assign(dim_, 0);
    for (const auto& n : normals_) {
        for (std::size_t i = 0; i < dim_; ++i) xi_[i] += n[i];
    }
    for (const auto& r : rays_) {
        if (dot(xi_, r) <= 0) throw DomainError("ray cone is not strictly convex (it contains a line)");
    }
}

bool ToricCone::contains(const IntVector& x, bool strict) const {
    if (x.size() != dim_) throw DomainError("point has the wrong dimension");
    for (const auto& n : normals_) {
        const auto v = dot(n, x);
        if (v < 0 || (strict && v == 0)) return false;
    }
    return true;
}

// ---- Gorenstein -------------------------------------------------------------

std::string GorensteinCertificate::describe() const {
    std::ostringstream os;
    os << "rays {";
    for (std::size_t i = 0; i < basis.size(); ++i) os << (i ? "," : "") << basis[i];
    os << "} force gamma = " << format(forced);
    if (ray) {
        os << " but gamma(u_" << *ray << ") = " << value;
    } else if (non_integral) {
        os << ", which is not integral";
    }
    return os.str();
}

GorensteinData gorenstein_covector(const ToricCone& cone) {
    const std::size_t m = cone.dim();
    Matrix basis_rows;
    std::vector<std::size_t> basis;
    for (std::size_t j = 0; j < cone.rays().size() && basis.size() < m; ++j) {
        auto trial = basis_rows;
        trial.push_back(to_rational(cone.rays()[j]));
        if (rank(trial) > basis_rows.size()) {
            basis_rows = std::move(trial);
            basis.push_back(j);
        }
    }
    const auto gamma = solve(basis_rows, RationalVector(m, 1));
    GorensteinData out;
    GorensteinCertificate cert;
    cert.basis = basis;
    cert.forced = *gamma;
    for (std::size_t j = 0; j < cone.rays().size(); ++j) {
        const Rational v = dot(*gamma, to_rational(cone.rays()[j]));
        if (v != 1) {
            cert.ray = j;
            cert.value = v;
            out.certificate = cert;
            return out;
        }
    }
    IntVector g;
    for (const auto& x : *gamma) {
        if (denominator(x) != 1) {
            cert.non_integral = true;
            out.certificate = cert;
            return out;
        }
        g.push_back(static_cast<std::int64_t>(numerator(x)));
    }
    out.covector = g;
    return out;
}

// ---- cross-section ----------------------------------------------------------

std::size_t CrossSection::interior_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [](const auto& p) { return p.interior; }));
}

CrossSection cross_section(const ToricCone& cone, const GorensteinData& data) {
    if (!data.covector) throw PreconditionError("cross-section needs a Gorenstein covector");
    const std::size_t m = cone.dim();
    CrossSection out;
    out.dim = m;
    out.gamma = *data.covector;
    const auto cols = unimodular_basis(out.gamma);
    const auto inv = unimodular_inverse(cols);
    out.origin = cols[0];
    out.basis.assign(cols.begin() + 1, cols.end());
    auto coords_of = [&](const IntVector& x) {
        IntVector c(m - 1);
        for (std::size_t i = 1; i < m; ++i) c[i - 1] = dot(inv[i], x);
        return c;
    };
    out.vertices = cone.rays();
    for (const auto& r : cone.rays()) out.vertex_coords.push_back(coords_of(r));

    IntVector lo = cone.rays().front();
    IntVector hi = lo;
    for (const auto& r : cone.rays()) {
        for (std::size_t i = 0; i < m; ++i) {
            lo[i] = std::min(lo[i], r[i]);
            hi[i] = std::max(hi[i], r[i]);
        }
    }
    double box = 1.0;
    for (std::size_t i = 0; i < m; ++i) box *= static_cast<double>(hi[i] - lo[i] + 1);
    if (box > 5e7) throw CapacityError("cross-section bounding box too large to enumerate");
    IntVector x = lo;
    while (true) {
        if (dot(out.gamma, x) == 1 && cone.contains(x)) {
            LatticePoint p;
            p.ambient = x;
            p.coords = coords_of(x);
            p.interior = cone.contains(x, true);
            const auto it = std::find(cone.rays().begin(), cone.rays().end(), x);
            if (it != cone.rays().end()) p.ray = static_cast<std::size_t>(it - cone.rays().begin());
            out.points.push_back(std::move(p));
        }
        std::size_t i = m;
        while (i > 0 && x[i - 1] == hi[i - 1]) {
            x[i - 1] = lo[i - 1];
            --i;
        }
        if (i == 0) break;
        ++x[i - 1];
    }
    return out;
}

CrossSection cross_section(const ToricCone& cone) {
    return cross_section(cone, gorenstein_covector(cone));
}

// ---- triangulation ----------------------------------------------------------

std::size_t FanTriangulation::interior_count() const noexcept {
    return static_cast<std::size_t>(std::count(interior.begin(), interior.end(), true));
}

std::optional<std::size_t> FanTriangulation::index_of(const IntVector& ray) const {
    const auto it = std::find(rays.begin(), rays.end(), ray);
    if (it == rays.end()) return std::nullopt;
    return static_cast<std::size_t>(it - rays.begin());
}

namespace {

std::int64_t orient(const IntVector& a, const IntVector& b, const IntVector& c) {
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

using Tri = std::array<std::size_t, 3>;

Tri ccw(const FanTriangulation& t, Tri s) {
    if (orient(t.coords[s[0]], t.coords[s[1]], t.coords[s[2]]) < 0) std::swap(s[1], s[2]);
    return s;
}

void triangulate_polygon(FanTriangulation& t) {
    const std::size_t n = t.rays.size();
    // Boundary cycle, ccw around the (scaled) vertex centroid.
    IntVector c(2, 0);
    for (std::size_t i = 0; i < n; ++i) {
        c[0] += t.coords[i][0];
        c[1] += t.coords[i][1];
    }
    const auto scale = static_cast<std::int64_t>(n);
    std::vector<std::size_t> boundary;
    for (std::size_t i = 0; i < n; ++i) {
        if (!t.interior[i]) boundary.push_back(i);
    }
    auto rel = [&](std::size_t i) {
        return std::pair(Rational(t.coords[i][0] * scale - c[0]), Rational(t.coords[i][1] * scale - c[1]));
    };
    std::sort(boundary.begin(), boundary.end(), [&](std::size_t i, std::size_t j) {
        const auto [x1, y1] = rel(i);
        const auto [x2, y2] = rel(j);
        return angle_less(x1, y1, x2, y2);
    });
    const std::size_t b = boundary.size();

    std::vector<Tri> tris;
    std::vector<bool> used(n, false);
    const auto first_interior = std::find(t.interior.begin(), t.interior.end(), true);
    if (first_interior != t.interior.end()) {
        const auto ci = static_cast<std::size_t>(first_interior - t.interior.begin());
        for (std::size_t k = 0; k < b; ++k) tris.push_back(ccw(t, {ci, boundary[k], boundary[(k + 1) % b]}));
        used[ci] = true;
        for (auto i : boundary) used[i] = true;
    } else {
        std::vector<std::size_t> corners;
        for (std::size_t k = 0; k < b; ++k) {
            const auto& p = t.coords[boundary[(k + b - 1) % b]];
            const auto& q = t.coords[boundary[k]];
            const auto& r = t.coords[boundary[(k + 1) % b]];
            if (orient(p, q, r) != 0) corners.push_back(boundary[k]);
        }
        for (std::size_t k = 1; k + 1 < corners.size(); ++k) {
            tris.push_back(ccw(t, {corners[0], corners[k], corners[k + 1]}));
        }
        for (auto i : corners) used[i] = true;
    }
    // Insert the remaining points; a point on an edge splits both neighbours.
    for (std::size_t p = 0; p < n; ++p) {
        if (used[p]) continue;
        const auto& x = t.coords[p];
        std::vector<Tri> next;
        for (const auto& s : tris) {
            const std::int64_t o[3] = {orient(t.coords[s[0]], t.coords[s[1]], x),
                                       orient(t.coords[s[1]], t.coords[s[2]], x),
                                       orient(t.coords[s[2]], t.coords[s[0]], x)};
            if (o[0] < 0 || o[1] < 0 || o[2] < 0) {
                next.push_back(s);
                continue;
            }
            bool split = false;
            for (std::size_t e = 0; e < 3; ++e) {
                if (o[e] == 0) {
                    const std::size_t a = s[e];
                    const std::size_t bb = s[(e + 1) % 3];
                    const std::size_t opp = s[(e + 2) % 3];
                    next.push_back({a, p, opp});
                    next.push_back({p, bb, opp});
                    split = true;
                }
            }
            if (!split) {
                next.push_back({s[0], s[1], p});
                next.push_back({s[1], s[2], p});
                next.push_back({s[2], s[0], p});
            }
        }
        tris = std::move(next);
        used[p] = true;
    }
    for (const auto& s : tris) t.simplices.push_back({s[0], s[1], s[2]});
}

} // namespace

FanTriangulation maximal_triangulation(const CrossSection& section) {
    const std::size_t pdim = section.dim - 1;
    if (pdim >= 3) throw UnsupportedError("triangulation is implemented for polytopes of dimension <= 2");
    FanTriangulation t;
    t.dim = section.dim;
    t.input_rays = section.vertices.size();
    auto add = [&](const LatticePoint& p) {
        t.rays.push_back(p.ambient);
        t.coords.push_back(p.coords);
        t.interior.push_back(p.interior);
    };
    for (std::size_t j = 0; j < section.vertices.size(); ++j) {
        const auto it = std::find_if(section.points.begin(), section.points.end(),
                                     [&](const auto& p) { return p.ray == j; });
        if (it == section.points.end()) throw UnsupportedError("ray missing from the cross-section");
        add(*it);
    }
    for (const auto& p : section.points) {
        if (!p.ray && !p.interior) add(p);
    }
    for (const auto& p : section.points) {
        if (!p.ray && p.interior) add(p);
    }

    if (pdim == 1) {
        std::vector<std::size_t> order(t.rays.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return t.coords[a][0] < t.coords[b][0]; });
        for (std::size_t k = 0; k + 1 < order.size(); ++k) t.simplices.push_back({order[k], order[k + 1]});
    } else {
        triangulate_polygon(t);
    }

    t.maximal = true;
    t.basic = true;
    for (const auto& s : t.simplices) {
        Matrix diff;
        for (std::size_t k = 1; k < s.size(); ++k) {
            RationalVector row;
            for (std::size_t i = 0; i < pdim; ++i) row.push_back(t.coords[s[k]][i] - t.coords[s[0]][i]);
            diff.push_back(std::move(row));
        }
        const auto det = to_int(determinant(std::move(diff)));
        t.determinants.push_back(det);
        if (std::abs(det) != 1) t.basic = false;
        // No lattice point of P other than the vertices may lie in the simplex.
        for (std::size_t q = 0; q < t.rays.size(); ++q) {
            if (std::find(s.begin(), s.end(), q) != s.end()) continue;
            const auto& x = t.coords[q];
            bool inside = true;
            if (pdim == 1) {
                const auto lo = std::min(t.coords[s[0]][0], t.coords[s[1]][0]);
                const auto hi = std::max(t.coords[s[0]][0], t.coords[s[1]][0]);
                inside = x[0] >= lo && x[0] <= hi;
            } else {
                for (std::size_t e = 0; e < 3; ++e) {
                    if (orient(t.coords[s[e]], t.coords[s[(e + 1) % 3]], x) < 0) inside = false;
                }
            }
            if (inside) t.maximal = false;
        }
    }
    return t;
}

// ---- support functions ------------------------------------------------------

SupportCheck support_function_check(const FanTriangulation& tri, std::span<const double> values) {
    const RationalVector lam = exact_values(tri, values);
    SupportCheck out;
    for (std::size_t k = 0; k < tri.simplices.size(); ++k) {
        const auto& s = tri.simplices[k];
        const RationalVector l = linear_form(tri, s, lam);
        for (std::size_t j = 0; j < tri.rays.size(); ++j) {
            if (std::find(s.begin(), s.end(), j) != s.end()) continue;
            const Rational slack = dot(l, to_rational(tri.rays[j])) - lam[j];
            if (slack < 0) out.violations.push_back({k, j, static_cast<double>(slack)});
            if (slack == 0) out.equalities.push_back({k, j, 0.0});
        }
        out.forms.push_back(l);
    }
    out.convex = out.violations.empty();
    out.strictly_convex = out.convex && out.equalities.empty();
    out.compactly_supported = true;
    for (std::size_t j = 0; j < tri.rays.size(); ++j) {
        if (!tri.interior[j] && lam[j] != 0) out.compactly_supported = false;
    }
    return out;
}

std::vector<double> values_by_ray(const FanTriangulation& tri, const std::map<IntVector, double>& values) {
    std::vector<double> out(tri.rays.size());
    std::vector<bool> seen(tri.rays.size(), false);
    for (const auto& [ray, v] : values) {
        const auto j = tri.index_of(ray);
        if (!j) throw DomainError("support value given for a vector that is not a ray of the fan");
        out[*j] = v;
        seen[*j] = true;
    }
    for (bool s : seen) {
        if (!s) throw DomainError("support values must cover every ray of the fan");
    }
    return out;
}

KahlerClass kahler_class(const FanTriangulation& tri, std::span<const double> values) {
    const auto check = support_function_check(tri, values);
    if (!check.convex) throw PreconditionError("support function is not convex");
    KahlerClass out;
    out.kahler = check.strictly_convex;
    out.compactly_supported = check.compactly_supported;
    for (std::size_t j = 0; j < tri.rays.size(); ++j) {
        out.moment_set.push_back({tri.rays[j], values[j]});
        if (!tri.interior[j]) continue;
        out.exceptional.push_back(j);
        out.lambda.push_back(values[j]);
        out.coefficients.push_back(-2.0 * std::numbers::pi * values[j]);
    }
    return out;
}

double complement_volume(const FanTriangulation& tri, std::span<const double> values) {
    return static_cast<double>(complement_volume_exact(tri, exact_values(tri, values)));
}

std::vector<double> exceptional_face_volumes(const FanTriangulation& tri, std::span<const double> values) {
    std::vector<double> out;
    for (const auto& v : face_volumes_exact(tri, exact_values(tri, values))) out.push_back(static_cast<double>(v));
    return out;
}

double invariant_A(const FanTriangulation& tri, std::span<const double> values, double omega, AMethod method) {
    if (!(omega > 0.0) || !std::isfinite(omega)) throw DomainError("link volume must be positive");
    const auto check = support_function_check(tri, values);
    if (!check.compactly_supported) throw PreconditionError("A is defined for compactly supported classes only");
    if (!check.strictly_convex) throw PreconditionError("A needs a strictly convex support function");
    if (tri.interior_count() == 0) return 0.0;
    const RationalVector lam = exact_values(tri, values);
    const std::size_t m = tri.dim;
    const double two_pi = 2.0 * std::numbers::pi;
    const double norm = (static_cast<double>(m) - 1.0) * factorial(m) * omega;
    if (method == AMethod::divisor_sum) {
        const auto faces = face_volumes_exact(tri, lam);
        Rational sum = 0;
        std::size_t f = 0;
        for (std::size_t j = 0; j < tri.rays.size(); ++j) {
            if (tri.interior[j]) sum += lam[j] * faces[f++];
        }
        const double divisor_scale = std::pow(two_pi, static_cast<double>(m) - 1.0) * factorial(m - 1);
        return -two_pi * divisor_scale * static_cast<double>(sum) / norm;
    }
    const Rational vol = complement_volume_exact(tri, lam);
    return -std::pow(two_pi, static_cast<double>(m)) * factorial(m) * static_cast<double>(vol) / norm;
}

double quotient_link_volume(std::size_t m, std::size_t group_order) {
    if (m < 1 || group_order < 1) throw DomainError("quotient link needs m >= 1 and a nontrivial order");
    return 2.0 * std::pow(std::numbers::pi, static_cast<double>(m)) / factorial(m - 1) /
           static_cast<double>(group_order);
}

} // namespace conic
