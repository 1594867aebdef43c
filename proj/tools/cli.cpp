#include "cli.hpp"

#include "conic/cone.hpp"
#include "conic/covering.hpp"
#include "conic/errors.hpp"
#include "conic/graph.hpp"
#include "conic/hypersurface.hpp"
#include "conic/spectral.hpp"
#include "conic/toric.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

namespace conic::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string in;
    std::string out;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    double tol_rel = 0.0;  ///< 0: command default
    std::size_t enum_cap = 22;
};

// JSON has no infinities; non-finite values travel as strings.
json num(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

json read_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InputError("cannot open " + path);
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw InputError(path + ": malformed JSON (" + e.what() + ")");
    }
}

json config_json(const std::string& command, const Common& c, json extra) {
    json j = {{"command", command},     {"in", c.in},           {"seed", c.seed},
              {"workers", c.workers},   {"tol_rel", c.tol_rel}, {"enum_cap", c.enum_cap}};
    for (auto& [k, v] : extra.items()) j[k] = v;
    return j;
}

// ---- input formats ----------------------------------------------------------

WeightedGraph read_graph(const json& j) {
    if (!j.contains("vertices") || !j["vertices"].is_array()) throw InputError("graph needs a vertices array");
    WeightedGraph g;
    std::map<std::int64_t, std::size_t> index;
    for (const auto& v : j["vertices"]) {
        const auto id = v.at("id").get<std::int64_t>();
        if (index.count(id)) throw InputError("duplicate vertex id " + std::to_string(id));
        index[id] = g.add_vertex(v.at("measure").get<double>(), id);
    }
    if (g.empty()) throw InputError("graph has no vertices");
    for (const auto& e : j.value("edges", json::array())) {
        const auto a = e.at(0).get<std::int64_t>();
        const auto b = e.at(1).get<std::int64_t>();
        if (!index.count(a) || !index.count(b)) throw InputError("edge references an unknown vertex");
        g.add_edge(index[a], index[b]);
    }
    return g;
}

GoodCovering read_covering(const json& j) {
    std::vector<double> measures;
    std::vector<std::int64_t> ids;
    for (const auto& a : j.at("atoms")) {
        ids.push_back(a.at("id").get<std::int64_t>());
        measures.push_back(a.at("measure").get<double>());
    }
    std::map<std::int64_t, std::size_t> index;
    for (std::size_t i = 0; i < ids.size(); ++i) index[ids[i]] = i;
    auto at = [&](std::int64_t id) {
        const auto it = index.find(id);
        if (it == index.end()) throw InputError("unknown atom id " + std::to_string(id));
        return it->second;
    };
    std::vector<std::vector<std::size_t>> adjacency(ids.size());
    for (const auto& e : j.value("edges", json::array())) {
        const auto a = at(e.at(0).get<std::int64_t>());
        const auto b = at(e.at(1).get<std::int64_t>());
        adjacency[a].push_back(b);
        adjacency[b].push_back(a);
    }
    auto set_of = [&](const json& list) {
        std::vector<std::size_t> s;
        for (const auto& id : list) s.push_back(at(id.get<std::int64_t>()));
        return make_atom_set(std::move(s));
    };
    GoodCovering cov;
    cov.space = std::make_shared<AtomSpace>(measures, adjacency, ids);
    for (const auto& c : j.at("cells")) cov.cells.push_back({set_of(c.at("U")), set_of(c.at("Ustar")), set_of(c.at("Usharp"))});
    cov.target = set_of(j.at("A"));
    cov.target_outer = set_of(j.at("Asharp"));
    return cov;
}

ConeLink read_link(const json& j, const fs::path& base) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "circle") return ConeLink::circle(j.at("length").get<double>());
    if (kind == "sphere") return ConeLink::round_sphere(j.value("subdivisions", 2u));
    if (kind == "graph") {
        json g = j.contains("file") ? read_json((base / j.at("file").get<std::string>()).string()) : j;
        std::vector<double> measures;
        for (const auto& v : g.at("vertices")) measures.push_back(v.at("measure").get<double>());
        std::vector<LinkEdge> edges;
        for (const auto& e : g.at("edges")) {
            edges.push_back({e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>(), e.at(2).get<double>(),
                             e.size() > 3 ? e.at(3).get<double>() : 0.0});
        }
        return ConeLink::graph(g.value("dimension", std::size_t{1}), std::move(measures), std::move(edges));
    }
    throw InputError("unknown link kind " + kind);
}

json link_json(const json& j) { return j.at("link"); }

DiscretizedCone read_cone(const std::string& path) {
    const json j = read_json(path);
    const fs::path base = fs::path(path).parent_path();
    ConeSpec spec;
    spec.link = read_link(link_json(j), base);
    spec.r_min = j.value("r_min", 0.0);
    spec.r_max = j.value("r_max", 8.0);
    spec.radial_steps = j.value("radial_steps", std::size_t{64});
    spec.angular_steps = j.value("angular_steps", std::size_t{64});
    const auto spacing = j.value("spacing", std::string("uniform"));
    if (spacing != "uniform" && spacing != "geometric") throw InputError("spacing must be uniform or geometric");
    spec.spacing = spacing == "geometric" ? RadialSpacing::geometric : RadialSpacing::uniform;
    return DiscretizedCone(spec);
}

json grid_json(const DiscretizedCone& cone, const std::string& path) {
    const auto& s = cone.spec();
    return {{"spec", read_json(path)},
            {"nodes", cone.size()},
            {"dimension", cone.dimension()},
            {"has_apex", cone.has_apex()},
            {"r_min", s.r_min},
            {"r_max", s.r_max},
            {"total_measure", cone.total_measure()},
            {"exact_volume", cone.exact_volume()}};
}

std::size_t pick_source(const DiscretizedCone& cone, long source, double source_r) {
    if (source >= 0) {
        if (static_cast<std::size_t>(source) >= cone.size()) throw InputError("source vertex out of range");
        return static_cast<std::size_t>(source);
    }
    if (source_r < 0.0 && cone.has_apex()) return *cone.apex();
    return cone.nearest_vertex(source_r < 0.0 ? 1.0 : source_r, 0);
}

void emit(const Common& c, std::ostream& out, const std::string& text) {
    if (c.out.empty()) {
        out << text;
        return;
    }
    std::ofstream f(c.out);
    if (!f) throw InputError("cannot write " + c.out);
    f << text;
}

void emit_json(const Common& c, std::ostream& out, const json& j) { emit(c, out, j.dump(2) + "\n"); }

void write_csv(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw InputError("cannot write " + path);
    f << text;
}

void add_common(CLI::App* app, Common& c, bool needs_input) {
    auto* in = app->add_option("--in", c.in, "input JSON file")->check(CLI::ExistingFile);
    if (needs_input) in->required();
    app->add_option("--out", c.out, "write the report here instead of stdout");
    app->add_option("--seed", c.seed, "sampling seed");
    app->add_option("--workers", c.workers, "worker threads")->check(CLI::Range(1u, 256u));
    app->add_option("--tol-rel", c.tol_rel, "relative tolerance override")->check(CLI::PositiveNumber);
    app->add_option("--enum-cap", c.enum_cap, "largest graph for exact subset enumeration");
}

// ---- commands ---------------------------------------------------------------

struct GraphArgs {
    double nu = kInfiniteOrder;
};

int run_graph(const Common& c, const GraphArgs& a, std::ostream& out, std::ostream& err) {
    const WeightedGraph g = read_graph(read_json(c.in));
    EnumerationOptions eo{c.enum_cap, c.workers};
    const auto rep = cheeger_gap_report(g, eo);
    const auto cut = cheeger_cut(g, eo);
    json subset = json::array();
    for (auto i : cut.subset) subset.push_back(g.id(i));
    json j;
    j["config"] = config_json("graph", c, {{"nu", num(a.nu)}});
    j["vertices"] = g.size();
    j["edges"] = g.edge_count();
    j["h"] = num(rep.h);
    j["cheeger_cut"] = {{"subset", subset},
                        {"interior_measure", cut.interior_measure},
                        {"boundary_measure", cut.boundary_measure}};
    j["lambda"] = num(rep.lambda);
    j["m0"] = num(rep.m0);
    j["lower_ok"] = rep.lower_ok;
    j["upper_ok"] = rep.upper_ok;
    j["isoperimetric"] = {{"nu", num(a.nu)},
                          {"dirichlet", num(isoperimetric_constant(g, a.nu, IsoperimetricMode::dirichlet, eo))},
                          {"neumann", num(isoperimetric_constant(g, a.nu, IsoperimetricMode::neumann, eo))}};
    j["warnings"] = json::array();
    if (!rep.upper_ok) {
        std::ostringstream w;
        w << "upper bound lambda <= h does not hold (lambda = " << rep.lambda << ", h = " << rep.h << ")";
        err << "WARNING: " << w.str() << '\n';
        j["warnings"].push_back(w.str());
    }
    emit_json(c, out, j);
    return kOk;
}

struct CoverArgs {
    double sc = 0.0;
    double p = 2.0;
    double nu = kInfiniteOrder;
};

int run_cover(const Common& c, const CoverArgs& a, std::ostream& out, std::ostream&) {
    const GoodCovering cov = read_covering(read_json(c.in));
    const auto v = validate_covering(cov);
    json j;
    j["config"] = config_json("cover", c, {{"sc", a.sc}, {"p", a.p}, {"nu", num(a.nu)}});
    j["cells"] = cov.cells.size();
    j["valid"] = v.ok();
    j["q1"] = v.q1;
    j["q2"] = num(v.q2);
    j["witnesses"] = json::array();
    for (const auto& [pair, k] : v.witness) j["witnesses"].push_back({pair.first, pair.second, k});
    j["violations"] = json::array();
    for (const auto& x : v.violations) {
        j["violations"].push_back({{"condition", x.condition}, {"i", x.i}, {"j", x.j}, {"message", x.message}});
    }
    if (v.ok()) {
        const auto g = associated_graph(cov);
        json edges = json::array();
        for (const auto& [p, q] : g.edges()) edges.push_back({p, q});
        const double gap = spectral_gap(g);
        j["graph"] = {{"measures", std::vector<double>(g.measures().begin(), g.measures().end())},
                      {"edges", edges},
                      {"spectral_gap", num(gap)},
                      {"discrete_constant", num(gap > 0.0 ? 1.0 / gap : kInfiniteOrder)}};
        if (a.sc > 0.0 && gap > 0.0) {
            PatchingInput in{a.sc, 1.0 / gap, static_cast<int>(v.q1), v.q2, a.p, a.nu};
            j["patching"] = {{"dirichlet", num(patch_dirichlet(in))}, {"neumann", num(patch_neumann(in))}};
        }
    }
    emit_json(c, out, j);
    return kOk;
}

struct ConeArgs {
    std::string mode = "mixed";
    std::size_t samples = 100;
    double r_lo = 0.5;
    double r_hi = 2.0;
    double epsilon = 0.5;
    std::string csv;
};

SampleMode parse_mode(const std::string& s) {
    if (s == "anchored") return SampleMode::anchored;
    if (s == "remote") return SampleMode::remote;
    if (s == "mixed") return SampleMode::mixed;
    throw InputError("mode must be anchored, remote or mixed");
}

int run_cone(const Common& c, const ConeArgs& a, std::ostream& out, std::ostream&) {
    const auto cone = read_cone(c.in);
    DoublingOptions o;
    o.mode = parse_mode(a.mode);
    o.samples = a.samples;
    o.r_lo = a.r_lo;
    o.r_hi = a.r_hi;
    o.epsilon = a.epsilon;
    o.seed = c.seed;
    const auto scan = doubling_scan(cone, o);
    auto sample_json = [&](const DoublingSample& s) {
        return json{{"x", s.x},          {"radius", cone.radius(s.x)}, {"r", s.r},
                    {"ratio", s.ratio},  {"kind", to_string(s.kind)},  {"proof_case", s.proof_case}};
    };
    json j;
    j["config"] = config_json("cone", c,
                              {{"mode", a.mode}, {"samples", a.samples}, {"r_lo", a.r_lo}, {"r_hi", a.r_hi},
                               {"epsilon", a.epsilon}, {"csv", a.csv}});
    j["grid"] = grid_json(cone, c.in);
    j["doubling"] = {{"constant", scan.constant},
                     {"worst", sample_json(scan.worst)},
                     {"samples", scan.samples.size()},
                     {"clipped_excluded", scan.clipped_excluded}};
    if (!a.csv.empty()) {
        std::ostringstream csv;
        csv.precision(17);
        csv << "x,radius,r,ratio,kind,proof_case\n";
        for (const auto& s : scan.samples) {
            csv << s.x << ',' << cone.radius(s.x) << ',' << s.r << ',' << s.ratio << ',' << to_string(s.kind) << ','
                << s.proof_case << '\n';
        }
        write_csv(a.csv, csv.str());
    }
    emit_json(c, out, j);
    return kOk;
}

struct HeatArgs {
    std::vector<double> times{0.1, 0.5, 1.0};
    long source = -1;
    double source_r = -1.0;
    std::string csv;
};

json witness_json(const GaussianWitness& w) {
    return {{"t", w.t}, {"x", w.x}, {"y", w.y}, {"distance", w.distance}, {"value", num(w.value)}, {"normalized", num(w.normalized)}};
}

int run_heat(const Common& c, const HeatArgs& a, std::ostream& out, std::ostream&) {
    const auto cone = read_cone(c.in);
    const std::size_t x = pick_source(cone, a.source, a.source_r);
    HeatOptions ho;
    if (c.tol_rel > 0.0) ho.rel_tol = c.tol_rel;
    const auto run = heat_kernel(cone, x, a.times, ho);
    const auto fit = gaussian_fit(run.samples, cone);
    json j;
    j["config"] = config_json("heat", c, {{"times", a.times}, {"source", a.source}, {"source_r", a.source_r}, {"csv", a.csv}});
    j["grid"] = grid_json(cone, c.in);
    j["source"] = {{"vertex", x}, {"radius", cone.radius(x)}};
    j["tolerances"] = {{"rel_tol", ho.rel_tol}, {"probe_floor", ho.probe_floor}, {"max_refinements", ho.max_refinements}};
    j["steps_per_segment"] = run.steps_per_segment;
    j["achieved_change"] = run.achieved_change;
    j["converged"] = run.converged;
    j["fit"] = {{"c1", num(fit.c1)},
                {"C1", num(fit.C1)},
                {"c2", num(fit.c2)},
                {"C2", num(fit.C2)},
                {"pass", fit.pass},
                {"reason", fit.reason},
                {"samples_used", fit.samples_used},
                {"lower_witness", witness_json(fit.lower_witness)},
                {"upper_witness", witness_json(fit.upper_witness)}};
    if (!a.csv.empty()) {
        std::ostringstream csv;
        csv.precision(17);
        csv << "t,node,radius,distance,h\n";
        for (const auto& s : run.samples) {
            for (std::size_t y = 0; y < cone.size(); ++y) {
                csv << s.t << ',' << y << ',' << cone.radius(y) << ',' << cone.distance(x, y) << ',' << s.values[y] << '\n';
            }
        }
        write_csv(a.csv, csv.str());
    }
    emit_json(c, out, j);
    return kOk;
}

struct GreenArgs {
    long source = -1;
    double source_r = -1.0;
    bool integrated = false;
    std::string csv;
};

int run_green(const Common& c, const GreenArgs& a, std::ostream& out, std::ostream&) {
    const auto cone = read_cone(c.in);
    const std::size_t x = pick_source(cone, a.source, a.source_r);
    const auto g = greens_function(cone, x);
    // G ~ d^{2-n} / ((n-2) Vol(S)) for the flat model.
    const double norm = (static_cast<double>(cone.dimension()) - 2.0) * cone.link_mesh().volume();
    json j;
    j["config"] = config_json("green", c, {{"source", a.source}, {"source_r", a.source_r}, {"integrated", a.integrated}, {"csv", a.csv}});
    j["grid"] = grid_json(cone, c.in);
    j["source"] = {{"vertex", x}, {"radius", cone.radius(x)}};
    j["positive"] = g.positive;
    j["constant"] = g.constant;
    j["min_scaled"] = num(g.min_scaled);
    j["normalized_range"] = {num(g.min_scaled * norm), num(g.constant * norm)};
    j["witness"] = g.witness;
    j["interior_nodes"] = g.interior.size();
    if (a.integrated) {
        const double tol = c.tol_rel > 0.0 ? c.tol_rel : 1e-5;
        const auto ik = time_integrated_kernel(cone, x, tol);
        double worst = 0.0;
        for (auto y : g.interior) worst = std::max(worst, std::abs(ik.values[y] - g.values[y]) / g.values[y]);
        j["integrated"] = {{"final_time", ik.final_time}, {"steps", ik.steps}, {"tol", tol}, {"max_relative_difference", worst}};
    }
    if (!a.csv.empty()) {
        std::ostringstream csv;
        csv.precision(17);
        csv << "node,radius,distance,G\n";
        for (std::size_t y = 0; y < cone.size(); ++y) {
            csv << y << ',' << cone.radius(y) << ',' << cone.distance(x, y) << ',' << g.values[y] << '\n';
        }
        write_csv(a.csv, csv.str());
    }
    emit_json(c, out, j);
    return kOk;
}

IntVector parse_ray_key(const std::string& key) {
    try {
        return json::parse(key).get<IntVector>();
    } catch (const json::exception&) {
        throw InputError("support value key " + key + " is not an integer vector");
    }
}

json rational_vector(const RationalVector& v) {
    json j = json::array();
    for (const auto& x : v) j.push_back(static_cast<double>(x));
    return j;
}

int run_toric(const Common& c, std::ostream& out, std::ostream&) {
    const json in = read_json(c.in);
    const ToricCone cone(in.at("dim").get<std::size_t>(), in.at("rays").get<std::vector<IntVector>>());
    const auto data = gorenstein_covector(cone);
    json j;
    j["config"] = config_json("toric", c, {{"fan", in}});
    j["gorenstein"] = {{"covector", data.covector ? json(*data.covector) : json(nullptr)},
                       {"certificate", data.certificate ? json(data.certificate->describe()) : json(nullptr)}};
    if (!data.gorenstein()) {
        emit_json(c, out, j);
        return kOk;
    }
    const auto section = cross_section(cone, data);
    json points = json::array();
    for (const auto& p : section.points) points.push_back({{"ambient", p.ambient}, {"coords", p.coords}, {"interior", p.interior}});
    j["cross_section"] = {{"points", points},
                          {"interior_count", section.interior_count()},
                          {"boundary_count", section.boundary_count()}};
    const auto tri = maximal_triangulation(section);
    j["triangulation"] = {{"rays", tri.rays},
                          {"interior", tri.interior},
                          {"simplices", tri.simplices},
                          {"determinants", tri.determinants},
                          {"maximal", tri.maximal},
                          {"basic", tri.basic}};
    if (in.contains("support_values")) {
        std::map<IntVector, double> keyed;
        for (const auto& [k, v] : in["support_values"].items()) keyed[parse_ray_key(k)] = v.get<double>();
        const auto values = values_by_ray(tri, keyed);
        const auto check = support_function_check(tri, values);
        json forms = json::array();
        for (const auto& l : check.forms) forms.push_back(rational_vector(l));
        auto witnesses = [](const std::vector<ConvexityWitness>& ws) {
            json a = json::array();
            for (const auto& w : ws) a.push_back({{"simplex", w.simplex}, {"ray", w.ray}, {"slack", w.slack}});
            return a;
        };
        j["support"] = {{"values", values},
                        {"convex", check.convex},
                        {"strictly_convex", check.strictly_convex},
                        {"compactly_supported", check.compactly_supported},
                        {"forms", forms},
                        {"equalities", witnesses(check.equalities)},
                        {"violations", witnesses(check.violations)}};
        const auto k = kahler_class(tri, values);
        j["kahler_class"] = {{"exceptional_rays", k.exceptional},
                             {"lambda", k.lambda},
                             {"coefficients", k.coefficients},
                             {"compactly_supported", k.compactly_supported},
                             {"kahler", k.kahler}};
        if (in.contains("omega_link") || in.contains("group_order")) {
            const double omega = in.contains("omega_link")
                                     ? in["omega_link"].get<double>()
                                     : quotient_link_volume(cone.dim(), in["group_order"].get<std::size_t>());
            const double a = invariant_A(tri, values, omega, AMethod::divisor_sum);
            const double b = invariant_A(tri, values, omega, AMethod::polytope_volume);
            j["invariant_A"] = {{"omega_link", omega},
                                {"divisor_sum", a},
                                {"polytope_volume", b},
                                {"relative_difference", b != 0.0 ? std::abs(a - b) / std::abs(b) : std::abs(a)},
                                {"complement_volume", complement_volume(tri, values)},
                                {"face_volumes", exceptional_face_volumes(tri, values)}};
        }
    }
    emit_json(c, out, j);
    return kOk;
}

struct BpArgs {
    std::int64_t m = 3;
    std::string k_range = "3..12";
    std::string format = "csv";
    std::vector<std::int64_t> exponents;
};

int run_bp(const Common& c, const BpArgs& a, std::ostream& out, std::ostream&) {
    if (!a.exponents.empty()) {
        const auto p = brieskorn_pham(a.exponents);
        const auto d = weighted_degree(p);
        json j;
        j["config"] = config_json("bp", c, {{"exponents", a.exponents}});
        j["weights"] = p.weights();
        j["degree"] = d.degree;
        j["weight_sum"] = p.weight_sum();
        j["cy_link"] = cy_link_condition(p);
        emit_json(c, out, j);
        return kOk;
    }
    const auto dots = a.k_range.find("..");
    if (dots == std::string::npos) throw InputError("k-range must look like lo..hi");
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    try {
        lo = std::stoll(a.k_range.substr(0, dots));
        hi = std::stoll(a.k_range.substr(dots + 2));
    } catch (const std::exception&) {
        throw InputError("k-range must look like lo..hi");
    }
    if (hi < lo) throw InputError("k-range is empty");
    if (a.format == "csv") {
        emit(c, out, bp_table_csv(a.m, lo, hi));
        return kOk;
    }
    if (a.format != "json") throw InputError("format must be csv or json");
    json rows = json::array();
    for (std::int64_t k = lo; k <= hi; ++k) {
        const auto ch = bp_crepant_chain(a.m, k);
        rows.push_back({{"m", ch.m},
                        {"k", ch.k},
                        {"se_ok", ch.se_ok},
                        {"resolvable", ch.resolvable},
                        {"blowup_count", ch.blowup_count},
                        {"family_count", ch.family_count}});
    }
    json j;
    j["config"] = config_json("bp", c, {{"m", a.m}, {"k_range", a.k_range}, {"format", a.format}});
    j["rows"] = rows;
    emit_json(c, out, j);
    return kOk;
}

int run_report(const Common& c, std::ostream& out, std::ostream&) {
    const json in = read_json(c.in);
    const fs::path base = fs::path(c.in).parent_path();
    std::vector<std::vector<std::string>> jobs;
    for (const auto& a : in.at("analyses")) {
        auto args = a.at("args").get<std::vector<std::string>>();
        if (args.empty() || args.front() == "report") throw InputError("report entries need a non-report command");
        // Paths in the bundle are relative to the bundle file.
        for (std::size_t i = 0; i + 1 < args.size(); ++i) {
            if (args[i] == "--in" || args[i] == "--cone" || args[i] == "--fan") args[i + 1] = (base / args[i + 1]).string();
        }
        jobs.push_back(std::move(args));
    }
    std::vector<int> codes(jobs.size());
    std::vector<std::string> outs(jobs.size());
    std::vector<std::string> errs(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            std::ostringstream o;
            std::ostringstream e;
            codes[i] = run(jobs[i], o, e);
            outs[i] = o.str();
            errs[i] = e.str();
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < std::min<std::size_t>(c.workers, jobs.size()); ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    json results = json::array();
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        json r = {{"args", in["analyses"][i]["args"]}, {"exit_code", codes[i]}, {"stderr", errs[i]}};
        const auto parsed = json::parse(outs[i], nullptr, false);
        if (!parsed.is_discarded() && parsed.is_object()) {
            r["report"] = parsed;
        } else {
            r["text"] = outs[i];
        }
        results.push_back(std::move(r));
    }
    json j;
    j["config"] = config_json("report", c, {{"bundle", in}});
    j["results"] = results;
    emit_json(c, out, j);
    for (int code : codes) {
        if (code != kOk) return code;
    }
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Analyses of discretized metric cones, toric cones and hypersurface links", "conic"};
    app.require_subcommand(1);
    Common common;

    GraphArgs graph_args;
    auto* graph = app.add_subcommand("graph", "Cheeger constant, spectral gap and isoperimetric constants");
    add_common(graph, common, true);
    graph->add_option("--nu", graph_args.nu, "isoperimetric order (default inf)");

    CoverArgs cover_args;
    auto* cover = app.add_subcommand("cover", "validate a good covering and assemble patching constants");
    add_common(cover, common, true);
    cover->add_option("--sc", cover_args.sc, "continuous constant S_c for the patching bound");
    cover->add_option("--p", cover_args.p, "Sobolev exponent p");
    cover->add_option("--nu", cover_args.nu, "isoperimetric order nu");

    ConeArgs cone_args;
    auto* cone = app.add_subcommand("cone", "volume doubling scan of a discretized cone");
    add_common(cone, common, true);
    cone->add_option("--mode", cone_args.mode, "anchored | remote | mixed");
    cone->add_option("--samples", cone_args.samples);
    cone->add_option("--r-lo", cone_args.r_lo);
    cone->add_option("--r-hi", cone_args.r_hi);
    cone->add_option("--epsilon", cone_args.epsilon);
    cone->add_option("--csv", cone_args.csv, "per-sample CSV");

    HeatArgs heat_args;
    auto* heat = app.add_subcommand("heat", "heat kernel and two-sided Gaussian fit");
    add_common(heat, common, false);
    heat->add_option("--cone", common.in, "cone spec JSON (same as --in)")->check(CLI::ExistingFile);
    heat->add_option("--times", heat_args.times)->delimiter(',');
    heat->add_option("--source", heat_args.source, "source vertex");
    heat->add_option("--source-r", heat_args.source_r, "source on link node 0 nearest this radius");
    heat->add_option("--csv", heat_args.csv, "per-node kernel CSV");

    GreenArgs green_args;
    auto* green = app.add_subcommand("green", "Green's function of a cone of dimension n > 2");
    add_common(green, common, true);
    green->add_option("--source", green_args.source);
    green->add_option("--source-r", green_args.source_r);
    green->add_flag("--integrated", green_args.integrated, "compare with the time-integrated heat kernel");
    green->add_option("--csv", green_args.csv, "per-node CSV");

    auto* toric = app.add_subcommand("toric", "Gorenstein check, triangulation, Kahler class and A");
    add_common(toric, common, false);
    toric->add_option("--fan", common.in, "fan JSON (same as --in)")->check(CLI::ExistingFile);

    BpArgs bp_args;
    auto* bp = app.add_subcommand("bp", "Brieskorn-Pham admissibility table");
    add_common(bp, common, false);
    bp->add_option("--m", bp_args.m);
    bp->add_option("--k-range", bp_args.k_range, "lo..hi");
    bp->add_option("--format", bp_args.format, "csv | json");
    bp->add_option("--exponents", bp_args.exponents, "exponents a_j of sum z_j^a_j")->delimiter(',');

    auto* report = app.add_subcommand("report", "run a bundle of analyses");
    add_common(report, common, true);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInput;
    }

    try {
        if ((heat->parsed() || toric->parsed()) && common.in.empty()) throw InputError("an input file is required");
        if (graph->parsed()) return run_graph(common, graph_args, out, err);
        if (cover->parsed()) return run_cover(common, cover_args, out, err);
        if (cone->parsed()) return run_cone(common, cone_args, out, err);
        if (heat->parsed()) return run_heat(common, heat_args, out, err);
        if (green->parsed()) return run_green(common, green_args, out, err);
        if (toric->parsed()) return run_toric(common, out, err);
        if (bp->parsed()) return run_bp(common, bp_args, out, err);
        if (report->parsed()) return run_report(common, out, err);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kInput;
    } catch (const json::exception& e) {
        err << "error: invalid input (" << e.what() << ")\n";
        return kInput;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kInput;
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << '\n';
        return kInput;
    } catch (const CapacityError& e) {
        err << "error: " << e.what() << '\n';
        return kInput;
    } catch (const UnsupportedError& e) {
        err << "error: " << e.what() << '\n';
        return kInput;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kInternal;
}

} // namespace conic::cli
