#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cabledeg/errors.hpp"
#include "cabledeg/homotopy.hpp"
#include "cabledeg/regions.hpp"
#include "cabledeg/word.hpp"

namespace cabledeg::cli {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json read_json(const std::filesystem::path& path) {
    try {
        return nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what(), 0, e.byte);
    }
}

const nlohmann::json& points_array(const nlohmann::json& doc, const std::filesystem::path& path) {
    if (doc.is_array()) return doc;
    if (doc.is_object() && doc.contains("points") && doc["points"].is_array()) return doc["points"];
    throw ParseError(path.string() + ": expected a \"points\" array", 0, 0);
}

template <int Dim>
Eigen::Matrix<double, Dim, 1> json_point(const nlohmann::json& j, const std::filesystem::path& path) {
    if (!j.is_array() || j.size() != Dim) {
        throw ParseError(path.string() + ": every point needs " + std::to_string(Dim) + " coordinates", 0, 0);
    }
    Eigen::Matrix<double, Dim, 1> p;
    for (int d = 0; d < Dim; ++d) {
        if (!j[d].is_number()) throw ParseError(path.string() + ": non-numeric coordinate", 0, 0);
        p[d] = j[d].get<double>();
    }
    return p;
}

Report json_vec(const Vec3& v) { return Report::array({v.x(), v.y(), v.z()}); }
Report json_vec(const Vec2& v) { return Report::array({v.x(), v.y()}); }

TriangleMesh load_mesh(const RunConfig& config, Report& warnings) {
    if (config.mesh.empty()) throw Error("--mesh is required");
    TriangleMesh mesh = read_mesh(config.mesh);
    const MeshReport check = validate_mesh(mesh);
    if (!check.closed || !check.oriented || check.invalid_indices > 0) {
        std::ostringstream os;
        os << "mesh is not closed and consistently oriented (" << check.open_edges << " open edges, "
           << check.inconsistent_edges << " inconsistent edges)";
        throw Error(os.str());
    }
    if (check.degenerate_triangles > 0) {
        warnings.push_back(std::to_string(check.degenerate_triangles) + " degenerate triangles");
    }
    return mesh;
}

RegionOptions region_options(const RunConfig& config) {
    RegionOptions opts;
    opts.retry_budget = config.retries;
    opts.seed = config.seed;
    return opts;
}

Report mesh_summary(const TriangleMesh& mesh) {
    const MeshReport check = validate_mesh(mesh);
    Report out;
    out["vertices"] = mesh.num_vertices();
    out["triangles"] = mesh.num_triangles();
    out["closed"] = check.closed;
    out["oriented"] = check.oriented;
    out["degenerate_triangles"] = check.degenerate_triangles;
    if (!check.bbox.isEmpty()) {
        out["bbox_min"] = json_vec(Vec3(check.bbox.min()));
        out["bbox_max"] = json_vec(Vec3(check.bbox.max()));
    }
    return out;
}

Report region_report(const RegionMap& map, Report& warnings) {
    Report out = Report::array();
    for (const auto& r : map.regions) {
        Report e;
        e["label"] = r.id.str();
        e["index"] = r.index;
        e["volume"] = r.volume;
        e["voxel_count"] = r.voxel_count;
        e["representative"] = json_vec(r.representative);
        e["oracle_winding"] = r.oracle_winding;
        if (!r.id.is_exterior() && std::lround(r.oracle_winding) != r.index) {
            warnings.push_back("region " + r.id.str() + ": cable index " + std::to_string(r.index) +
                               " disagrees with solid-angle winding");
        }
        if (r.voxel_count < 8) {
            warnings.push_back("region " + r.id.str() + " has only " + std::to_string(r.voxel_count) +
                               " voxels; refine the resolution");
        }
        out.push_back(std::move(e));
    }
    return out;
}

void render_text(const Report& node, const std::string& path, std::ostringstream& os) {
    if (node.is_object()) {
        for (const auto& [key, value] : node.items()) render_text(value, path.empty() ? key : path + "." + key, os);
    } else if (node.is_array() && !node.empty() && !node.front().is_primitive()) {
        for (std::size_t i = 0; i < node.size(); ++i) render_text(node[i], path + "[" + std::to_string(i) + "]", os);
    } else {
        os << path << ": " << (node.is_string() ? node.get<std::string>() : node.dump()) << '\n';
    }
}

}  // namespace

void validate(const RunConfig& config) {
    if (config.resolution < 8) throw Error("--resolution must be at least 8");
    if (config.retries < 1) throw Error("--retries must be at least 1");
    if (config.format != "structured" && config.format != "text") {
        throw Error("--format must be 'structured' or 'text'");
    }
}

Vec3 parse_point(const std::string& text) {
    Vec3 p;
    std::istringstream in(text);
    char c1 = 0;
    char c2 = 0;
    if (!(in >> p.x() >> c1 >> p.y() >> c2 >> p.z()) || c1 != ',' || c2 != ',') {
        throw ParseError("point must be x,y,z: '" + text + "'", 0, 0);
    }
    in >> std::ws;
    if (!in.eof()) throw ParseError("trailing characters in point '" + text + "'", 0, 0);
    return p;
}

Cable read_cable(const std::filesystem::path& path) {
    const auto doc = read_json(path);
    Cable cable;
    for (const auto& p : points_array(doc, path)) cable.points.push_back(json_point<3>(p, path));
    if (cable.points.size() < 2) throw ParseError(path.string() + ": cable needs at least 2 points", 0, 0);
    for (std::size_t i = 1; i < cable.points.size(); ++i) {
        if (cable.points[i] == cable.points[i - 1]) {
            throw ParseError(path.string() + ": consecutive cable points coincide", 0, 0);
        }
    }
    return cable;
}

PolyCurve read_curve(const std::filesystem::path& path) {
    const auto doc = read_json(path);
    PolyCurve curve;
    for (const auto& p : points_array(doc, path)) curve.points.push_back(json_point<2>(p, path));
    validate_curve(curve);
    return curve;
}

Report run_reduce(const RunConfig& config) {
    if (config.words.empty()) throw Error("--words is required");
    const auto words = parse_word_file(read_file(config.words));

    Report report;
    report["command"] = "reduce";
    Report cables = Report::array();
    CableSystemWord system;
    for (const auto& w : words) {
        const auto start = std::chrono::steady_clock::now();
        const ReducedTerm r = reduce(w);
        const auto stop = std::chrono::steady_clock::now();
        Report e;
        e["cable_id"] = w.cable_id;
        e["home"] = w.home.str();
        e["coefficient"] = r.coefficient;
        e["to"] = r.to.str();
        e["symbols"] = w.symbols.size();
        if (config.timing) e["seconds"] = std::chrono::duration<double>(stop - start).count();
        cables.push_back(std::move(e));
        system.words.push_back(w);
    }
    const SimplicityReport simple = validate_simple(system);
    Report warnings = Report::array();
    for (std::size_t i = 0; i < simple.cables.size(); ++i) {
        const auto& c = simple.cables[i];
        Report s;
        s["simple"] = c.simple();
        s["home_bounded"] = c.home_bounded;
        s["ends_exterior"] = c.ends_exterior;
        Report re = Report::array();
        for (const auto& r : c.reentered) re.push_back(r.str());
        s["reentered"] = std::move(re);
        cables[i]["simplicity"] = std::move(s);
        if (!c.simple()) warnings.push_back("cable " + c.cable_id + " is not simple");
    }
    report["cables"] = std::move(cables);
    Report dups = Report::array();
    for (const auto& r : simple.duplicate_homes) dups.push_back(r.str());
    report["system"] = {{"simple", simple.simple()},
                        {"duplicate_homes", std::move(dups)},
                        {"disjointness", "not checkable from words"}};
    report["warnings"] = std::move(warnings);
    return report;
}

Report run_regions(const RunConfig& config) {
    Report warnings = Report::array();
    const TriangleMesh mesh = load_mesh(config, warnings);
    const RegionMap map = voxel_regions(mesh, config.resolution, region_options(config));

    Report report;
    report["command"] = "regions";
    report["mesh"] = mesh_summary(mesh);
    report["grid"] = {{"resolution", map.grid.resolution},
                      {"spacing", map.grid.spacing},
                      {"origin", json_vec(Vec3(map.grid.origin))},
                      {"surface_voxels", map.surface_voxels},
                      {"unattributed_volume", map.unattributed_volume}};
    report["regions"] = region_report(map, warnings);
    const DegreeSummary d = total_degree(map);
    report["D"] = d.total_degree;
    report["V_deg"] = d.vdeg;
    if (!config.dump.empty()) {
        std::ofstream out(config.dump, std::ios::binary);
        if (!out) throw Error("cannot write " + config.dump.string());
        write_label_dump(out, map);
        report["dump"] = {{"path", config.dump.string()},
                          {"shape", Report::array({map.grid.resolution, map.grid.resolution, map.grid.resolution})},
                          {"dtype", "uint32 little-endian"},
                          {"order", "x slowest, z fastest"},
                          {"surface_label", kSurfaceLabel}};
    }
    report["warnings"] = std::move(warnings);
    return report;
}

Report run_vdeg(const RunConfig& config) {
    Report warnings = Report::array();
    const TriangleMesh mesh = load_mesh(config, warnings);
    const RegionMap map = voxel_regions(mesh, config.resolution, region_options(config));
    region_report(map, warnings);
    const DegreeSummary d = total_degree(map);

    Report report;
    report["command"] = "vdeg";
    report["resolution"] = config.resolution;
    report["bounded_regions"] = map.bounded_count();
    report["D"] = d.total_degree;
    report["V_deg"] = d.vdeg;
    report["enclosed_volume"] = signed_volume(mesh);
    report["warnings"] = std::move(warnings);
    return report;
}

Report run_index(const RunConfig& config) {
    if (!config.point) throw Error("--point is required");
    Report warnings = Report::array();
    const TriangleMesh mesh = load_mesh(config, warnings);
    const Vec3 p = *config.point;
    const int index = cable_index(p, mesh, default_exterior(mesh), config.retries, config.seed);
    const double w = solid_angle_winding(p, mesh);
    const bool guard_ok = std::abs(w - std::round(w)) < 0.25;
    const bool agrees = guard_ok && std::lround(w) == index;
    if (!guard_ok) warnings.push_back("solid-angle winding outside the 0.25 rounding guard");
    if (guard_ok && !agrees) warnings.push_back("cable index disagrees with solid-angle winding");

    Report report;
    report["command"] = "index";
    report["point"] = json_vec(p);
    report["index"] = index;
    report["oracle_winding"] = w;
    report["oracle_agrees"] = agrees;
    report["warnings"] = std::move(warnings);
    return report;
}

Report run_cable(const RunConfig& config) {
    if (config.cable.empty()) throw Error("--cable is required");
    Report warnings = Report::array();
    const TriangleMesh mesh = load_mesh(config, warnings);
    const Cable cable = read_cable(config.cable);
    const RegionMap map = voxel_regions(mesh, config.resolution, region_options(config));
    const auto events = cable_crossings(cable, mesh);
    const CableWord word = build_cable_word(cable, mesh, map, "cable");
    const ReducedTerm reduced = reduce(word);

    Report crossings = Report::array();
    for (const auto& e : events) {
        crossings.push_back({{"parameter", e.parameter}, {"position", json_vec(e.position)},
                             {"triangle", e.triangle}, {"sign", e.sign}});
    }
    Report report;
    report["command"] = "cable";
    report["crossings"] = std::move(crossings);
    report["word"] = format_word(word);
    report["home"] = word.home.str();
    report["coefficient"] = reduced.coefficient;
    report["to"] = reduced.to.str();
    if (!reduced.to.is_exterior()) warnings.push_back("cable does not end in the exterior region");
    report["warnings"] = std::move(warnings);
    return report;
}

Report run_sweep(const RunConfig& config) {
    Report warnings = Report::array();
    DiscreteHomotopy h;
    LowerBoundOptions opts;
    opts.regions = region_options(config);
    opts.slack = config.slack;
    Report spec;
    spec["kind"] = config.homotopy;

    if (!config.frames.empty()) {
        h = load_frame_directory(config.frames);
        spec["kind"] = "frames";
        spec["frames"] = h.frames.size();
    } else {
        TriangleMesh base;
        if (!config.mesh.empty()) {
            base = load_mesh(config, warnings);
        } else {
            base = make_icosphere(config.subdivisions);
            opts.mesh_error = std::abs(4.0 * std::numbers::pi / 3.0 - signed_volume(base));
            spec["subdivisions"] = config.subdivisions;
        }
        spec["steps"] = config.steps;
        if (config.homotopy == "radial") {
            h = radial_contraction(base, config.steps, base.vertices.colwise().mean().transpose());
        } else if (config.homotopy == "translate-return") {
            h = translate_return_contract(base, Vec3(config.offset, 0, 0), config.steps);
            spec["offset"] = config.offset;
        } else if (config.homotopy == "wobble") {
            h = wobble_contraction(base, config.seed, config.amplitude, config.steps);
            spec["amplitude"] = config.amplitude;
            spec["seed"] = config.seed;
            // The perturbed start no longer matches the analytic ball.
            opts.mesh_error = 0;
        } else {
            throw Error("unknown homotopy '" + config.homotopy + "' (radial, translate-return, wobble)");
        }
    }

    const LowerBoundReport r = verify_lower_bound(h, config.resolution, opts);
    Report report;
    report["command"] = "sweep";
    report["homotopy"] = std::move(spec);
    report["swept_volume"] = r.swept.volume;
    report["D"] = r.degree.total_degree;
    report["V_deg"] = r.degree.vdeg;
    report["enclosed_volume"] = r.enclosed_volume;
    report["margin_D"] = r.margin_degree;
    report["margin_V_deg"] = r.margin_vdeg;
    report["tolerance"] = r.tolerance;
    report["violation"] = r.violation;
    report["sense_preserving"] = {{"sense_preserving", r.sense.sense_preserving()},
                                  {"degenerate", r.sense.degenerate()},
                                  {"positive", r.sense.positive},
                                  {"negative", r.sense.negative},
                                  {"zero", r.sense.zero},
                                  {"min_rate", r.sense.min_rate},
                                  {"max_rate", r.sense.max_rate}};
    report["quality"] = {{"prisms", r.swept.prisms},
                         {"stationary_prisms", r.swept.stationary_prisms},
                         {"inward_tets", r.swept.inward_tets},
                         {"degenerate_tets", r.swept.degenerate_tets}};
    if (r.violation) warnings.push_back("swept volume below |D| beyond tolerance");
    report["warnings"] = std::move(warnings);
    return report;
}

Report run_planar(const RunConfig& config) {
    if (config.curve.empty()) throw Error("--curve is required");
    const PolyCurve curve = read_curve(config.curve);
    PlanarOptions opts;
    opts.retry_budget = config.retries;
    opts.seed = config.seed;
    const PlanarRegionMap map = pixel_regions(curve, config.resolution, opts);
    const AreaBound bound = area_bound(map);

    Report warnings = Report::array();
    Report regions = Report::array();
    for (const auto& r : map.regions) {
        regions.push_back({{"label", r.id.str()},
                           {"winding", r.winding},
                           {"area", r.area},
                           {"pixel_count", r.pixel_count},
                           {"representative", json_vec(r.representative)},
                           {"angle_winding", r.angle_winding}});
        if (r.winding != r.angle_winding && !r.id.is_exterior()) {
            warnings.push_back("region " + r.id.str() + ": ray and angle windings disagree");
        }
    }
    Report report;
    report["command"] = "planar";
    report["grid"] = {{"resolution", map.grid.resolution},
                      {"spacing", map.grid.spacing},
                      {"origin", json_vec(Vec2(map.grid.origin))},
                      {"surface_pixels", map.surface_pixels},
                      {"unattributed_area", map.unattributed_area}};
    report["regions"] = std::move(regions);
    report["area_bound"] = bound.abs_sum;
    report["signed_area"] = bound.signed_sum;
    report["warnings"] = std::move(warnings);
    return report;
}

Report run(const RunConfig& config) {
    validate(config);
    if (config.command == "reduce") return run_reduce(config);
    if (config.command == "regions") return run_regions(config);
    if (config.command == "vdeg") return run_vdeg(config);
    if (config.command == "index") return run_index(config);
    if (config.command == "cable") return run_cable(config);
    if (config.command == "sweep") return run_sweep(config);
    if (config.command == "planar") return run_planar(config);
    throw Error("unknown command '" + config.command + "'");
}

std::string render(const Report& report, const std::string& format) {
    if (format == "text") {
        std::ostringstream os;
        render_text(report, "", os);
        return os.str();
    }
    return report.dump(2) + "\n";
}

}  // namespace cabledeg::cli
