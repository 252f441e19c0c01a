#include "cabledeg/homotopy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <random>

#include "cabledeg/crossings.hpp"

namespace cabledeg {

TriangleMesh DiscreteHomotopy::at(double t) const {
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return frame_mesh(0);
    const auto k = static_cast<std::size_t>(it - times.begin()) - 1;
    if (k + 1 >= frames.size()) return frame_mesh(frames.size() - 1);
    const double s = (t - times[k]) / (times[k + 1] - times[k]);
    return {(1.0 - s) * frames[k] + s * frames[k + 1], triangles};
}

Vec3 DiscreteHomotopy::terminal_point() const { return frames.back().colwise().mean().transpose(); }

void validate_homotopy(const DiscreteHomotopy& h, double collapse_tolerance) {
    if (h.frames.size() < 2) throw Error("homotopy needs at least two frames");
    if (h.times.size() != h.frames.size()) throw Error("homotopy has one time per frame");
    if (h.times.front() != 0.0 || h.times.back() != 1.0) throw Error("homotopy times must run from 0 to 1");
    for (std::size_t k = 1; k < h.times.size(); ++k) {
        if (h.times[k] < h.times[k - 1]) throw Error("homotopy times must be non-decreasing");
    }
    const Eigen::Index nv = h.frames.front().rows();
    for (const auto& f : h.frames) {
        if (f.rows() != nv) throw Error("homotopy frames differ in vertex count");
    }
    if (h.triangles.size() > 0 && (h.triangles.minCoeff() < 0 || h.triangles.maxCoeff() >= nv)) {
        throw Error("homotopy triangles reference missing vertices");
    }
    const Vec3 p = h.terminal_point();
    const double scale = std::max(1.0, h.frames.front().cwiseAbs().maxCoeff());
    const double spread = (h.frames.back().rowwise() - p.transpose()).rowwise().norm().maxCoeff();
    if (spread > collapse_tolerance * scale) {
        throw Error("final frame is not collapsed to a point (spread " + std::to_string(spread) + ")");
    }
}

namespace {

std::vector<double> uniform_times(std::size_t steps) {
    std::vector<double> t(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) t[k] = static_cast<double>(k) / static_cast<double>(steps);
    t.back() = 1.0;
    return t;
}

Eigen::MatrixX3d contracted(const Eigen::MatrixX3d& v, const Vec3& center, double s) {
    return ((1.0 - s) * (v.rowwise() - center.transpose())).rowwise() + center.transpose();
}

/// Smooth scalar field: mean of three random plane waves, bounded by 1.
struct PlaneWaves {
    std::array<Vec3, 3> k;
    std::array<double, 3> phase;

    explicit PlaneWaves(std::mt19937_64& rng) {
        std::normal_distribution<double> normal(0.0, 1.0);
        std::uniform_real_distribution<double> freq(1.0, 3.0);
        std::uniform_real_distribution<double> ph(0.0, 2.0 * std::numbers::pi);
        for (int m = 0; m < 3; ++m) {
            k[m] = Vec3(normal(rng), normal(rng), normal(rng)).normalized() * freq(rng);
            phase[m] = ph(rng);
        }
    }

    double operator()(const Vec3& p) const {
        double s = 0.0;
        for (int m = 0; m < 3; ++m) s += std::sin(k[m].dot(p) + phase[m]);
        return s / 3.0;
    }
};

}  // namespace

DiscreteHomotopy radial_contraction(const TriangleMesh& mesh, int steps, const Vec3& center) {
    if (steps < 1) throw Error("radial contraction needs at least one step");
    DiscreteHomotopy h;
    h.triangles = mesh.triangles;
    h.times = uniform_times(static_cast<std::size_t>(steps));
    for (int k = 0; k <= steps; ++k) h.frames.push_back(contracted(mesh.vertices, center, h.times[k]));
    h.frames.back().rowwise() = center.transpose();
    return h;
}

DiscreteHomotopy translate_return_contract(const TriangleMesh& mesh, const Vec3& offset, int steps_per_phase) {
    if (steps_per_phase < 1) throw Error("translate-return needs at least one step per phase");
    DiscreteHomotopy h;
    h.triangles = mesh.triangles;
    const auto n = static_cast<std::size_t>(steps_per_phase);
    h.times = uniform_times(3 * n);
    const Vec3 center = mesh.vertices.colwise().mean().transpose();
    for (std::size_t k = 0; k <= 3 * n; ++k) {
        if (k <= n) {
            const double s = static_cast<double>(k) / static_cast<double>(n);
            h.frames.push_back(mesh.vertices.rowwise() + (s * offset).transpose());
        } else if (k <= 2 * n) {
            const double s = static_cast<double>(2 * n - k) / static_cast<double>(n);
            h.frames.push_back(mesh.vertices.rowwise() + (s * offset).transpose());
        } else {
            const double s = static_cast<double>(k - 2 * n) / static_cast<double>(n);
            h.frames.push_back(contracted(mesh.vertices, center, s));
        }
    }
    h.frames.back().rowwise() = center.transpose();
    return h;
}

DiscreteHomotopy wobble_contraction(const TriangleMesh& mesh, std::uint64_t seed, double amplitude, int steps) {
    if (steps < 1) throw Error("wobble contraction needs at least one step");
    std::mt19937_64 rng(seed);
    const PlaneWaves radial(rng);
    const std::array<PlaneWaves, 3> drift = {PlaneWaves(rng), PlaneWaves(rng), PlaneWaves(rng)};

    const Vec3 center = mesh.vertices.colwise().mean().transpose();
    const double size = (mesh.vertices.rowwise() - center.transpose()).rowwise().norm().maxCoeff();
    Eigen::MatrixX3d base = mesh.vertices;
    Eigen::MatrixX3d wobble(mesh.vertices.rows(), 3);
    for (Eigen::Index i = 0; i < base.rows(); ++i) {
        const Vec3 p = mesh.vertices.row(i).transpose();
        const Vec3 q = center + (1.0 + amplitude * radial(p / size)) * (p - center);
        base.row(i) = q.transpose();
        for (int d = 0; d < 3; ++d) wobble(i, d) = amplitude * size * drift[d](p / size);
    }

    DiscreteHomotopy h;
    h.triangles = mesh.triangles;
    h.times = uniform_times(static_cast<std::size_t>(steps));
    for (int k = 0; k <= steps; ++k) {
        const double t = h.times[k];
        const Eigen::MatrixX3d moved = base + std::sin(std::numbers::pi * t) * wobble;
        h.frames.push_back(contracted(moved, center, t));
    }
    h.frames.back().rowwise() = center.transpose();
    return h;
}

DiscreteHomotopy hold_then_snap(const TriangleMesh& mesh, int hold_steps) {
    if (hold_steps < 1) throw Error("hold needs at least one step");
    DiscreteHomotopy h;
    h.triangles = mesh.triangles;
    h.times = uniform_times(static_cast<std::size_t>(hold_steps));
    for (int k = 0; k <= hold_steps; ++k) h.frames.push_back(mesh.vertices);
    const Vec3 center = mesh.vertices.colwise().mean().transpose();
    Eigen::MatrixX3d point(mesh.vertices.rows(), 3);
    point.rowwise() = center.transpose();
    h.frames.push_back(point);
    h.times.push_back(1.0);
    return h;
}

DiscreteHomotopy from_frames(const std::vector<TriangleMesh>& meshes) {
    if (meshes.size() < 2) throw Error("homotopy needs at least two frames");
    DiscreteHomotopy h;
    h.triangles = meshes.front().triangles;
    for (const auto& m : meshes) {
        if (m.triangles.rows() != h.triangles.rows() || m.triangles != h.triangles) {
            throw Error("homotopy frames must share connectivity");
        }
        h.frames.push_back(m.vertices);
    }
    h.times = uniform_times(meshes.size() - 1);
    return h;
}

DiscreteHomotopy load_frame_directory(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir)) throw Error("not a frame directory: " + dir.string());
    // Lexicographic order; frame names should be zero-padded.
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        const auto ext = entry.path().extension();
        if (entry.is_regular_file() && (ext == ".off" || ext == ".obj")) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<TriangleMesh> meshes;
    for (const auto& f : files) meshes.push_back(read_mesh(f));
    return from_frames(meshes);
}

namespace {

double tet_volume(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    return (b - a).dot((c - a).cross(d - a)) / 6.0;
}

/// Calls visit(a, b, c, d, orientation, stationary, first) for the three
/// tetrahedra of every prism. orientation * volume > 0 when the tet moves
/// along the triangle normal.
template <typename Visit>
void for_each_tet(const DiscreteHomotopy& h, Visit&& visit) {
    for (std::size_t k = 0; k + 1 < h.frames.size(); ++k) {
        const auto& f0 = h.frames[k];
        const auto& f1 = h.frames[k + 1];
        for (Eigen::Index t = 0; t < h.triangles.rows(); ++t) {
            std::array<int, 3> v = {h.triangles(t, 0), h.triangles(t, 1), h.triangles(t, 2)};
            // Each swap in a 3-element sort flips the parity.
            double orientation = 1.0;
            for (int i = 0; i < 2; ++i) {
                for (int j = 0; j < 2 - i; ++j) {
                    if (v[j] > v[j + 1]) {
                        std::swap(v[j], v[j + 1]);
                        orientation = -orientation;
                    }
                }
            }
            const Vec3 u0 = f0.row(v[0]).transpose();
            const Vec3 v0 = f0.row(v[1]).transpose();
            const Vec3 w0 = f0.row(v[2]).transpose();
            const Vec3 u1 = f1.row(v[0]).transpose();
            const Vec3 v1 = f1.row(v[1]).transpose();
            const Vec3 w1 = f1.row(v[2]).transpose();
            const bool stationary = u0 == u1 && v0 == v1 && w0 == w1;
            visit(u0, v0, w0, u1, orientation, stationary, true);
            visit(v0, w0, u1, v1, orientation, stationary, false);
            visit(w0, u1, v1, w1, orientation, stationary, false);
        }
    }
}

}  // namespace

SweptVolume swept_volume(const DiscreteHomotopy& h) {
    validate_homotopy(h);
    SweptVolume out;
    for_each_tet(h, [&](const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d, double orientation,
                        bool stationary, bool first) {
        if (first) {
            ++out.prisms;
            if (stationary) ++out.stationary_prisms;
        }
        if (stationary) return;
        const double vol = tet_volume(a, b, c, d);
        if (orientation * vol < 0) ++out.inward_tets;
        if (vol == 0) ++out.degenerate_tets;
        out.volume += std::abs(vol);
    });
    return out;
}

int crossing_count(const Vec3& point, const DiscreteHomotopy& h) {
    int count = 0;
    for_each_tet(h, [&](const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d, double, bool stationary, bool) {
        if (stationary) return;
        const double vol = tet_volume(a, b, c, d);
        if (vol == 0) return;
        const double s = vol > 0 ? 1.0 : -1.0;
        if (s * tet_volume(point, b, c, d) >= 0 && s * tet_volume(a, point, c, d) >= 0 &&
            s * tet_volume(a, b, point, d) >= 0 && s * tet_volume(a, b, c, point) >= 0) {
            ++count;
        }
    });
    return count;
}

int IndexTrace::variation() const {
    int total = 0;
    for (std::size_t k = 1; k < values.size(); ++k) total += std::abs(values[k] - values[k - 1]);
    return total;
}

bool IndexTrace::monotone() const {
    bool up = false;
    bool down = false;
    for (std::size_t k = 1; k < values.size(); ++k) {
        up = up || values[k] > values[k - 1];
        down = down || values[k] < values[k - 1];
    }
    return !(up && down);
}

IndexTrace index_trace(const Vec3& point, const DiscreteHomotopy& h, int substeps, double time_tolerance) {
    validate_homotopy(h);
    if (substeps < 1) throw Error("index trace needs at least one sample per step");
    IndexTrace trace;
    trace.point = point;

    auto eval = [&](double t) -> std::optional<int> {
        const double w = solid_angle_winding(point, h.at(t));
        const double r = std::round(w);
        if (std::abs(w - r) >= 0.25) return std::nullopt;
        return static_cast<int>(r);
    };

    std::function<void(double, int, double, int)> refine = [&](double lo, int vlo, double hi, int vhi) {
        if (hi - lo <= time_tolerance) {
            trace.times.push_back(hi);
            trace.values.push_back(vhi);
            return;
        }
        const double mid = 0.5 * (lo + hi);
        const auto vm = eval(mid);
        if (!vm) {
            trace.uncertain = true;
            trace.times.push_back(mid);
            trace.values.push_back(vhi);
            return;
        }
        if (*vm != vlo) refine(lo, vlo, mid, *vm);
        if (*vm != vhi) refine(mid, *vm, hi, vhi);
    };

    const auto first = eval(0.0);
    if (!first) throw GuardExceeded("index trace start point lies on the initial surface", 0.0);
    trace.values.push_back(*first);

    double last_t = 0.0;
    int last_v = *first;
    for (std::size_t k = 0; k + 1 < h.frames.size(); ++k) {
        const double t0 = h.times[k];
        const double t1 = h.times[k + 1];
        if (t1 == t0) {
            // Zero-width step: the value jumps exactly at t1.
            const auto v = eval(t1);
            if (!v) {
                trace.uncertain = true;
                continue;
            }
            if (*v != last_v) {
                trace.times.push_back(t1);
                trace.values.push_back(*v);
            }
            last_t = t1;
            last_v = *v;
            continue;
        }
        for (int s = 1; s <= substeps; ++s) {
            const double t = s == substeps ? t1 : t0 + (t1 - t0) * s / substeps;
            const auto v = eval(t);
            if (!v) {
                trace.uncertain = true;
                continue;
            }
            if (*v != last_v) refine(last_t, last_v, t, *v);
            last_t = t;
            last_v = *v;
        }
    }
    return trace;
}

SenseReport sense_preserving_report(const DiscreteHomotopy& h) {
    validate_homotopy(h);
    SenseReport report;
    bool any = false;
    for (std::size_t k = 0; k + 1 < h.frames.size(); ++k) {
        const double dt = h.times[k + 1] - h.times[k];
        const auto& f0 = h.frames[k];
        const auto& f1 = h.frames[k + 1];
        for (Eigen::Index t = 0; t < h.triangles.rows(); ++t) {
            const Vec3 a = f0.row(h.triangles(t, 0)).transpose();
            const Vec3 b = f0.row(h.triangles(t, 1)).transpose();
            const Vec3 c = f0.row(h.triangles(t, 2)).transpose();
            Vec3 shift = Vec3::Zero();
            for (int j = 0; j < 3; ++j) shift += (f1.row(h.triangles(t, j)) - f0.row(h.triangles(t, j))).transpose();
            shift /= 3.0;
            const Vec3 n = (b - a).cross(c - a);
            const double nn = n.norm();
            double rate = nn > 0 ? shift.dot(n) / nn : 0.0;
            if (dt > 0) rate /= dt;
            if (rate > 0) {
                ++report.positive;
            } else if (rate < 0) {
                ++report.negative;
            } else {
                ++report.zero;
            }
            report.min_rate = any ? std::min(report.min_rate, rate) : rate;
            report.max_rate = any ? std::max(report.max_rate, rate) : rate;
            any = true;
        }
    }
    return report;
}

LowerBoundReport verify_lower_bound(const DiscreteHomotopy& h, int resolution, const LowerBoundOptions& options) {
    validate_homotopy(h);
    const TriangleMesh start = h.frame_mesh(0);
    const MeshReport mesh_report = validate_mesh(start);
    if (!mesh_report.valid()) throw Error("initial frame is not a closed, oriented, non-degenerate mesh");

    LowerBoundReport report;
    report.swept = swept_volume(h);
    report.degree = total_degree(start, resolution, options.regions);
    report.enclosed_volume = signed_volume(start);
    const double abs_d = std::abs(report.degree.total_degree);
    report.margin_degree = report.swept.volume - abs_d;
    report.margin_vdeg = report.swept.volume - report.degree.vdeg;
    report.tolerance = options.mesh_error + std::abs(report.degree.total_degree - report.enclosed_volume) +
                       options.slack * abs_d;
    report.violation = report.swept.volume < abs_d - report.tolerance;
    report.sense = sense_preserving_report(h);
    return report;
}

}  // namespace cabledeg
