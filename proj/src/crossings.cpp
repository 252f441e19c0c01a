#include "cabledeg/crossings.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace cabledeg {

double Cable::length() const {
    double len = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) len += (points[i] - points[i - 1]).norm();
    return len;
}

double Cable::parameter(std::size_t segment, double t) const {
    const double total = length();
    double before = 0.0;
    for (std::size_t i = 1; i <= segment; ++i) before += (points[i] - points[i - 1]).norm();
    return (before + t * (points[segment + 1] - points[segment]).norm()) / total;
}

Vec3 Cable::at(double parameter) const {
    const double target = std::clamp(parameter, 0.0, 1.0) * length();
    double walked = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        const double seg = (points[i] - points[i - 1]).norm();
        if (walked + seg >= target || i + 1 == points.size()) {
            const double t = seg > 0 ? std::clamp((target - walked) / seg, 0.0, 1.0) : 0.0;
            return points[i - 1] + t * (points[i] - points[i - 1]);
        }
        walked += seg;
    }
    return points.back();
}

std::vector<CrossingEvent> cable_crossings(const Cable& cable, const TriangleMesh& mesh) {
    if (cable.points.size() < 2) throw Error("cable needs at least two points");
    std::vector<CrossingEvent> events;
    for (std::size_t s = 0; s + 1 < cable.points.size(); ++s) {
        const Vec3& p0 = cable.points[s];
        const Vec3& p1 = cable.points[s + 1];
        if (p0 == p1) throw Error("cable has coincident consecutive points");
        for (Eigen::Index tri = 0; tri < mesh.num_triangles(); ++tri) {
            const auto hit = intersect_segment_triangle<double>(p0, p1, mesh.corner(tri, 0), mesh.corner(tri, 1),
                                                                mesh.corner(tri, 2));
            if (hit.kind == HitKind::None) continue;
            if (hit.kind == HitKind::Degenerate) {
                std::ostringstream os;
                os << "degenerate crossing of cable segment " << s << " with triangle " << tri;
                throw DegenerateCrossing(os.str(), s, p0, p1, tri);
            }
            events.push_back({cable.parameter(s, hit.t), p0 + hit.t * (p1 - p0), tri, hit.sign});
        }
    }
    std::stable_sort(events.begin(), events.end(),
                     [](const auto& a, const auto& b) { return a.parameter < b.parameter; });
    return events;
}

int cable_index_along(const Cable& cable, const TriangleMesh& mesh) {
    int sum = 0;
    for (const auto& e : cable_crossings(cable, mesh)) sum += e.sign;
    return sum;
}

Vec3 default_exterior(const TriangleMesh& mesh) {
    const Box3 box = mesh.bounding_box();
    if (box.isEmpty()) return Vec3(10.0, 10.0, 10.0);
    const double pad = std::max(1.0, box.sizes().maxCoeff());
    // Slightly irrational offsets keep the default cable off axis-aligned features.
    return box.max() + pad * Vec3(1.0, 0.7548776662466927, 0.5698402909980532);
}

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t point_seed(const Vec3& p, std::uint64_t seed) {
    std::uint64_t h = splitmix(seed);
    for (int i = 0; i < 3; ++i) h = splitmix(h ^ std::bit_cast<std::uint64_t>(p[i]));
    return h;
}

}  // namespace

Cable jittered_cable(const Vec3& point, const Vec3& exterior, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Vec3 dir(normal(rng), normal(rng), normal(rng));
    dir.normalize();
    const double radius = 0.25 * (exterior - point).norm() * std::cbrt(unit(rng));
    const Vec3 waypoint = 0.5 * (point + exterior) + radius * dir;
    return Cable{{point, waypoint, exterior}};
}

int cable_index(const Vec3& point, const TriangleMesh& mesh, const Vec3& exterior, int retry_budget,
                std::uint64_t seed) {
    try {
        return cable_index_along(Cable{{point, exterior}}, mesh);
    } catch (const DegenerateCrossing&) {
    }
    std::uint64_t state = point_seed(point, seed);
    for (int attempt = 0; attempt < retry_budget; ++attempt) {
        state = splitmix(state);
        try {
            return cable_index_along(jittered_cable(point, exterior, state), mesh);
        } catch (const DegenerateCrossing&) {
        }
    }
    std::ostringstream os;
    os << "cable index at (" << point.x() << ", " << point.y() << ", " << point.z() << "): " << retry_budget
       << " jittered cables were all degenerate";
    throw RetriesExhausted(os.str());
}

double solid_angle_winding(const Vec3& point, const TriangleMesh& mesh) {
    double total = 0.0;
    for (Eigen::Index tri = 0; tri < mesh.num_triangles(); ++tri) {
        total += signed_solid_angle<double>(point, mesh.corner(tri, 0), mesh.corner(tri, 1), mesh.corner(tri, 2));
    }
    return total / (4.0 * std::numbers::pi);
}

int rounded_winding(const Vec3& point, const TriangleMesh& mesh, double guard) {
    const double w = solid_angle_winding(point, mesh);
    const double r = std::round(w);
    if (std::abs(w - r) >= guard) {
        std::ostringstream os;
        os << "winding " << w << " is not within " << guard << " of an integer; point too close to the surface";
        throw GuardExceeded(os.str(), w);
    }
    return static_cast<int>(r);
}

}  // namespace cabledeg
