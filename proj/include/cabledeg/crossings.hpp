#pragma once

#include <cstdint>
#include <vector>

#include "cabledeg/errors.hpp"
#include "cabledeg/kernels.hpp"
#include "cabledeg/mesh.hpp"

namespace cabledeg {

/// Oriented polyline from a point in a bounded region to an exterior base point.
struct Cable {
    std::vector<Vec3> points;

    double length() const;
    /// Arc-length parameter in [0, 1] of local parameter `t` on segment `segment`.
    double parameter(std::size_t segment, double t) const;
    Vec3 at(double parameter) const;
};

struct CrossingEvent {
    double parameter = 0;  ///< arc-length parameter in (0, 1)
    Vec3 position = Vec3::Zero();
    Eigen::Index triangle = -1;
    int sign = 0;          ///< sign of <cable tangent, triangle normal>
};

/// A cable segment met the surface within tolerance of an edge, a vertex, or
/// tangentially. Callers may jitter the cable and retry.
class DegenerateCrossing : public Error {
public:
    DegenerateCrossing(const std::string& what, std::size_t segment, Vec3 start, Vec3 end,
                       Eigen::Index triangle)
        : Error(what), segment_(segment), start_(std::move(start)), end_(std::move(end)), triangle_(triangle) {}

    std::size_t segment() const noexcept { return segment_; }
    const Vec3& start() const noexcept { return start_; }
    const Vec3& end() const noexcept { return end_; }
    Eigen::Index triangle() const noexcept { return triangle_; }

private:
    std::size_t segment_;
    Vec3 start_;
    Vec3 end_;
    Eigen::Index triangle_;
};

/// All transverse segment/triangle intersections sorted by cable parameter.
/// Throws DegenerateCrossing on the first degenerate incidence.
std::vector<CrossingEvent> cable_crossings(const Cable& cable, const TriangleMesh& mesh);

/// Sum of crossing signs along a given cable.
int cable_index_along(const Cable& cable, const TriangleMesh& mesh);

/// A point strictly outside the bounding box of `mesh`.
Vec3 default_exterior(const TriangleMesh& mesh);

/// Cable index of the region containing `point`. The first attempt is the
/// straight segment to `exterior`; each retry routes through a fresh
/// pseudo-random waypoint, seeded from `seed` and the query coordinates.
/// Throws RetriesExhausted after `retry_budget` degenerate retries.
int cable_index(const Vec3& point, const TriangleMesh& mesh, const Vec3& exterior, int retry_budget = 8,
                std::uint64_t seed = 0);

/// Two-segment cable from `point` through a random waypoint to `exterior`.
Cable jittered_cable(const Vec3& point, const Vec3& exterior, std::uint64_t seed);

/// (1 / 4 pi) times the total signed solid angle of the mesh seen from
/// `point`, summed in triangle order.
double solid_angle_winding(const Vec3& point, const TriangleMesh& mesh);

/// round(solid_angle_winding), throwing GuardExceeded when the value sits
/// `guard` or more away from the nearest integer.
int rounded_winding(const Vec3& point, const TriangleMesh& mesh, double guard = 0.25);

}  // namespace cabledeg
