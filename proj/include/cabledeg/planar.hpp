#pragma once

// Planar counterpart of the cable machinery: rays stand in for cables,
// edges for triangles, pixels for voxels.

#include <cstdint>
#include <map>
#include <vector>

#include "cabledeg/kernels.hpp"
#include "cabledeg/lattice.hpp"
#include "cabledeg/word.hpp"

namespace cabledeg {

using Vec2 = Eigen::Vector2d;

/// Closed polygonal curve; the last point connects back to the first.
struct PolyCurve {
    std::vector<Vec2> points;

    std::size_t num_edges() const { return points.size(); }
    Vec2 edge_start(std::size_t e) const { return points[e]; }
    Vec2 edge_end(std::size_t e) const { return points[(e + 1) % points.size()]; }
    Eigen::AlignedBox2d bounding_box() const;
};

/// Throws Error if the curve has fewer than 3 points or repeats a point consecutively.
void validate_curve(const PolyCurve& curve);

PolyCurve reversed(PolyCurve curve);

/// Regular polygon approximating a circle traversed `turns` times
/// (`segments_per_turn` vertices per turn, counter-clockwise for turns > 0).
PolyCurve make_wound_circle(int turns, int segments_per_turn, double radius = 1.0, const Vec2& center = Vec2::Zero());

class DegenerateRay : public Error {
public:
    using Error::Error;
};

/// Signed crossings of a ray from `point` to a far exterior point; the sign of
/// each crossing is that of cross(ray direction, edge direction). The first
/// ray points along a fixed generic direction, retries use random directions.
int winding_crossings(const Vec2& point, const PolyCurve& curve, int retry_budget = 8, std::uint64_t seed = 0);

/// Same count along the ray with the given direction; throws DegenerateRay on a degenerate hit.
int winding_crossings_along(const Vec2& point, const Vec2& direction, const PolyCurve& curve);

/// Sum of signed turning angles / 2 pi, unrounded.
double winding_angle_value(const Vec2& point, const PolyCurve& curve);

/// Rounded winding_angle_value; throws GuardExceeded when the value is
/// `guard` or more from the nearest integer.
int winding_angle(const Vec2& point, const PolyCurve& curve, double guard = 0.25);

struct PlanarRegion {
    RegionId id;
    int winding = 0;
    double area = 0;
    std::size_t pixel_count = 0;
    Vec2 representative = Vec2::Zero();
    int angle_winding = 0;  ///< oracle value at the representative
};

struct PlanarRegionMap {
    Lattice<2> grid;
    std::vector<std::uint32_t> labels;
    std::vector<PlanarRegion> regions;  ///< regions[0] is the exterior
    std::size_t surface_pixels = 0;
    double unattributed_area = 0;
    CellPrimitives cell_edges;
};

struct PlanarOptions {
    int retry_budget = 8;
    std::uint64_t seed = 0;
    int subsamples = 4;
    double padding = 1.5;
};

PlanarRegionMap pixel_regions(const PolyCurve& curve, int resolution, const PlanarOptions& options = {});

struct AreaBound {
    double abs_sum = 0;     ///< sum |w| * area, the homotopy-area lower bound
    double signed_sum = 0;  ///< sum w * area
};

AreaBound area_bound(const PlanarRegionMap& regions);
AreaBound homotopy_area_bound(const PolyCurve& curve, int resolution, const PlanarOptions& options = {});

}  // namespace cabledeg
