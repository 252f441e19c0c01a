#include "cabledeg/planar.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace cabledeg {

Eigen::AlignedBox2d PolyCurve::bounding_box() const {
    Eigen::AlignedBox2d box;
    for (const auto& p : points) box.extend(p);
    return box;
}

void validate_curve(const PolyCurve& curve) {
    if (curve.points.size() < 3) throw Error("curve needs at least 3 points");
    for (std::size_t e = 0; e < curve.num_edges(); ++e) {
        if (curve.edge_start(e) == curve.edge_end(e)) {
            throw Error("curve repeats point " + std::to_string(e) + " consecutively");
        }
    }
}

PolyCurve reversed(PolyCurve curve) {
    std::reverse(curve.points.begin(), curve.points.end());
    return curve;
}

PolyCurve make_wound_circle(int turns, int segments_per_turn, double radius, const Vec2& center) {
    if (turns == 0 || segments_per_turn < 3) throw Error("wound circle needs turns != 0 and >= 3 segments per turn");
    PolyCurve curve;
    const int n = std::abs(turns) * segments_per_turn;
    const double dir = turns > 0 ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) {
        const double angle = dir * 2.0 * std::numbers::pi * i / segments_per_turn;
        curve.points.push_back(center + radius * Vec2(std::cos(angle), std::sin(angle)));
    }
    return curve;
}

int winding_crossings_along(const Vec2& point, const Vec2& direction, const PolyCurve& curve) {
    const auto box = curve.bounding_box();
    const double reach = 2.0 * (box.diagonal().norm() + (point - box.center()).norm()) + 1.0;
    const Vec2 far = point + reach * direction.normalized();
    int sum = 0;
    for (std::size_t e = 0; e < curve.num_edges(); ++e) {
        const auto hit = intersect_segments<double>(point, far, curve.edge_start(e), curve.edge_end(e));
        if (hit.kind == HitKind::Degenerate) {
            throw DegenerateRay("degenerate ray hit on curve edge " + std::to_string(e));
        }
        if (hit.kind == HitKind::Transverse) sum += hit.sign;
    }
    return sum;
}

int winding_crossings(const Vec2& point, const PolyCurve& curve, int retry_budget, std::uint64_t seed) {
    try {
        return winding_crossings_along(point, Vec2(0.8191520442889918, 0.5735764363510461), curve);
    } catch (const DegenerateRay&) {
    }
    std::uint64_t mix = seed ^ 0x9e3779b97f4a7c15ULL;
    mix ^= std::bit_cast<std::uint64_t>(point.x()) * 0xbf58476d1ce4e5b9ULL;
    mix ^= std::bit_cast<std::uint64_t>(point.y()) * 0x94d049bb133111ebULL;
    std::mt19937_64 rng(mix);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    for (int attempt = 0; attempt < retry_budget; ++attempt) {
        const double a = angle(rng);
        try {
            return winding_crossings_along(point, Vec2(std::cos(a), std::sin(a)), curve);
        } catch (const DegenerateRay&) {
        }
    }
    std::ostringstream os;
    os << "winding at (" << point.x() << ", " << point.y() << "): " << retry_budget << " rays were all degenerate";
    throw RetriesExhausted(os.str());
}

double winding_angle_value(const Vec2& point, const PolyCurve& curve) {
    double total = 0.0;
    for (std::size_t e = 0; e < curve.num_edges(); ++e) {
        total += turning_angle<double>(curve.edge_start(e) - point, curve.edge_end(e) - point);
    }
    return total / (2.0 * std::numbers::pi);
}

int winding_angle(const Vec2& point, const PolyCurve& curve, double guard) {
    const double w = winding_angle_value(point, curve);
    const double r = std::round(w);
    if (std::abs(w - r) >= guard) {
        std::ostringstream os;
        os << "angle winding " << w << " is not within " << guard << " of an integer; point too close to the curve";
        throw GuardExceeded(os.str(), w);
    }
    return static_cast<int>(r);
}

namespace {

using Cell2 = Lattice<2>::Cell;

struct ClearSegment2 {
    const PolyCurve& curve;
    const Lattice<2>& grid;
    const CellPrimitives& cell_edges;

    bool operator()(const Vec2& p, const Vec2& q) const {
        const Cell2 a = grid.clamp_cell(p);
        const Cell2 b = grid.clamp_cell(q);
        const Cell2 lo = a.cwiseMin(b);
        const Cell2 hi = a.cwiseMax(b);
        for (int i = lo.x(); i <= hi.x(); ++i) {
            for (int j = lo.y(); j <= hi.y(); ++j) {
                auto it = cell_edges.find(grid.flat(Cell2(i, j)));
                if (it == cell_edges.end()) continue;
                for (Eigen::Index e : it->second) {
                    const auto idx = static_cast<std::size_t>(e);
                    const auto hit = intersect_segments<double>(p, q, curve.edge_start(idx), curve.edge_end(idx));
                    if (hit.kind != HitKind::None) return false;
                }
            }
        }
        return true;
    }
};

}  // namespace

PlanarRegionMap pixel_regions(const PolyCurve& curve, int resolution, const PlanarOptions& options) {
    if (resolution < 8) throw Error("resolution must be at least 8");
    validate_curve(curve);

    PlanarRegionMap map;
    map.grid = Lattice<2>::around(curve.bounding_box(), resolution, options.padding);

    std::vector<std::uint8_t> blocked(map.grid.size(), 0);
    for (std::size_t e = 0; e < curve.num_edges(); ++e) {
        const Vec2 a = curve.edge_start(e);
        const Vec2 b = curve.edge_end(e);
        const Cell2 c0 = map.grid.clamp_cell(a.cwiseMin(b));
        const Cell2 c1 = map.grid.clamp_cell(a.cwiseMax(b));
        for (int i = c0.x(); i <= c1.x(); ++i) {
            for (int j = c0.y(); j <= c1.y(); ++j) {
                const Cell2 cell(i, j);
                if (!segment_box_overlap(map.grid.cell_box(cell), a, b)) continue;
                const std::size_t f = map.grid.flat(cell);
                blocked[f] = 1;
                map.cell_edges[f].push_back(static_cast<Eigen::Index>(e));
            }
        }
    }
    const std::uint32_t bounded = label_components(map.grid, blocked, map.labels);
    map.surface_pixels = map.cell_edges.size();

    const ClearSegment2 clear{curve, map.grid, map.cell_edges};
    const Attribution shares = attribute_surface_cells(map.grid, map.labels, bounded, options.subsamples, clear);
    map.unattributed_area = shares.unattributed;

    const auto dist = distance_to_blocked(map.grid, blocked);
    const auto reps = representative_cells<2>(map.labels, dist, bounded);

    map.regions.resize(bounded + 1);
    for (std::uint32_t l = 0; l <= bounded; ++l) {
        map.regions[l].id = l == kExteriorLabel ? RegionId::exterior() : RegionId::bounded(l);
    }
    for (std::uint32_t label : map.labels) {
        if (label != kSurfaceLabel) ++map.regions[label].pixel_count;
    }
    for (std::uint32_t l = 0; l <= bounded; ++l) {
        PlanarRegion& r = map.regions[l];
        r.area = static_cast<double>(r.pixel_count) * map.grid.cell_measure() + shares.measure[l];
        if (reps[l] == std::numeric_limits<std::size_t>::max()) continue;
        r.representative = map.grid.center(map.grid.cell(reps[l]));
        r.angle_winding = winding_angle(r.representative, curve);
        r.winding = l == kExteriorLabel ? 0 : winding_crossings(r.representative, curve, options.retry_budget, options.seed);
    }
    return map;
}

AreaBound area_bound(const PlanarRegionMap& regions) {
    AreaBound out;
    for (std::size_t l = 1; l < regions.regions.size(); ++l) {
        const auto& r = regions.regions[l];
        out.abs_sum += std::abs(r.winding) * r.area;
        out.signed_sum += r.winding * r.area;
    }
    return out;
}

AreaBound homotopy_area_bound(const PolyCurve& curve, int resolution, const PlanarOptions& options) {
    return area_bound(pixel_regions(curve, resolution, options));
}

}  // namespace cabledeg
