#include "cabledeg/regions.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

namespace cabledeg {

namespace {

using Cell3 = Lattice<3>::Cell;

void mark_surface(const TriangleMesh& mesh, const Lattice<3>& grid, std::vector<std::uint8_t>& blocked,
                  CellPrimitives& cell_triangles) {
    blocked.assign(grid.size(), 0);
    for (Eigen::Index tri = 0; tri < mesh.num_triangles(); ++tri) {
        const Vec3 a = mesh.corner(tri, 0);
        const Vec3 b = mesh.corner(tri, 1);
        const Vec3 c = mesh.corner(tri, 2);
        const Vec3 lo = a.cwiseMin(b).cwiseMin(c);
        const Vec3 hi = a.cwiseMax(b).cwiseMax(c);
        const Cell3 c0 = grid.clamp_cell(lo);
        const Cell3 c1 = grid.clamp_cell(hi);
        for (int i = c0.x(); i <= c1.x(); ++i) {
            for (int j = c0.y(); j <= c1.y(); ++j) {
                for (int k = c0.z(); k <= c1.z(); ++k) {
                    const Cell3 cell(i, j, k);
                    if (!triangle_box_overlap(grid.cell_box(cell), a, b, c)) continue;
                    const std::size_t f = grid.flat(cell);
                    blocked[f] = 1;
                    cell_triangles[f].push_back(tri);
                }
            }
        }
    }
}

/// True when segment p->q meets no triangle listed in the cells it spans.
struct ClearSegment {
    const TriangleMesh& mesh;
    const Lattice<3>& grid;
    const CellPrimitives& cell_triangles;

    bool operator()(const Vec3& p, const Vec3& q) const {
        const Cell3 a = grid.clamp_cell(p);
        const Cell3 b = grid.clamp_cell(q);
        const Cell3 lo = a.cwiseMin(b);
        const Cell3 hi = a.cwiseMax(b);
        for (int i = lo.x(); i <= hi.x(); ++i) {
            for (int j = lo.y(); j <= hi.y(); ++j) {
                for (int k = lo.z(); k <= hi.z(); ++k) {
                    auto it = cell_triangles.find(grid.flat(Cell3(i, j, k)));
                    if (it == cell_triangles.end()) continue;
                    for (Eigen::Index tri : it->second) {
                        const auto hit = intersect_segment_triangle<double>(p, q, mesh.corner(tri, 0),
                                                                            mesh.corner(tri, 1), mesh.corner(tri, 2));
                        if (hit.kind != HitKind::None) return false;
                    }
                }
            }
        }
        return true;
    }
};

RegionId to_region(std::uint32_t label) {
    return label == kExteriorLabel ? RegionId::exterior() : RegionId::bounded(label);
}

}  // namespace

const RegionInfo& RegionMap::region(RegionId id) const {
    const std::size_t k = id.is_exterior() ? 0 : id.label();
    if (k >= regions.size()) throw Error("unknown region " + id.str());
    return regions[k];
}

std::optional<RegionId> RegionMap::voxel_region(const Vec3& p) const {
    const auto cell = grid.locate(p);
    if (!cell) return RegionId::exterior();
    const std::uint32_t label = labels[grid.flat(*cell)];
    if (label == kSurfaceLabel) return std::nullopt;
    return to_region(label);
}

RegionId RegionMap::locate(const Vec3& p, const TriangleMesh& mesh) const {
    static const auto offsets = neighborhood_offsets<3>(2);
    auto label = resolve_label(grid, labels, p, offsets, ClearSegment{mesh, grid, cell_triangles});
    if (!label) {
        std::ostringstream os;
        os << "cannot resolve region of (" << p.x() << ", " << p.y() << ", " << p.z()
           << "): no clear path to a labelled voxel";
        throw Error(os.str());
    }
    return to_region(*label);
}

std::map<RegionId, double> RegionMap::volumes() const {
    std::map<RegionId, double> out;
    for (const auto& r : regions) out[r.id] = r.volume;
    return out;
}

std::map<RegionId, int> RegionMap::indices() const {
    std::map<RegionId, int> out;
    for (const auto& r : regions) out[r.id] = r.index;
    return out;
}

RegionMap voxel_regions(const TriangleMesh& mesh, int resolution, const RegionOptions& options) {
    if (resolution < 8) throw Error("resolution must be at least 8");
    if (options.subsamples < 1) throw Error("subsamples must be at least 1");

    RegionMap map;
    map.grid = Lattice<3>::around(mesh.bounding_box(), resolution, options.padding);

    std::vector<std::uint8_t> blocked;
    mark_surface(mesh, map.grid, blocked, map.cell_triangles);
    const std::uint32_t bounded = label_components(map.grid, blocked, map.labels);
    map.surface_voxels = map.cell_triangles.size();

    const ClearSegment clear{mesh, map.grid, map.cell_triangles};
    const Attribution shares = attribute_surface_cells(map.grid, map.labels, bounded, options.subsamples, clear);
    map.unattributed_volume = shares.unattributed;

    const auto dist = distance_to_blocked(map.grid, blocked);
    const auto reps = representative_cells<3>(map.labels, dist, bounded);
    const Vec3 exterior = default_exterior(mesh);

    map.regions.resize(bounded + 1);
    for (std::uint32_t l = 0; l <= bounded; ++l) map.regions[l].id = to_region(l);
    for (std::uint32_t label : map.labels) {
        if (label != kSurfaceLabel) ++map.regions[label].voxel_count;
    }
    const double voxel = map.grid.cell_measure();
    for (std::uint32_t l = 0; l <= bounded; ++l) {
        RegionInfo& info = map.regions[l];
        info.volume = static_cast<double>(info.voxel_count) * voxel + shares.measure[l];
        if (reps[l] == std::numeric_limits<std::size_t>::max()) continue;
        info.representative = map.grid.center(map.grid.cell(reps[l]));
        info.oracle_winding = solid_angle_winding(info.representative, mesh);
        // The exterior carries index 0 by definition.
        info.index = l == kExteriorLabel
                         ? 0
                         : cable_index(info.representative, mesh, exterior, options.retry_budget, options.seed);
    }
    return map;
}

DegreeSummary total_degree(const RegionMap& regions) {
    DegreeSummary out;
    for (std::size_t l = 1; l < regions.regions.size(); ++l) {
        const auto& r = regions.regions[l];
        out.total_degree += r.index * r.volume;
        out.vdeg += std::abs(r.index) * r.volume;
    }
    return out;
}

DegreeSummary total_degree(const TriangleMesh& mesh, int resolution, const RegionOptions& options) {
    return total_degree(voxel_regions(mesh, resolution, options));
}

CableWord build_cable_word(const Cable& cable, const TriangleMesh& mesh, const RegionMap& regions,
                           std::string cable_id) {
    const auto events = cable_crossings(cable, mesh);
    std::vector<double> cuts;
    cuts.reserve(events.size() + 2);
    cuts.push_back(0.0);
    for (const auto& e : events) cuts.push_back(e.parameter);
    cuts.push_back(1.0);

    static constexpr double fractions[] = {0.5, 0.25, 0.75, 0.125, 0.875, 0.375, 0.625};
    std::vector<RegionId> pieces;
    pieces.reserve(cuts.size() - 1);
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
        const double a = cuts[j];
        const double b = cuts[j + 1];
        if (b - a <= 1e-12) {
            const std::size_t seg = std::min(j, cable.points.size() - 2);
            throw DegenerateCrossing("coincident crossings along cable", seg, cable.points[seg],
                                     cable.points[seg + 1], events[std::min(j, events.size() - 1)].triangle);
        }
        std::optional<RegionId> found;
        for (double f : fractions) {
            found = regions.voxel_region(cable.at(a + f * (b - a)));
            if (found) break;
        }
        if (!found) found = regions.locate(cable.at(0.5 * (a + b)), mesh);
        pieces.push_back(*found);
    }

    CableWord word;
    word.cable_id = std::move(cable_id);
    word.home = pieces.front();
    for (std::size_t j = 0; j < events.size(); ++j) {
        if (pieces[j] == pieces[j + 1]) {
            throw Error("crossing " + std::to_string(j + 1) + " separates two samples of region " +
                        pieces[j].str() + "; refine the resolution");
        }
        word.symbols.push_back({pieces[j], pieces[j + 1], events[j].sign});
    }
    return word;
}

void write_label_dump(std::ostream& out, const RegionMap& regions) {
    for (std::uint32_t label : regions.labels) {
        const unsigned char bytes[4] = {static_cast<unsigned char>(label & 0xFF),
                                        static_cast<unsigned char>((label >> 8) & 0xFF),
                                        static_cast<unsigned char>((label >> 16) & 0xFF),
                                        static_cast<unsigned char>((label >> 24) & 0xFF)};
        out.write(reinterpret_cast<const char*>(bytes), 4);
    }
}

}  // namespace cabledeg
