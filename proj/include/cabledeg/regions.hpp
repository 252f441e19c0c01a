#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "cabledeg/crossings.hpp"
#include "cabledeg/lattice.hpp"
#include "cabledeg/mesh.hpp"
#include "cabledeg/word.hpp"

namespace cabledeg {

struct RegionInfo {
    RegionId id;
    int index = 0;
    double volume = 0;             ///< labelled voxels plus attributed surface-voxel share
    std::size_t voxel_count = 0;   ///< labelled (non-surface) voxels only
    Vec3 representative = Vec3::Zero();
    double oracle_winding = 0;     ///< solid-angle winding at the representative
};

struct RegionOptions {
    int retry_budget = 8;
    std::uint64_t seed = 0;
    /// Sub-samples per axis used to split surface voxels between regions.
    int subsamples = 4;
    /// Lattice side as a multiple of the largest bounding-box extent.
    double padding = 1.5;
};

/// Voxel decomposition of the complement of a mesh. regions[0] is the
/// exterior, regions[k] carries label k.
struct RegionMap {
    Lattice<3> grid;
    std::vector<std::uint32_t> labels;
    std::vector<RegionInfo> regions;
    std::size_t surface_voxels = 0;
    /// Surface-voxel volume no region could claim.
    double unattributed_volume = 0;
    CellPrimitives cell_triangles;

    std::size_t bounded_count() const { return regions.empty() ? 0 : regions.size() - 1; }
    const RegionInfo& region(RegionId id) const;

    /// Label of the voxel holding `p` (exterior outside the lattice), or
    /// nullopt for a surface-adjacent voxel.
    std::optional<RegionId> voxel_region(const Vec3& p) const;

    /// Like voxel_region, but resolves surface-adjacent voxels by a clear
    /// segment to a nearby labelled voxel. Throws Error if unresolvable.
    RegionId locate(const Vec3& p, const TriangleMesh& mesh) const;

    std::map<RegionId, double> volumes() const;
    std::map<RegionId, int> indices() const;
};

/// Throws Error when resolution < 8.
RegionMap voxel_regions(const TriangleMesh& mesh, int resolution, const RegionOptions& options = {});

struct DegreeSummary {
    double total_degree = 0;  ///< sum index * volume over bounded regions
    double vdeg = 0;          ///< sum |index| * volume over bounded regions
};

DegreeSummary total_degree(const RegionMap& regions);
DegreeSummary total_degree(const TriangleMesh& mesh, int resolution, const RegionOptions& options = {});

/// Cable word read off the geometry: one symbol per crossing, regions taken
/// from `regions` at sample points of the pieces between crossings.
CableWord build_cable_word(const Cable& cable, const TriangleMesh& mesh, const RegionMap& regions,
                           std::string cable_id = {});

/// Raw little-endian uint32 labels, x slowest then y then z.
void write_label_dump(std::ostream& out, const RegionMap& regions);

}  // namespace cabledeg
