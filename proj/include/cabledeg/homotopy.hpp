#pragma once

// Discrete null homotopies of a triangulated sphere: frames of vertex
// positions over fixed connectivity, linear in time between frames.

#include <cstdint>
#include <filesystem>
#include <vector>

#include "cabledeg/mesh.hpp"
#include "cabledeg/regions.hpp"

namespace cabledeg {

struct DiscreteHomotopy {
    Eigen::MatrixX3i triangles;
    std::vector<Eigen::MatrixX3d> frames;
    std::vector<double> times;  ///< non-decreasing, 0 first, 1 last

    std::size_t num_steps() const { return frames.empty() ? 0 : frames.size() - 1; }
    TriangleMesh frame_mesh(std::size_t k) const { return {frames[k], triangles}; }
    /// Surface at time t. Right-continuous: a zero-width step jumps at its time.
    TriangleMesh at(double t) const;
    /// Centroid of the final frame's vertices.
    Vec3 terminal_point() const;
};

/// Throws Error unless frames share connectivity, times run 0 -> 1
/// non-decreasing, and the last frame sits within `collapse_tolerance` of one point.
void validate_homotopy(const DiscreteHomotopy& h, double collapse_tolerance = 1e-9);

/// H(p, t) = center + (1 - t)(p - center), `steps` uniform steps.
DiscreteHomotopy radial_contraction(const TriangleMesh& mesh, int steps, const Vec3& center = Vec3::Zero());

/// Translate by `offset`, translate back, then contract radially about the
/// original mesh centroid; `steps_per_phase` steps in each of the three phases.
DiscreteHomotopy translate_return_contract(const TriangleMesh& mesh, const Vec3& offset, int steps_per_phase);

/// Radial contraction of a smoothly perturbed copy of `mesh`, with an extra
/// smooth time-dependent wobble of relative size `amplitude` that vanishes at
/// both ends. Deterministic in `seed`.
DiscreteHomotopy wobble_contraction(const TriangleMesh& mesh, std::uint64_t seed, double amplitude, int steps);

/// `hold_steps` stationary steps, then a zero-width snap to the centroid at t = 1.
DiscreteHomotopy hold_then_snap(const TriangleMesh& mesh, int hold_steps);

/// Frames with uniform times; every mesh must share the first one's triangles.
DiscreteHomotopy from_frames(const std::vector<TriangleMesh>& meshes);

/// Every .off / .obj file in `dir`, in file-name order.
DiscreteHomotopy load_frame_directory(const std::filesystem::path& dir);

struct SweptVolume {
    double volume = 0;               ///< sum of |signed tetra volume|
    std::size_t prisms = 0;
    std::size_t stationary_prisms = 0;
    std::size_t inward_tets = 0;     ///< moving against the triangle normal
    std::size_t degenerate_tets = 0; ///< zero signed volume in a moving prism
};

/// Each triangle x time-step prism splits into three tetrahedra along
/// diagonals fixed by global vertex order, so shared quad faces agree.
SweptVolume swept_volume(const DiscreteHomotopy& h);

/// Number of swept tetrahedra containing `point`: the discrete count of how
/// often the surface passes through it.
int crossing_count(const Vec3& point, const DiscreteHomotopy& h);

/// Piecewise-constant, right-continuous index of a fixed point over time.
/// values has one more entry than times; values[k] holds on [times[k-1], times[k]).
struct IndexTrace {
    Vec3 point = Vec3::Zero();
    std::vector<double> times;
    std::vector<int> values;
    bool uncertain = false;  ///< some jump could not be localised within the guard band

    int start() const { return values.front(); }
    int end() const { return values.back(); }
    int variation() const;
    bool monotone() const;
};

/// Samples the rounded solid-angle winding at `substeps` points per frame
/// step and bisects every change of value down to `time_tolerance`.
IndexTrace index_trace(const Vec3& point, const DiscreteHomotopy& h, int substeps = 8, double time_tolerance = 1e-9);

struct SenseReport {
    std::size_t positive = 0;
    std::size_t negative = 0;
    std::size_t zero = 0;
    double min_rate = 0;
    double max_rate = 0;

    /// No motion at all.
    bool degenerate() const { return positive == 0 && negative == 0; }
    bool sense_preserving() const { return !degenerate() && (positive == 0 || negative == 0); }
};

/// Normal velocity <d/dt centroid, unit normal> of every triangle over every
/// step; zero-width steps use the displacement instead of the rate.
SenseReport sense_preserving_report(const DiscreteHomotopy& h);

struct LowerBoundOptions {
    RegionOptions regions;
    /// Surface discretisation error in volume units (e.g. icosphere vs ball).
    double mesh_error = 0;
    /// Relative slack on |D|.
    double slack = 0.01;
};

struct LowerBoundReport {
    SweptVolume swept;
    DegreeSummary degree;
    double enclosed_volume = 0;  ///< exact signed volume of frame 0
    double margin_degree = 0;    ///< swept - |D|
    double margin_vdeg = 0;      ///< swept - V_deg
    double tolerance = 0;
    bool violation = false;
    SenseReport sense;
};

/// Swept volume against the degree aggregates of frame 0. Tolerance is
/// mesh_error + |D_voxel - enclosed_volume| + slack |D|.
LowerBoundReport verify_lower_bound(const DiscreteHomotopy& h, int resolution, const LowerBoundOptions& options = {});

}  // namespace cabledeg
