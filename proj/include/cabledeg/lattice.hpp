#pragma once

// Dimension-generic uniform lattice used for voxel (3D) and pixel (2D)
// decompositions of the complement of a surface or curve.

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <unordered_map>
#include <vector>

#include "cabledeg/errors.hpp"

namespace cabledeg {

/// Label of a cell touched by the surface.
inline constexpr std::uint32_t kSurfaceLabel = std::numeric_limits<std::uint32_t>::max();
/// Label of the bounding-box-touching component.
inline constexpr std::uint32_t kExteriorLabel = 0;

/// Primitive ids (triangles or curve edges) overlapping each surface cell.
using CellPrimitives = std::unordered_map<std::size_t, std::vector<Eigen::Index>>;

/// Cubic cells, `resolution` per axis. Flat indices are row-major with the
/// first axis slowest: for 3D, (i * n + j) * n + k.
template <int Dim>
struct Lattice {
    using Point = Eigen::Matrix<double, Dim, 1>;
    using Cell = Eigen::Matrix<int, Dim, 1>;
    using Box = Eigen::AlignedBox<double, Dim>;

    Point origin = Point::Zero();
    double spacing = 1.0;
    int resolution = 0;

    /// Cube centred on `bbox` with side `padding` times its largest extent;
    /// an empty box maps to [-1, 1]^Dim.
    static Lattice around(const Box& bbox, int resolution, double padding = 1.5) {
        Lattice lat;
        lat.resolution = resolution;
        Point center = Point::Zero();
        double side = 2.0;
        if (!bbox.isEmpty()) {
            center = bbox.center();
            side = padding * bbox.sizes().maxCoeff();
            if (side <= 0) side = 2.0;
        }
        lat.spacing = side / resolution;
        lat.origin = center - Point::Constant(side / 2);
        return lat;
    }

    std::size_t size() const {
        std::size_t n = 1;
        for (int d = 0; d < Dim; ++d) n *= static_cast<std::size_t>(resolution);
        return n;
    }

    std::size_t flat(const Cell& c) const {
        std::size_t idx = 0;
        for (int d = 0; d < Dim; ++d) idx = idx * static_cast<std::size_t>(resolution) + static_cast<std::size_t>(c[d]);
        return idx;
    }

    Cell cell(std::size_t flat) const {
        Cell c;
        for (int d = Dim - 1; d >= 0; --d) {
            c[d] = static_cast<int>(flat % static_cast<std::size_t>(resolution));
            flat /= static_cast<std::size_t>(resolution);
        }
        return c;
    }

    bool valid(const Cell& c) const { return (c.array() >= 0).all() && (c.array() < resolution).all(); }

    bool on_boundary(const Cell& c) const { return (c.array() == 0).any() || (c.array() == resolution - 1).any(); }

    Point center(const Cell& c) const { return origin + spacing * (c.template cast<double>().array() + 0.5).matrix(); }

    Box cell_box(const Cell& c) const {
        const Point lo = origin + spacing * c.template cast<double>();
        return Box(lo, (lo.array() + spacing).matrix());
    }

    Box extent() const { return Box(origin, (origin.array() + spacing * resolution).matrix()); }

    /// Cell containing `p`, clamped into the lattice.
    Cell clamp_cell(const Point& p) const {
        Cell c;
        for (int d = 0; d < Dim; ++d) {
            const double f = std::floor((p[d] - origin[d]) / spacing);
            c[d] = static_cast<int>(std::clamp(f, 0.0, static_cast<double>(resolution - 1)));
        }
        return c;
    }

    std::optional<Cell> locate(const Point& p) const {
        if (!extent().contains(p)) return std::nullopt;
        return clamp_cell(p);
    }

    double cell_measure() const { return std::pow(spacing, Dim); }
};

namespace detail {

template <int Dim, typename Visit>
void for_each_face_neighbor(const Lattice<Dim>& lat, const typename Lattice<Dim>::Cell& c, Visit&& visit) {
    for (int d = 0; d < Dim; ++d) {
        for (int step : {-1, 1}) {
            auto n = c;
            n[d] += step;
            if (n[d] >= 0 && n[d] < lat.resolution) visit(n);
        }
    }
}

}  // namespace detail

/// Face-connected components of the unblocked cells. Blocked cells get
/// kSurfaceLabel, every component touching the lattice boundary gets
/// kExteriorLabel and the remaining components 1..N in order of their first
/// cell. Returns N.
template <int Dim>
std::uint32_t label_components(const Lattice<Dim>& lat, const std::vector<std::uint8_t>& blocked,
                               std::vector<std::uint32_t>& labels) {
    constexpr std::uint32_t unset = kSurfaceLabel - 1;
    const std::size_t n = lat.size();
    labels.assign(n, unset);
    std::uint32_t next = 1;
    std::vector<std::size_t> component;
    std::deque<std::size_t> queue;
    for (std::size_t start = 0; start < n; ++start) {
        if (blocked[start]) {
            labels[start] = kSurfaceLabel;
            continue;
        }
        if (labels[start] != unset) continue;
        component.clear();
        bool exterior = false;
        labels[start] = next;
        queue.push_back(start);
        while (!queue.empty()) {
            const std::size_t cur = queue.front();
            queue.pop_front();
            component.push_back(cur);
            const auto c = lat.cell(cur);
            exterior = exterior || lat.on_boundary(c);
            detail::for_each_face_neighbor(lat, c, [&](const auto& nb) {
                const std::size_t f = lat.flat(nb);
                if (!blocked[f] && labels[f] == unset) {
                    labels[f] = next;
                    queue.push_back(f);
                }
            });
        }
        if (exterior) {
            for (auto f : component) labels[f] = kExteriorLabel;
        } else {
            ++next;
        }
    }
    return next - 1;
}

/// Face-step distance of every cell to the nearest blocked cell (blocked
/// cells have distance 0). Cells with no blocked cell anywhere get INT_MAX.
template <int Dim>
std::vector<int> distance_to_blocked(const Lattice<Dim>& lat, const std::vector<std::uint8_t>& blocked) {
    std::vector<int> dist(lat.size(), std::numeric_limits<int>::max());
    std::deque<std::size_t> queue;
    for (std::size_t f = 0; f < dist.size(); ++f) {
        if (blocked[f]) {
            dist[f] = 0;
            queue.push_back(f);
        }
    }
    while (!queue.empty()) {
        const std::size_t cur = queue.front();
        queue.pop_front();
        detail::for_each_face_neighbor(lat, lat.cell(cur), [&](const auto& nb) {
            const std::size_t f = lat.flat(nb);
            if (dist[f] == std::numeric_limits<int>::max()) {
                dist[f] = dist[cur] + 1;
                queue.push_back(f);
            }
        });
    }
    return dist;
}

/// Cell offsets within Chebyshev radius `radius`, nearest first.
template <int Dim>
std::vector<typename Lattice<Dim>::Cell> neighborhood_offsets(int radius) {
    using Cell = typename Lattice<Dim>::Cell;
    std::vector<Cell> out;
    const int width = 2 * radius + 1;
    int total = 1;
    for (int d = 0; d < Dim; ++d) total *= width;
    for (int i = 0; i < total; ++i) {
        Cell c;
        int rest = i;
        for (int d = Dim - 1; d >= 0; --d) {
            c[d] = rest % width - radius;
            rest /= width;
        }
        if (c.isZero()) continue;
        out.push_back(c);
    }
    std::stable_sort(out.begin(), out.end(), [](const Cell& a, const Cell& b) {
        return a.squaredNorm() < b.squaredNorm();
    });
    return out;
}

/// Region label of a point that may sit in a surface cell: the label of the
/// nearest labelled cell within `radius` whose centre is reachable by a
/// segment that `clear(p, q)` reports as not meeting the surface.
template <int Dim, typename ClearFn>
std::optional<std::uint32_t> resolve_label(const Lattice<Dim>& lat, const std::vector<std::uint32_t>& labels,
                                           const typename Lattice<Dim>::Point& p,
                                           const std::vector<typename Lattice<Dim>::Cell>& offsets,
                                           ClearFn&& clear) {
    const auto home = lat.locate(p);
    if (!home) return kExteriorLabel;
    const std::uint32_t own = labels[lat.flat(*home)];
    if (own != kSurfaceLabel) return own;
    for (const auto& off : offsets) {
        const typename Lattice<Dim>::Cell q = *home + off;
        if (!lat.valid(q)) continue;
        const std::uint32_t label = labels[lat.flat(q)];
        if (label == kSurfaceLabel) continue;
        if (clear(p, lat.center(q))) return label;
    }
    return std::nullopt;
}

struct Attribution {
    std::vector<double> measure;  ///< indexed by label (0 = exterior)
    double unattributed = 0.0;
};

/// Distributes the measure of every surface cell among the regions by
/// sampling `subsamples`^Dim points per cell and resolving each with
/// resolve_label.
template <int Dim, typename ClearFn>
Attribution attribute_surface_cells(const Lattice<Dim>& lat, const std::vector<std::uint32_t>& labels,
                                    std::uint32_t bounded_count, int subsamples, ClearFn&& clear) {
    using Cell = typename Lattice<Dim>::Cell;
    using Point = typename Lattice<Dim>::Point;
    Attribution out;
    out.measure.assign(bounded_count + 1, 0.0);
    const auto offsets = neighborhood_offsets<Dim>(2);
    int per_cell = 1;
    for (int d = 0; d < Dim; ++d) per_cell *= subsamples;
    const double sub_measure = lat.cell_measure() / per_cell;
    const double step = lat.spacing / subsamples;

    for (std::size_t f = 0; f < labels.size(); ++f) {
        if (labels[f] != kSurfaceLabel) continue;
        const Cell c = lat.cell(f);
        const Point lo = lat.cell_box(c).min();
        for (int s = 0; s < per_cell; ++s) {
            Point p;
            int rest = s;
            for (int d = Dim - 1; d >= 0; --d) {
                p[d] = lo[d] + step * ((rest % subsamples) + 0.5);
                rest /= subsamples;
            }
            if (auto label = resolve_label(lat, labels, p, offsets, clear)) {
                out.measure[*label] += sub_measure;
            } else {
                out.unattributed += sub_measure;
            }
        }
    }
    return out;
}

/// Per-label cell that maximises distance to the blocked cells; ties go to
/// the lowest flat index. Index 0 (exterior) is included.
template <int Dim>
std::vector<std::size_t> representative_cells(const std::vector<std::uint32_t>& labels, const std::vector<int>& dist,
                                              std::uint32_t bounded_count) {
    std::vector<std::size_t> best(bounded_count + 1, std::numeric_limits<std::size_t>::max());
    std::vector<int> best_dist(bounded_count + 1, -1);
    for (std::size_t f = 0; f < labels.size(); ++f) {
        const std::uint32_t l = labels[f];
        if (l == kSurfaceLabel) continue;
        if (dist[f] > best_dist[l]) {
            best_dist[l] = dist[f];
            best[l] = f;
        }
    }
    return best;
}

}  // namespace cabledeg
