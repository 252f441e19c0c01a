#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <filesystem>
#include <iosfwd>
#include <string>

namespace cabledeg {

using Vec3 = Eigen::Vector3d;
using Box3 = Eigen::AlignedBox3d;

/// Indexed triangle mesh. Triangle normals follow (v1 - v0) x (v2 - v0).
struct TriangleMesh {
    Eigen::MatrixX3d vertices;
    Eigen::MatrixX3i triangles;

    Eigen::Index num_vertices() const { return vertices.rows(); }
    Eigen::Index num_triangles() const { return triangles.rows(); }
    bool empty() const { return triangles.rows() == 0; }

    Vec3 corner(Eigen::Index tri, int k) const { return vertices.row(triangles(tri, k)).transpose(); }

    /// Unnormalised normal (twice the area vector).
    Vec3 area_normal(Eigen::Index tri) const {
        const Vec3 a = corner(tri, 0);
        return (corner(tri, 1) - a).cross(corner(tri, 2) - a);
    }

    Box3 bounding_box() const;
};

struct MeshReport {
    bool closed = true;
    bool oriented = true;
    std::size_t open_edges = 0;
    std::size_t inconsistent_edges = 0;
    std::size_t degenerate_triangles = 0;
    std::size_t invalid_indices = 0;
    Box3 bbox;

    bool valid() const {
        return closed && oriented && degenerate_triangles == 0 && invalid_indices == 0;
    }
};

/// Closed + oriented means: for every undirected edge {a,b}, the directed
/// uses a->b and b->a are equally many. An odd total is an open edge; an even
/// but unbalanced total is an orientation inconsistency.
MeshReport validate_mesh(const TriangleMesh& mesh, double area_tolerance = 1e-14);

/// Subdivided icosahedron projected to the sphere, outward normals.
TriangleMesh make_icosphere(int subdivisions, double radius = 1.0, const Vec3& center = Vec3::Zero());

/// Reverses every triangle's winding.
TriangleMesh flipped(const TriangleMesh& mesh);

/// Disjoint union of two meshes (vertex indices of `b` shifted).
TriangleMesh merged(const TriangleMesh& a, const TriangleMesh& b);

TriangleMesh translated(TriangleMesh mesh, const Vec3& offset);

/// Signed enclosed volume (1/6) sum v0 . (v1 x v2); equals the integral of
/// the winding number for a closed mesh.
double signed_volume(const TriangleMesh& mesh);

TriangleMesh read_off(std::istream& in);
TriangleMesh read_obj(std::istream& in);
/// Dispatches on extension (.off / .obj).
TriangleMesh read_mesh(const std::filesystem::path& path);

void write_off(std::ostream& out, const TriangleMesh& mesh);
void write_obj(std::ostream& out, const TriangleMesh& mesh);
void write_mesh(const std::filesystem::path& path, const TriangleMesh& mesh);

}  // namespace cabledeg
