#include "cabledeg/mesh.hpp"

#include <array>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <sstream>
#include <utility>
#include <vector>

#include "cabledeg/errors.hpp"

namespace cabledeg {

Box3 TriangleMesh::bounding_box() const {
    Box3 box;
    for (Eigen::Index i = 0; i < vertices.rows(); ++i) box.extend(Vec3(vertices.row(i).transpose()));
    return box;
}

MeshReport validate_mesh(const TriangleMesh& mesh, double area_tolerance) {
    MeshReport report;
    report.bbox = mesh.bounding_box();
    const Eigen::Index nv = mesh.num_vertices();

    // (min, max) -> (uses min->max, uses max->min)
    std::map<std::pair<int, int>, std::pair<int, int>> edges;
    const double scale = std::max(1.0, report.bbox.isEmpty() ? 1.0 : report.bbox.sizes().squaredNorm());
    for (Eigen::Index t = 0; t < mesh.num_triangles(); ++t) {
        bool ok = true;
        for (int k = 0; k < 3; ++k) ok = ok && mesh.triangles(t, k) >= 0 && mesh.triangles(t, k) < nv;
        if (!ok) {
            ++report.invalid_indices;
            continue;
        }
        if (mesh.area_normal(t).norm() <= area_tolerance * scale) ++report.degenerate_triangles;
        for (int k = 0; k < 3; ++k) {
            const int a = mesh.triangles(t, k);
            const int b = mesh.triangles(t, (k + 1) % 3);
            auto& use = edges[{std::min(a, b), std::max(a, b)}];
            (a < b ? use.first : use.second) += 1;
        }
    }
    for (const auto& [edge, use] : edges) {
        if ((use.first + use.second) % 2 != 0) {
            ++report.open_edges;
        } else if (use.first != use.second) {
            ++report.inconsistent_edges;
        }
    }
    report.closed = report.open_edges == 0;
    report.oriented = report.inconsistent_edges == 0 && report.closed;
    return report;
}

TriangleMesh make_icosphere(int subdivisions, double radius, const Vec3& center) {
    if (subdivisions < 0) throw Error("icosphere subdivisions must be non-negative");
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> verts = {
        {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
        {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
        {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1},
    };
    for (auto& v : verts) v.normalize();
    std::vector<std::array<int, 3>> faces = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
        {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
        {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1},
    };
    for (int level = 0; level < subdivisions; ++level) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            auto key = std::make_pair(std::min(a, b), std::max(a, b));
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            verts.push_back((verts[a] + verts[b]).normalized());
            const int id = static_cast<int>(verts.size()) - 1;
            midpoint.emplace(key, id);
            return id;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(faces.size() * 4);
        for (const auto& f : faces) {
            const int ab = mid(f[0], f[1]);
            const int bc = mid(f[1], f[2]);
            const int ca = mid(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        faces = std::move(next);
    }

    TriangleMesh mesh;
    mesh.vertices.resize(static_cast<Eigen::Index>(verts.size()), 3);
    for (std::size_t i = 0; i < verts.size(); ++i) {
        mesh.vertices.row(static_cast<Eigen::Index>(i)) = (center + radius * verts[i]).transpose();
    }
    mesh.triangles.resize(static_cast<Eigen::Index>(faces.size()), 3);
    for (std::size_t i = 0; i < faces.size(); ++i) {
        auto f = faces[i];
        const Vec3 n = (verts[f[1]] - verts[f[0]]).cross(verts[f[2]] - verts[f[0]]);
        if (n.dot(verts[f[0]] + verts[f[1]] + verts[f[2]]) < 0) std::swap(f[1], f[2]);
        mesh.triangles.row(static_cast<Eigen::Index>(i)) << f[0], f[1], f[2];
    }
    return mesh;
}

TriangleMesh flipped(const TriangleMesh& mesh) {
    TriangleMesh out = mesh;
    out.triangles.col(1).swap(out.triangles.col(2));
    return out;
}

TriangleMesh merged(const TriangleMesh& a, const TriangleMesh& b) {
    TriangleMesh out;
    out.vertices.resize(a.num_vertices() + b.num_vertices(), 3);
    out.vertices.topRows(a.num_vertices()) = a.vertices;
    out.vertices.bottomRows(b.num_vertices()) = b.vertices;
    out.triangles.resize(a.num_triangles() + b.num_triangles(), 3);
    out.triangles.topRows(a.num_triangles()) = a.triangles;
    out.triangles.bottomRows(b.num_triangles()) =
        b.triangles.array() + static_cast<int>(a.num_vertices());
    return out;
}

TriangleMesh translated(TriangleMesh mesh, const Vec3& offset) {
    mesh.vertices.rowwise() += offset.transpose();
    return mesh;
}

double signed_volume(const TriangleMesh& mesh) {
    double six = 0.0;
    for (Eigen::Index t = 0; t < mesh.num_triangles(); ++t) {
        six += mesh.corner(t, 0).dot(mesh.corner(t, 1).cross(mesh.corner(t, 2)));
    }
    return six / 6.0;
}

namespace {

// Next non-empty, non-comment line; false at EOF.
bool next_line(std::istream& in, std::string& line, std::size_t& line_no) {
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
}

TriangleMesh assemble(const std::vector<Vec3>& verts, const std::vector<std::array<int, 3>>& faces) {
    TriangleMesh mesh;
    mesh.vertices.resize(static_cast<Eigen::Index>(verts.size()), 3);
    for (std::size_t i = 0; i < verts.size(); ++i) mesh.vertices.row(static_cast<Eigen::Index>(i)) = verts[i];
    mesh.triangles.resize(static_cast<Eigen::Index>(faces.size()), 3);
    for (std::size_t i = 0; i < faces.size(); ++i) {
        for (int k = 0; k < 3; ++k) {
            const int idx = faces[i][k];
            if (idx < 0 || idx >= static_cast<int>(verts.size())) {
                throw ParseError("face " + std::to_string(i) + " references missing vertex " +
                                     std::to_string(idx),
                                 0, 0);
            }
            mesh.triangles(static_cast<Eigen::Index>(i), k) = idx;
        }
    }
    return mesh;
}

}  // namespace

TriangleMesh read_off(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!next_line(in, line, line_no)) throw ParseError("empty OFF input", 1, 1);
    std::istringstream head(line);
    std::string magic;
    head >> magic;
    if (magic != "OFF") throw ParseError("missing OFF header", line_no, 1);
    long nv = -1;
    long nf = -1;
    if (!(head >> nv >> nf)) {
        if (!next_line(in, line, line_no)) throw ParseError("missing OFF counts", line_no, 1);
        std::istringstream counts(line);
        if (!(counts >> nv >> nf)) throw ParseError("malformed OFF counts", line_no, 1);
    }
    if (nv < 0 || nf < 0) throw ParseError("negative OFF counts", line_no, 1);

    std::vector<Vec3> verts;
    verts.reserve(static_cast<std::size_t>(nv));
    for (long i = 0; i < nv; ++i) {
        if (!next_line(in, line, line_no)) throw ParseError("truncated OFF vertex list", line_no, 1);
        std::istringstream ls(line);
        Vec3 v;
        if (!(ls >> v.x() >> v.y() >> v.z())) throw ParseError("malformed OFF vertex", line_no, 1);
        verts.push_back(v);
    }
    std::vector<std::array<int, 3>> faces;
    faces.reserve(static_cast<std::size_t>(nf));
    for (long i = 0; i < nf; ++i) {
        if (!next_line(in, line, line_no)) throw ParseError("truncated OFF face list", line_no, 1);
        std::istringstream ls(line);
        int count = 0;
        std::array<int, 3> f{};
        if (!(ls >> count)) throw ParseError("malformed OFF face", line_no, 1);
        if (count != 3) throw ParseError("OFF face is not a triangle", line_no, 1);
        if (!(ls >> f[0] >> f[1] >> f[2])) throw ParseError("malformed OFF face", line_no, 1);
        faces.push_back(f);
    }
    try {
        return assemble(verts, faces);
    } catch (const ParseError& e) {
        throw ParseError(std::string("OFF: ") + e.what(), line_no, 0);
    }
}

TriangleMesh read_obj(std::istream& in) {
    std::vector<Vec3> verts;
    std::vector<std::array<int, 3>> faces;
    std::string line;
    std::size_t line_no = 0;
    while (next_line(in, line, line_no)) {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "v") {
            Vec3 v;
            if (!(ls >> v.x() >> v.y() >> v.z())) throw ParseError("malformed OBJ vertex", line_no, 1);
            verts.push_back(v);
        } else if (tag == "f") {
            std::vector<int> idx;
            std::string tok;
            while (ls >> tok) {
                const auto slash = tok.find('/');
                int i = 0;
                try {
                    i = std::stoi(tok.substr(0, slash));
                } catch (const std::exception&) {
                    throw ParseError("malformed OBJ face index '" + tok + "'", line_no, 1);
                }
                if (i == 0) throw ParseError("OBJ indices are 1-based", line_no, 1);
                idx.push_back(i > 0 ? i - 1 : static_cast<int>(verts.size()) + i);
            }
            if (idx.size() != 3) throw ParseError("OBJ face is not a triangle", line_no, 1);
            faces.push_back({idx[0], idx[1], idx[2]});
        }
    }
    return assemble(verts, faces);
}

TriangleMesh read_mesh(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open mesh file " + path.string());
    const auto ext = path.extension().string();
    if (ext == ".off" || ext == ".OFF") return read_off(in);
    if (ext == ".obj" || ext == ".OBJ") return read_obj(in);
    throw Error("unsupported mesh format '" + ext + "' (expected .off or .obj)");
}

void write_off(std::ostream& out, const TriangleMesh& mesh) {
    out << "OFF\n" << mesh.num_vertices() << ' ' << mesh.num_triangles() << " 0\n";
    out << std::setprecision(17);
    for (Eigen::Index i = 0; i < mesh.num_vertices(); ++i) {
        out << mesh.vertices(i, 0) << ' ' << mesh.vertices(i, 1) << ' ' << mesh.vertices(i, 2) << '\n';
    }
    for (Eigen::Index t = 0; t < mesh.num_triangles(); ++t) {
        out << "3 " << mesh.triangles(t, 0) << ' ' << mesh.triangles(t, 1) << ' ' << mesh.triangles(t, 2)
            << '\n';
    }
}

void write_obj(std::ostream& out, const TriangleMesh& mesh) {
    out << std::setprecision(17);
    for (Eigen::Index i = 0; i < mesh.num_vertices(); ++i) {
        out << "v " << mesh.vertices(i, 0) << ' ' << mesh.vertices(i, 1) << ' ' << mesh.vertices(i, 2)
            << '\n';
    }
    for (Eigen::Index t = 0; t < mesh.num_triangles(); ++t) {
        out << "f " << mesh.triangles(t, 0) + 1 << ' ' << mesh.triangles(t, 1) + 1 << ' '
            << mesh.triangles(t, 2) + 1 << '\n';
    }
}

void write_mesh(const std::filesystem::path& path, const TriangleMesh& mesh) {
    const auto ext = path.extension().string();
    const bool obj = ext == ".obj" || ext == ".OBJ";
    if (!obj && ext != ".off" && ext != ".OFF") {
        throw Error("unsupported mesh format '" + ext + "' (expected .off or .obj)");
    }
    std::ofstream out(path);
    if (!out) throw Error("cannot write mesh file " + path.string());
    if (obj) {
        write_obj(out, mesh);
    } else {
        write_off(out, mesh);
    }
}

}  // namespace cabledeg
