#include <doctest.h>

#include <random>

#include "cabledeg/crossings.hpp"
#include "cabledeg/errors.hpp"
#include "cabledeg/kernels.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

using namespace cabledeg;
using namespace cabledeg::testing;

namespace {

// Slightly off-axis so nothing passes near an icosphere vertex or edge.
const Vec3 kSkew = Vec3(1.0, 0.0123, 0.0371).normalized();

Vec3 random_in_box(std::mt19937_64& rng, const Box3& box) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Vec3 lo = box.min() - 0.25 * box.diagonal();
    const Vec3 span = 1.5 * box.diagonal();
    return lo + Vec3(u(rng), u(rng), u(rng)).cwiseProduct(span);
}

}  // namespace

TEST_CASE("segment/triangle kernel") {
    const Vec3 a(0, 0, 0), b(1, 0, 0), c(0, 1, 0);
    auto hit = intersect_segment_triangle<double>(Vec3(0.2, 0.2, -1), Vec3(0.2, 0.2, 1), a, b, c);
    CHECK(hit.kind == HitKind::Transverse);
    CHECK(hit.sign == 1);
    CHECK(hit.t == doctest::Approx(0.5));
    hit = intersect_segment_triangle<double>(Vec3(0.2, 0.2, 1), Vec3(0.2, 0.2, -1), a, b, c);
    CHECK(hit.sign == -1);
    CHECK(intersect_segment_triangle<double>(Vec3(2, 2, -1), Vec3(2, 2, 1), a, b, c).kind == HitKind::None);
    CHECK(intersect_segment_triangle<double>(Vec3(0.5, 0, -1), Vec3(0.5, 0, 1), a, b, c).kind == HitKind::Degenerate);
    CHECK(intersect_segment_triangle<double>(Vec3(0, 0, -1), Vec3(0, 0, 1), a, b, c).kind == HitKind::Degenerate);
    CHECK(intersect_segment_triangle<double>(Vec3(0.2, 0.2, 0), Vec3(0.2, 0.2, 1), a, b, c).kind == HitKind::Degenerate);
    CHECK(intersect_segment_triangle<double>(Vec3(-1, 0.2, 0), Vec3(1, 0.2, 0), a, b, c).kind != HitKind::Transverse);
    CHECK(intersect_segment_triangle<double>(Vec3(0.2, 0.2, 0.5), Vec3(0.2, 0.2, 1), a, b, c).kind == HitKind::None);
}

TEST_CASE("solid angle of a triangle") {
    const Vec3 a(0, 0, 0), b(1, 0, 0), c(0, 1, 0);
    const double below = signed_solid_angle<double>(Vec3(0.2, 0.2, -1e-3), a, b, c);
    const double above = signed_solid_angle<double>(Vec3(0.2, 0.2, 1e-3), a, b, c);
    CHECK(below == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-2));
    CHECK(above == doctest::Approx(-2.0 * std::numbers::pi).epsilon(1e-2));
}

TEST_CASE("crossings along a diameter of a sphere") {
    const auto sphere = make_icosphere(3);
    const Cable cable{{-2.0 * kSkew, 2.0 * kSkew}};
    const auto events = cable_crossings(cable, sphere);
    REQUIRE(events.size() == 2);
    CHECK(events[0].sign == -1);
    CHECK(events[1].sign == 1);
    CHECK(events[0].parameter < events[1].parameter);
    CHECK(events[0].position.norm() == doctest::Approx(1.0).epsilon(0.01));

    const auto brute = brute_crossings(cable.points[0], cable.points[1], sphere);
    REQUIRE(brute.size() == 2);
    CHECK(brute[0].second == -1);
    CHECK(brute[1].second == 1);
    CHECK(brute[0].first == doctest::Approx(events[0].parameter));

    CHECK(cable_crossings(Cable{{Vec3(3, 0.1, 0.2), Vec3(5, 0.3, 0.1)}}, sphere).empty());
}

TEST_CASE("nested spheres: two outward crossings") {
    const auto mesh = nested_spheres();
    const Cable cable{{Vec3::Zero() + 0.01 * Vec3(0.3, 0.7, 0.1), 3.0 * kSkew}};
    const auto events = cable_crossings(cable, mesh);
    REQUIRE(events.size() == 2);
    CHECK(events[0].sign == 1);
    CHECK(events[1].sign == 1);
    CHECK(cable_index_along(cable, mesh) == brute_index(cable.points[0], cable.points[1], mesh));
}

TEST_CASE("cable parameters follow arc length") {
    const Cable cable{{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 3, 0)}};
    CHECK(cable.length() == doctest::Approx(4.0));
    CHECK(cable.parameter(0, 0.5) == doctest::Approx(0.125));
    CHECK(cable.parameter(1, 0.5) == doctest::Approx(0.625));
    CHECK((cable.at(0.625) - Vec3(1, 1.5, 0)).norm() < 1e-12);
    CHECK_THROWS_AS(cable_crossings(Cable{{Vec3::Zero()}}, make_icosphere(0)), Error);
}

TEST_CASE("a cable through a vertex is degenerate") {
    const auto sphere = make_icosphere(2);
    const Vec3 v = sphere.vertices.row(5).transpose();
    const Cable cable{{Vec3::Zero(), 2.0 * v}};
    CHECK_THROWS_AS(cable_crossings(cable, sphere), DegenerateCrossing);
    // The jittered retry still gets the right answer.
    CHECK(cable_index(Vec3::Zero(), sphere, 2.0 * v) == 1);
}

TEST_CASE("cable index on simple meshes") {
    const auto sphere = make_icosphere(3);
    const Vec3 ext = default_exterior(sphere);
    CHECK(cable_index(Vec3(0.1, 0.2, 0.05), sphere, ext) == 1);
    CHECK(cable_index(Vec3(1.3, 0.2, 0.05), sphere, ext) == 0);
    CHECK(cable_index(Vec3(0.1, 0.2, 0.05), flipped(sphere), ext) == -1);
    const auto nested = nested_spheres();
    CHECK(cable_index(Vec3(0.1, 0.2, 0.05), nested, default_exterior(nested)) == 2);
    CHECK(cable_index(Vec3(1.5, 0.2, 0.05), nested, default_exterior(nested)) == 1);
    const auto lens = overlapping_spheres();
    CHECK(cable_index(Vec3(0.01, 0.02, 0.03), lens, default_exterior(lens)) == 2);
    const auto cancel = cancelling_spheres();
    CHECK(cable_index(Vec3(0.01, 0.02, 0.03), cancel, default_exterior(cancel)) == 0);
    CHECK(cable_index(Vec3(-1.2, 0.02, 0.03), cancel, default_exterior(cancel)) == 1);
    CHECK(cable_index(Vec3(1.2, 0.02, 0.03), cancel, default_exterior(cancel)) == -1);
}

TEST_CASE("a query point on a vertex exhausts its retries") {
    const auto sphere = make_icosphere(2);
    const Vec3 v = sphere.vertices.row(3).transpose();
    CHECK_THROWS_AS(cable_index(v, sphere, default_exterior(sphere), 4), RetriesExhausted);
}

TEST_CASE("solid-angle winding on simple meshes") {
    const auto sphere = make_icosphere(3);
    CHECK(solid_angle_winding(Vec3(0.1, 0.2, 0.05), sphere) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(solid_angle_winding(Vec3(1.5, 0.2, 0.05), sphere)) < 1e-6);
    CHECK(solid_angle_winding(Vec3(0.1, 0.2, 0.05), nested_spheres()) == doctest::Approx(2.0).epsilon(1e-6));
    CHECK_THROWS_AS(rounded_winding(sphere.vertices.row(0).transpose(), sphere), GuardExceeded);
}

TEST_CASE("index is independent of the cable") {
    std::mt19937_64 rng(7);
    for (const auto& [name, mesh] : mesh_corpus()) {
        CAPTURE(name);
        const Vec3 ext = default_exterior(mesh);
        for (int pair = 0; pair < 20; ++pair) {
            const Vec3 p = random_in_box(rng, mesh.bounding_box());
            int reference = 0;
            bool have_reference = false;
            for (std::uint64_t seed = 1; seed <= 5; ++seed) {
                int value = 0;
                try {
                    value = cable_index_along(jittered_cable(p, ext, seed * 1000 + pair), mesh);
                } catch (const DegenerateCrossing&) {
                    continue;
                }
                if (!have_reference) {
                    reference = value;
                    have_reference = true;
                }
                CHECK(value == reference);
            }
        }
    }
}

TEST_CASE("cable index agrees with solid-angle winding and brute force") {
    std::mt19937_64 rng(11);
    for (const auto& [name, mesh] : mesh_corpus()) {
        CAPTURE(name);
        const Vec3 ext = default_exterior(mesh);
        for (int i = 0; i < 60; ++i) {
            const Vec3 p = random_in_box(rng, mesh.bounding_box());
            const int idx = cable_index(p, mesh, ext);
            CHECK(idx == rounded_winding(p, mesh));
            CHECK(idx == brute_index(p, ext, mesh));
        }
        // Exterior points have index 0.
        CHECK(cable_index(ext, mesh, ext + Vec3(1, 2, 3)) == 0);
    }
}

TEST_CASE("reversing orientation negates the index") {
    std::mt19937_64 rng(5);
    for (const auto& [name, mesh] : mesh_corpus()) {
        CAPTURE(name);
        const auto inverse = flipped(mesh);
        const Vec3 ext = default_exterior(mesh);
        for (int i = 0; i < 30; ++i) {
            const Vec3 p = random_in_box(rng, mesh.bounding_box());
            CHECK(cable_index(p, inverse, ext) == -cable_index(p, mesh, ext));
        }
    }
}
