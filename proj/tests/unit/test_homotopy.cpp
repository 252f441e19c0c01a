#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>

#include "cabledeg/errors.hpp"
#include "cabledeg/homotopy.hpp"

using namespace cabledeg;

namespace {

constexpr double kBall = 4.0 * std::numbers::pi / 3.0;

std::vector<int> values(const IndexTrace& t) { return t.values; }

}  // namespace

TEST_CASE("validation of discrete homotopies") {
    const auto sphere = make_icosphere(1);
    auto h = radial_contraction(sphere, 4);
    CHECK_NOTHROW(validate_homotopy(h));
    CHECK(h.num_steps() == 4);
    CHECK(h.terminal_point().norm() < 1e-12);

    auto open = h;
    open.frames.back() = sphere.vertices;
    CHECK_THROWS_AS(validate_homotopy(open), Error);

    auto backwards = h;
    std::swap(backwards.times[1], backwards.times[2]);
    CHECK_THROWS_AS(validate_homotopy(backwards), Error);

    auto short_frame = h;
    short_frame.frames[2] = sphere.vertices.topRows(3);
    CHECK_THROWS_AS(validate_homotopy(short_frame), Error);

    CHECK_THROWS_AS(from_frames({sphere}), Error);
    CHECK_THROWS_AS(from_frames({sphere, make_icosphere(2)}), Error);
    CHECK_THROWS_AS(radial_contraction(sphere, 0), Error);
}

TEST_CASE("interpolation between frames") {
    const auto h = radial_contraction(make_icosphere(1), 2);
    const auto half = h.at(0.25);
    const double r = half.vertices.row(0).norm();
    CHECK(r == doctest::Approx(0.75));
    CHECK(h.at(1.0).vertices.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(h.at(-1.0).vertices == h.frames.front());
}

TEST_CASE("radial contraction sweeps the enclosed volume") {
    const auto sphere = make_icosphere(4);
    const auto swept = swept_volume(radial_contraction(sphere, 64));
    CHECK(swept.volume == doctest::Approx(signed_volume(sphere)).epsilon(1e-9));
    CHECK(swept.volume == doctest::Approx(kBall).epsilon(0.03));
    // The last step collapses each prism to a single tet.
    CHECK(swept.degenerate_tets == 2 * static_cast<std::size_t>(sphere.num_triangles()));
    CHECK(swept.inward_tets + swept.degenerate_tets == 3 * swept.prisms);
    CHECK(swept.prisms == 64 * static_cast<std::size_t>(sphere.num_triangles()));
}

TEST_CASE("swept volume is stable under refinement") {
    const auto sphere = make_icosphere(3);
    const double coarse = swept_volume(wobble_contraction(sphere, 4, 0.15, 32)).volume;
    const double fine = swept_volume(wobble_contraction(sphere, 4, 0.15, 128)).volume;
    CHECK(coarse == doctest::Approx(fine).epsilon(0.02));
    const double r32 = swept_volume(radial_contraction(sphere, 32)).volume;
    const double r64 = swept_volume(radial_contraction(sphere, 64)).volume;
    CHECK(r32 == doctest::Approx(r64).epsilon(0.01));
}

TEST_CASE("hold then snap sweeps exactly the polyhedral volume") {
    const auto sphere = make_icosphere(3);
    const auto h = hold_then_snap(sphere, 5);
    const auto swept = swept_volume(h);
    CHECK(swept.volume == doctest::Approx(signed_volume(sphere)).epsilon(1e-9));
    CHECK(swept.stationary_prisms == 5 * static_cast<std::size_t>(sphere.num_triangles()));
}

TEST_CASE("translate, return, contract") {
    const auto sphere = make_icosphere(4);
    const auto h = translate_return_contract(sphere, Vec3(4, 0, 0), 32);
    const double swept = swept_volume(h).volume;
    // Each pass sweeps the cylinder twice (leading and trailing hemispheres).
    CHECK(swept == doctest::Approx(16.0 * std::numbers::pi + kBall).epsilon(0.01));
    CHECK(swept >= kBall + 8.0 * std::numbers::pi * 0.95);
    CHECK(crossing_count(Vec3(2, 0.1, 0.05), h) == 4);
    CHECK(crossing_count(Vec3(0.3, 0.1, 0.05), h) >= 1);
    CHECK(crossing_count(Vec3(0, 3, 0), h) == 0);
    const auto parts = swept_volume(h);
    CHECK(parts.inward_tets > 0);
    CHECK(parts.inward_tets < 3 * parts.prisms);
}

TEST_CASE("crossing count of a radial contraction") {
    const auto h = radial_contraction(make_icosphere(3), 16);
    CHECK(crossing_count(Vec3(0.3, 0.1, 0.05), h) == 1);
    CHECK(crossing_count(Vec3(1.3, 0.1, 0.05), h) == 0);
}

TEST_CASE("index traces") {
    const auto sphere = make_icosphere(3);
    SUBCASE("radial: a point inside drops to 0 at the end") {
        const auto trace = index_trace(Vec3(0.3, 0.1, 0.05), radial_contraction(sphere, 16));
        CHECK(trace.start() == 1);
        CHECK(trace.end() == 0);
        CHECK(trace.monotone());
        CHECK(trace.variation() == 1);
        CHECK(trace.times.back() == doctest::Approx(1.0 - 0.3 / 1.0).epsilon(0.05));
    }
    SUBCASE("radial: the contraction centre jumps at t = 1") {
        const auto trace = index_trace(Vec3::Zero(), radial_contraction(sphere, 16));
        CHECK(values(trace) == std::vector<int>{1, 0});
        CHECK(trace.times.back() == 1.0);
    }
    SUBCASE("a far point stays at 0") {
        const auto trace = index_trace(Vec3(5, 0, 0), radial_contraction(sphere, 16));
        CHECK(values(trace) == std::vector<int>{0});
        CHECK(trace.variation() == 0);
    }
    SUBCASE("a point on the translation axis is entered twice") {
        const auto h = translate_return_contract(sphere, Vec3(4, 0, 0), 16);
        const auto trace = index_trace(Vec3(2, 0.01, 0.02), h);
        CHECK(values(trace) == std::vector<int>{0, 1, 0, 1, 0});
        CHECK_FALSE(trace.monotone());
        CHECK(trace.variation() == 4);
        CHECK_FALSE(trace.uncertain);
    }
    SUBCASE("start on the surface is refused") {
        CHECK_THROWS_AS(index_trace(sphere.vertices.row(0).transpose(), radial_contraction(sphere, 4)),
                        GuardExceeded);
    }
}

TEST_CASE("trace endpoints: initial index to 0") {
    const auto sphere = make_icosphere(3);
    const auto nested = merged(sphere, make_icosphere(3, 2.0));
    const auto h = wobble_contraction(nested, 9, 0.1, 32);
    for (const Vec3& p : {Vec3(0.2, 0.1, 0.0), Vec3(1.5, 0.1, 0.2), Vec3(0.1, -1.4, 0.3), Vec3(4, 4, 4)}) {
        CAPTURE(p.transpose());
        const auto trace = index_trace(p, h);
        CHECK(trace.start() == rounded_winding(p, nested));
        CHECK(trace.end() == 0);
        CHECK(std::abs(trace.start()) <= trace.variation());
    }
}

TEST_CASE("sense of motion") {
    const auto sphere = make_icosphere(2);
    const auto radial = sense_preserving_report(radial_contraction(sphere, 8));
    CHECK(radial.sense_preserving());
    CHECK(radial.positive == 0);
    CHECK(radial.max_rate < 0.0);

    const auto translate = sense_preserving_report(translate_return_contract(sphere, Vec3(4, 0, 0), 8));
    CHECK_FALSE(translate.sense_preserving());
    CHECK(translate.positive > 0);
    CHECK(translate.negative > 0);

    const auto snap = sense_preserving_report(hold_then_snap(sphere, 3));
    CHECK(snap.zero == 3 * static_cast<std::size_t>(sphere.num_triangles()));
    CHECK(snap.sense_preserving());
}

TEST_CASE("lower bound holds for built-in contractions") {
    const auto sphere = make_icosphere(3);
    LowerBoundOptions options;
    options.mesh_error = std::abs(kBall - signed_volume(sphere));
    const auto radial = verify_lower_bound(radial_contraction(sphere, 32), 48, options);
    CHECK_FALSE(radial.violation);
    CHECK(std::abs(radial.margin_degree) <= radial.tolerance);
    CHECK(radial.enclosed_volume == doctest::Approx(signed_volume(sphere)));

    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto r = verify_lower_bound(wobble_contraction(sphere, seed, 0.15, 32), 32, {});
        CHECK_FALSE(r.violation);
        CHECK(r.margin_vdeg >= -r.tolerance);
    }

    const auto inverted = verify_lower_bound(radial_contraction(flipped(sphere), 16), 32, {});
    CHECK(inverted.degree.total_degree < 0.0);
    CHECK_FALSE(inverted.violation);
}

TEST_CASE("frame directory loading") {
    const auto dir = std::filesystem::temp_directory_path() / "cabledeg_frames";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    const auto h = radial_contraction(make_icosphere(1), 3);
    for (std::size_t k = 0; k < h.frames.size(); ++k) {
        write_mesh(dir / ("frame_" + std::to_string(k) + ".off"), h.frame_mesh(k));
    }
    const auto loaded = load_frame_directory(dir);
    CHECK(loaded.num_steps() == 3);
    CHECK(swept_volume(loaded).volume == doctest::Approx(swept_volume(h).volume));
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(load_frame_directory(dir), Error);
}
