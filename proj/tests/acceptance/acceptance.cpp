// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cabledeg/crossings.hpp"
#include "cabledeg/errors.hpp"
#include "cabledeg/homotopy.hpp"
#include "cabledeg/planar.hpp"
#include "cabledeg/regions.hpp"
#include "cabledeg/word.hpp"
#include "support/corpus.hpp"
#include "support/generators.hpp"

using namespace cabledeg;
using namespace cabledeg::testing;

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kBall = 4.0 * std::numbers::pi / 3.0;

int failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s  %-28s %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

template <typename... Args>
std::string fmt(const char* format, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

std::string read_text(const std::string& name) {
    std::ifstream in(std::string(CABLEDEG_TEST_DATA) + "/" + name);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

/// Median wall time of `runs` calls, in seconds.
double median_seconds(int runs, const std::function<void()>& body) {
    std::vector<double> t;
    for (int i = 0; i < runs; ++i) {
        const auto start = Clock::now();
        body();
        t.push_back(std::chrono::duration<double>(Clock::now() - start).count());
    }
    std::nth_element(t.begin(), t.begin() + runs / 2, t.end());
    return t[runs / 2];
}

volatile long long sink = 0;

void green_cable_coefficients() {
    const auto words = parse_word_file(read_text("green_cables.words"));
    const std::vector<long long> expected = {1, 2, 1, 3, 2, 2, 1, 2};
    std::vector<long long> got;
    for (const auto& w : words) got.push_back(reduce(w).coefficient);
    const double t = median_seconds(101, [&] {
        for (const auto& w : words) sink = sink + reduce(w).coefficient;
    });
    std::string list;
    for (auto c : got) list += (list.empty() ? "" : ",") + std::to_string(c);
    report("green-cable-coefficients", got == expected && t < 1e-3,
           fmt("(%s) expected (1,2,1,3,2,2,1,2); %.2g s", list.c_str(), t));
}

void subword_example() {
    const auto words = parse_word_file(read_text("subword.words"));
    const auto r = reduce(words.at(0));
    const double t = median_seconds(101, [&] { sink = sink + reduce(words[0]).coefficient; });
    report("subword-reduction", r.coefficient == -1 && t < 1e-3,
           fmt("%s expected -1; %.2g s", format_term(r).c_str(), t));
}

void cable7_signs() {
    const auto w = parse_word("7: 7>3:+ 3>inf:+ inf>3:- 3>inf:+");
    std::string signs;
    for (const auto& s : w.symbols) signs += (signs.empty() ? "" : ",") + std::string(s.sign > 0 ? "+1" : "-1");
    const long long sum = signed_sum(w);
    report("cable7-sign-sum", sum == 2 && reduce(w).coefficient == 2,
           fmt("signs (%s) sum %lld expected 2", signs.c_str(), sum));
}

void oracle_equivalence() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int agree = 0;
    int tested = 0;
    int skipped = 0;
    for (const auto& [name, mesh] : mesh_corpus()) {
        const Box3 box = mesh.bounding_box();
        const Vec3 lo = box.min() - 0.25 * box.diagonal();
        const Vec3 span = 1.5 * box.diagonal();
        const Vec3 ext = default_exterior(mesh);
        for (int i = 0; i < 250; ++i) {
            const Vec3 p = lo + Vec3(u(rng), u(rng), u(rng)).cwiseProduct(span);
            const double w = solid_angle_winding(p, mesh);
            if (std::abs(w - std::round(w)) >= 0.25) {
                ++skipped;
                continue;
            }
            int idx = 0;
            try {
                idx = cable_index(p, mesh, ext);
            } catch (const RetriesExhausted&) {
                ++skipped;
                continue;
            }
            ++tested;
            if (idx == static_cast<int>(std::lround(w))) ++agree;
        }
    }
    report("oracle-equivalence", tested >= 1000 && agree == tested,
           fmt("%d/%d points agree over 5 meshes (%d degenerate skipped)", agree, tested, skipped));
}

void degree_weighted_volume() {
    const auto sphere = total_degree(make_icosphere(4), 64);
    const auto nested = total_degree(nested_spheres(4), 64);
    const double e_d = std::abs(sphere.total_degree - kBall) / kBall;
    const double e_v = std::abs(sphere.vdeg - kBall) / kBall;
    const double e_n = std::abs(nested.total_degree - 37.70) / 37.70;
    report("degree-weighted-volume", e_d <= 0.02 && e_v <= 0.02 && e_n <= 0.03,
           fmt("sphere D %.4f V_deg %.4f (err %.2f%%, %.2f%%); nested D %.3f (err %.2f%%)", sphere.total_degree,
               sphere.vdeg, 100 * e_d, 100 * e_v, nested.total_degree, 100 * e_n));
}

void lower_bound() {
    const auto sphere = make_icosphere(4);
    int held = 0;
    double worst = 1e300;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto r = verify_lower_bound(wobble_contraction(sphere, seed, 0.15, 32), 64);
        if (!r.violation) ++held;
        worst = std::min(worst, r.margin_degree + r.tolerance);
    }
    LowerBoundOptions options;
    options.mesh_error = std::abs(kBall - signed_volume(sphere));
    const auto radial = verify_lower_bound(radial_contraction(sphere, 64), 64, options);
    const double d = std::abs(radial.degree.total_degree);
    const double gap = std::abs(radial.swept.volume - d) / d;
    const bool one_signed = radial.sense.sense_preserving();
    report("lower-bound", held == 20 && gap <= 0.05 && one_signed,
           fmt("wobble %d/20 hold (min swept+tol-|D| %.4f); radial |swept-|D||/|D| %.2f%%, one-signed %s", held,
               worst, 100 * gap, one_signed ? "yes" : "no"));
}

void strict_inequality() {
    const auto sphere = make_icosphere(4);
    const auto r = verify_lower_bound(translate_return_contract(sphere, Vec3(4, 0, 0), 64), 64);
    const double d = std::abs(r.degree.total_degree);
    const double need = d + 8.0 * std::numbers::pi * 0.95;
    report("strict-inequality", r.swept.volume >= need,
           fmt("swept %.3f >= |D| + 0.95*8pi = %.3f", r.swept.volume, need));
}

void planar_parity() {
    std::mt19937_64 rng(99);
    int agree = 0;
    int tested = 0;
    int skipped = 0;
    for (const auto& [name, curve] : curve_corpus()) {
        const auto box = curve.bounding_box();
        std::uniform_real_distribution<double> ux(box.min().x() - 0.5, box.max().x() + 0.5);
        std::uniform_real_distribution<double> uy(box.min().y() - 0.5, box.max().y() + 0.5);
        for (int i = 0; i < 260; ++i) {
            const Vec2 p(ux(rng), uy(rng));
            int angle = 0;
            try {
                angle = winding_angle(p, curve);
            } catch (const GuardExceeded&) {
                ++skipped;
                continue;
            }
            ++tested;
            if (winding_crossings(p, curve) == angle) ++agree;
        }
    }
    const double bound = homotopy_area_bound(make_wound_circle(3, 64), 256).abs_sum;
    const double err = std::abs(bound - 3.0 * std::numbers::pi) / (3.0 * std::numbers::pi);
    report("planar-parity", tested >= 1000 && agree == tested && err <= 0.02,
           fmt("%d/%d points agree (%d skipped); triple circle bound %.4f vs 3pi (err %.2f%%)", agree, tested,
               skipped, bound, 100 * err));
}

void linear_time() {
    std::mt19937_64 rng(5);
    const std::vector<std::size_t> lengths = {100000, 200000, 400000, 800000};
    std::vector<double> times;
    for (std::size_t e : lengths) {
        const auto w = random_word(rng, e);
        times.push_back(median_seconds(15, [&] { sink = sink + reduce(w).coefficient; }));
    }
    bool ok = true;
    std::string ratios;
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double r = times[i] / times[i - 1];
        ok = ok && r >= 1.5 && r <= 2.5;
        ratios += fmt("%s%.2f", ratios.empty() ? "" : ", ", r);
    }
    const auto big = random_word(rng, 1000000);
    const double t_big = median_seconds(5, [&] { sink = sink + reduce(big).coefficient; });
    report("linear-time", ok,
           fmt("ratios t(2E)/t(E) = %s; 1e6 symbols %.4f s (soft target < 1 s: %s)", ratios.c_str(), t_big,
               t_big < 1.0 ? "met" : "missed"));
}

}  // namespace

int main() {
    green_cable_coefficients();
    subword_example();
    cable7_signs();
    oracle_equivalence();
    degree_weighted_volume();
    lower_bound();
    strict_inequality();
    planar_parity();
    linear_time();
    std::printf("%d criteria failed\n", failures);
    return failures;
}
