#pragma once

// Command implementations behind the cabledeg executable. Each command
// returns a single self-describing report object.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "cabledeg/crossings.hpp"
#include "cabledeg/mesh.hpp"
#include "cabledeg/planar.hpp"

namespace cabledeg::cli {

using Report = nlohmann::ordered_json;

struct RunConfig {
    std::string command;
    std::filesystem::path mesh;
    std::filesystem::path curve;
    std::filesystem::path words;
    std::filesystem::path cable;
    std::filesystem::path frames;
    std::filesystem::path out;
    std::filesystem::path dump;
    std::optional<Vec3> point;
    int resolution = 64;
    int retries = 8;
    std::uint64_t seed = 0;
    std::string format = "structured";
    bool timing = false;

    // sweep
    std::string homotopy = "radial";
    int subdivisions = 4;
    int steps = 64;
    double amplitude = 0.15;
    double offset = 4.0;
    double slack = 0.01;
};

/// Throws Error on resolution < 8, retries < 1 or an unknown format.
void validate(const RunConfig& config);

Report run_reduce(const RunConfig& config);
Report run_regions(const RunConfig& config);
Report run_vdeg(const RunConfig& config);
Report run_index(const RunConfig& config);
Report run_cable(const RunConfig& config);
Report run_sweep(const RunConfig& config);
Report run_planar(const RunConfig& config);

/// Validates and dispatches on config.command.
Report run(const RunConfig& config);

/// `structured` -> indented JSON; `text` -> one `path: value` line per leaf.
std::string render(const Report& report, const std::string& format);

/// "x,y,z" -> point.
Vec3 parse_point(const std::string& text);

/// {"points": [[x,y,z], ...]} or a bare array.
Cable read_cable(const std::filesystem::path& path);
/// {"points": [[x,y], ...]} or a bare array.
PolyCurve read_curve(const std::filesystem::path& path);

}  // namespace cabledeg::cli
