#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "cabledeg/errors.hpp"
#include "commands.hpp"

namespace {

void setup_logging() {
    auto logger = spdlog::stderr_color_mt("cabledeg");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::warn);
    if (const char* env = std::getenv("CABLEDEG_LOG")) spdlog::set_level(spdlog::level::from_str(env));
}

}  // namespace

int main(int argc, char** argv) {
    setup_logging();
    using cabledeg::cli::RunConfig;
    RunConfig config;
    std::string point;

    CLI::App app{"Cable indices, degree-weighted volumes and null-homotopy checks"};
    app.require_subcommand(1);
    app.add_option("--seed", config.seed, "Seed for every jitter and perturbation");
    app.add_option("--retries", config.retries, "Jittered cable attempts after a degenerate crossing");
    app.add_option("--resolution", config.resolution, "Voxels (pixels) per axis");
    app.add_option("--out", config.out, "Write the report here instead of stdout");
    app.add_option("--format", config.format, "Report format")->check(CLI::IsMember({"structured", "text"}));
    app.fallthrough();

    auto* reduce = app.add_subcommand("reduce", "Reduce the cable words of a word file");
    reduce->add_option("--words", config.words, "Word file")->required()->check(CLI::ExistingFile);
    reduce->add_flag("--timing", config.timing, "Include wall-clock seconds per cable");

    auto* regions = app.add_subcommand("regions", "Voxel regions of a mesh complement with indices and volumes");
    regions->add_option("--mesh", config.mesh, "OFF or OBJ mesh")->required()->check(CLI::ExistingFile);
    regions->add_option("--dump", config.dump, "Raw uint32 voxel-label dump");

    auto* vdeg = app.add_subcommand("vdeg", "Total degree D and degree-weighted volume V_deg");
    vdeg->add_option("--mesh", config.mesh, "OFF or OBJ mesh")->required()->check(CLI::ExistingFile);

    auto* index = app.add_subcommand("index", "Cable index of a point, cross-checked by solid angle");
    index->add_option("--mesh", config.mesh, "OFF or OBJ mesh")->required()->check(CLI::ExistingFile);
    index->add_option("--point", point, "x,y,z")->required();

    auto* cable = app.add_subcommand("cable", "Crossings and cable word along a polyline cable");
    cable->add_option("--mesh", config.mesh, "OFF or OBJ mesh")->required()->check(CLI::ExistingFile);
    cable->add_option("--cable", config.cable, "JSON polyline")->required()->check(CLI::ExistingFile);

    auto* sweep = app.add_subcommand("sweep", "Swept volume of a null homotopy against the degree bound");
    sweep->add_option("--homotopy", config.homotopy, "radial | translate-return | wobble")
        ->check(CLI::IsMember({"radial", "translate-return", "wobble"}));
    sweep->add_option("--frames", config.frames, "Directory of frame meshes")->check(CLI::ExistingDirectory);
    sweep->add_option("--mesh", config.mesh, "Initial mesh for built-in homotopies")->check(CLI::ExistingFile);
    sweep->add_option("--subdivisions", config.subdivisions, "Icosphere subdivisions when no mesh is given");
    sweep->add_option("--steps", config.steps, "Time steps (per phase for translate-return)");
    sweep->add_option("--amplitude", config.amplitude, "Wobble amplitude");
    sweep->add_option("--offset", config.offset, "Translation distance for translate-return");
    sweep->add_option("--slack", config.slack, "Relative slack on |D|");

    auto* planar = app.add_subcommand("planar", "Planar regions, windings and the homotopy-area bound");
    planar->add_option("--curve", config.curve, "JSON polygon")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);
    config.command = app.get_subcommands().front()->get_name();

    try {
        if (!point.empty()) config.point = cabledeg::cli::parse_point(point);
        spdlog::info("running {} (resolution {}, seed {})", config.command, config.resolution, config.seed);
        const auto report = cabledeg::cli::run(config);
        for (const auto& w : report.value("warnings", cabledeg::cli::Report::array())) {
            spdlog::warn("{}", w.get<std::string>());
        }
        const std::string text = cabledeg::cli::render(report, config.format);
        if (config.out.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(config.out);
            if (!out) throw cabledeg::Error("cannot write " + config.out.string());
            out << text;
        }
    } catch (const cabledeg::Error& e) {
        spdlog::error("{}", e.what());
        return 1;
    } catch (const std::exception& e) {
        spdlog::error("unexpected failure: {}", e.what());
        return 2;
    }
    return 0;
}
