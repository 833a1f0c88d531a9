#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "qgrom/pipeline/stages.hpp"

namespace {

using qgrom::pipeline::PipelineConfig;

// --set section.key=value, repeatable. Unknown keys are rejected by apply_kv.
void apply_overrides(PipelineConfig& cfg, const std::vector<std::string>& sets) {
    for (const auto& s : sets) {
        const auto dot = s.find('.');
        const auto eq = s.find('=', dot == std::string::npos ? 0 : dot);
        if (dot == std::string::npos || eq == std::string::npos || dot == 0 || eq <= dot + 1) {
            throw qgrom::ConfigError("--set expects section.key=value, got '" + s + "'");
        }
        qgrom::pipeline::apply_kv(cfg, s.substr(0, dot), s.substr(dot + 1, eq - dot - 1),
                                  s.substr(eq + 1));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Three-layer wind-driven gyre solver with reduced-model pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    std::string workdir_cli;
    std::vector<std::string> sets;
    bool force = false;
    app.add_option("--config", config_path, "INI config file (defaults when omitted)");
    app.add_option("--workdir", workdir_cli,
                   "Artifact directory (overrides config file and QGROM_WORKDIR)");
    app.add_option("--set", sets, "Override one config key: section.key=value (repeatable)");
    app.add_flag("--force", force, "Overwrite existing simulation outputs");

    auto* sim = app.add_subcommand("simulate", "Run the gyre solver and record snapshots");
    std::string res = "high";
    sim->add_option("--res", res, "Resolution: high or low")
        ->check(CLI::IsMember({"high", "low"}));

    app.add_subcommand("project", "Subsample reference snapshots onto the coarse grid");
    app.add_subcommand("eof", "Compute the spatial basis and training PCs");
    app.add_subcommand("fit", "Fit the reduced RHS model to the training PCs");

    auto* rom = app.add_subcommand("rom", "Integrate the reduced model");
    bool no_nudge = false;
    rom->add_flag("--no-nudge", no_nudge, "Disable the relaxation schedule");

    auto* rec = app.add_subcommand("reconstruct", "Rebuild fields from a PC trajectory");
    std::string trajectory = qgrom::pipeline::artifact::traj;
    rec->add_option("--trajectory", trajectory, "Trajectory CSV name under the workdir");

    auto* ren = app.add_subcommand("render", "Render one snapshot record to a PPM heatmap");
    std::string ren_input, ren_output;
    int ren_record = 0;
    int ren_layer = 0;
    double ren_range = 0.0;
    ren->add_option("--input", ren_input, "Snapshot file")->required();
    ren->add_option("--output", ren_output, "PPM file")->required();
    ren->add_option("--record", ren_record, "Record index; -1 takes the last");
    ren->add_option("--layer", ren_layer, "Layer index")->check(CLI::NonNegativeNumber);
    ren->add_option("--range", ren_range, "Half-range about 0 (default: data midpoint)");

    app.add_subcommand("diagnose", "Compare reference, coarse and reduced solutions");
    app.add_subcommand("all", "Run every stage in order");

    // Let --config/--workdir/--set/--force appear after the subcommand too.
    for (CLI::App* sc : app.get_subcommands([](const CLI::App*) { return true; })) {
        sc->fallthrough();
    }

    CLI11_PARSE(app, argc, argv);
    const std::string stage = app.get_subcommands().front()->get_name();

    try {
        PipelineConfig cfg = qgrom::pipeline::load_config(config_path);
        if (const char* env = std::getenv("QGROM_WORKDIR"); env && *env) cfg.workdir = env;
        apply_overrides(cfg, sets);
        if (!workdir_cli.empty()) cfg.workdir = workdir_cli;

        using namespace qgrom::pipeline;
        if (stage == "simulate") {
            stage_simulate(cfg, res == "high", force);
        } else if (stage == "project") {
            stage_project(cfg);
        } else if (stage == "eof") {
            stage_eof(cfg);
        } else if (stage == "fit") {
            stage_fit(cfg);
        } else if (stage == "rom") {
            stage_rom(cfg, !no_nudge);
        } else if (stage == "reconstruct") {
            stage_reconstruct(cfg, trajectory);
        } else if (stage == "render") {
            stage_render(ren_input, ren_output, ren_record, ren_layer,
                         ren->count("--range") ? std::optional<double>(ren_range)
                                               : std::nullopt);
        } else if (stage == "diagnose") {
            stage_diagnose(cfg);
        } else if (stage == "all") {
            stage_all(cfg, force);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "qgrom %s: %s\n", stage.c_str(), e.what());
        return 1;
    }
    return 0;
}
