// Batch experiment runner for the volumetric NSI workbench.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "nsi3d/scenario.hpp"

namespace fs = std::filesystem;
using namespace nsi3d;

namespace {

struct CommonArgs {
    std::string config_file;
    std::string preset;
    std::string aperture;
    std::string scenario;
    std::string out_dir;
    std::string compound;
    int64_t seed = -1;
    int workers = -1;
    double dc = -1.0;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--config", a.config_file, "key = value config file");
    cmd->add_option("--preset", a.preset, "desk|full");
    cmd->add_option("--aperture", a.aperture, "circular|spiral|spiral_no_reuse|rectangular|all");
    cmd->add_option("--out", a.out_dir, "output directory");
    cmd->add_option("--seed", a.seed, "phantom RNG seed");
    cmd->add_option("--threads", a.workers, "worker count (default: machine parallelism)");
    cmd->add_option("--dc", a.dc, "NSI dc offset");
    cmd->add_option("--compound", a.compound, "coherent|incoherent");
}

// file config first, then command-line overrides
ExperimentConfig resolve(const CommonArgs& a) {
    ExperimentConfig cfg;
    if (!a.config_file.empty()) cfg = parse_config_file(a.config_file);
    if (!a.preset.empty()) {
        ExperimentConfig p = make_preset(a.preset);
        if (!a.config_file.empty())
            std::cerr << "note: --preset overrides grid/phantom values from the config file\n";
        cfg = p;
    }
    if (!a.aperture.empty()) cfg.aperture = a.aperture;
    if (!a.scenario.empty()) cfg.scenario = a.scenario;
    if (!a.out_dir.empty()) cfg.out_dir = a.out_dir;
    if (!a.compound.empty()) cfg.compound = a.compound;
    if (a.seed >= 0) cfg.seed = static_cast<uint64_t>(a.seed);
    if (a.workers >= 0) cfg.workers = static_cast<unsigned>(a.workers);
    if (a.dc >= 0.0) cfg.dc = a.dc;
    return cfg;
}

int cmd_run(const ExperimentConfig& cfg) {
    const fs::path root = cfg.out_dir;
    if (cfg.scenario == "points") {
        for (ApertureKind kind : selected_apertures(cfg)) {
            const auto dir = (root / ("points_" + to_string(kind))).string();
            const auto r = run_points_scenario(cfg, kind, dir);
            std::printf("%s points: DAS fwhm az/el %.3f/%.3f mm smer %.2f/%.2f dB | "
                        "NSI %.3f/%.3f mm smer %.2f/%.2f dB (%.1f s)\n",
                        to_string(kind).c_str(), r.das.fwhm_az * 1e3, r.das.fwhm_el * 1e3,
                        r.das.smer_az, r.das.smer_el, r.nsi.fwhm_az * 1e3, r.nsi.fwhm_el * 1e3,
                        r.nsi.smer_az, r.nsi.smer_el, r.seconds);
        }
    } else if (cfg.scenario == "cyst") {
        for (ApertureKind kind : selected_apertures(cfg)) {
            const auto dir = (root / ("cyst_" + to_string(kind))).string();
            const auto r = run_cyst_scenario(cfg, kind, dir);
            std::printf("%s cyst: DAS CR %.3f CNR %.3f | NSI CR %.3f CNR %.3f (%.1f s)\n",
                        to_string(kind).c_str(), r.das.cr, r.das.cnr, r.nsi.cr, r.nsi.cnr,
                        r.seconds);
        }
    } else if (cfg.scenario == "beampattern") {
        for (ApertureKind kind : selected_apertures(cfg)) {
            const auto dir = (root / ("beampattern_" + to_string(kind))).string();
            run_beampattern_scenario(cfg, kind, dir);
            std::printf("%s beampattern written to %s\n", to_string(kind).c_str(), dir.c_str());
        }
    } else {
        throw config_error("unknown scenario '" + cfg.scenario + "' (points|cyst|beampattern)");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"3D null subtraction imaging workbench"};
    app.require_subcommand(1);

    CommonArgs args;

    auto* design = app.add_subcommand("design", "export masks and NSI apodizations");
    add_common(design, args);

    auto* rates = app.add_subcommand("rates", "acquisition events / volume-rate accounting");
    add_common(rates, args);

    auto* run = app.add_subcommand("run", "simulate, beamform and measure a scenario");
    add_common(run, args);
    run->add_option("--scenario", args.scenario, "points|cyst|beampattern");

    auto* bench = app.add_subcommand("bench", "DAS vs NSI wall-clock comparison");
    add_common(bench, args);

    auto* metrics = app.add_subcommand("metrics", "recompute metrics from dumped volumes");
    add_common(metrics, args);
    std::vector<std::string> volume_bases;
    metrics->add_option("--volume", volume_bases,
                        "volume path base (without .f32/.txt), repeatable")
        ->required();

    CLI11_PARSE(app, argc, argv);

    try {
        const ExperimentConfig cfg = resolve(args);
        if (design->parsed()) {
            run_design(cfg, (fs::path(cfg.out_dir) / "design").string());
            std::printf("design exports written to %s\n",
                        (fs::path(cfg.out_dir) / "design").string().c_str());
        } else if (rates->parsed()) {
            run_rates(cfg, (fs::path(cfg.out_dir) / "rates").string());
            std::printf("rates written to %s\n",
                        (fs::path(cfg.out_dir) / "rates").string().c_str());
        } else if (run->parsed()) {
            return cmd_run(cfg);
        } else if (bench->parsed()) {
            for (ApertureKind kind : selected_apertures(cfg)) {
                const auto r = run_bench(cfg, kind);
                std::printf("%s bench: DAS %.2f s, NSI %.2f s, ratio %.2f\n",
                            to_string(kind).c_str(), r.das_seconds, r.nsi_seconds, r.ratio);
            }
        } else if (metrics->parsed()) {
            for (const auto& base : volume_bases) {
                const auto m = metrics_from_volume(base, cfg.out_dir, cfg);
                std::printf("%s: fwhm az/el %.3f/%.3f mm, smer %.2f/%.2f dB%s\n", base.c_str(),
                            m.fwhm_az * 1e3, m.fwhm_el * 1e3, m.smer_az, m.smer_el,
                            m.smer_clamped ? " (smer clamped at profile edge)" : "");
            }
        }
        return 0;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "compute error: " << e.what() << "\n";
        return 3;
    }
}
