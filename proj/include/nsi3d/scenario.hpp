#pragma once

#include <string>
#include <vector>

#include "nsi3d/aperture.hpp"
#include "nsi3d/beamform.hpp"
#include "nsi3d/config.hpp"
#include "nsi3d/metrics.hpp"
#include "nsi3d/phantom.hpp"
#include "nsi3d/pulse.hpp"
#include "nsi3d/sequence.hpp"
#include "nsi3d/simulate.hpp"

namespace nsi3d {

ArrayGeometry make_geometry(const ExperimentConfig& cfg);
Pulse make_pulse(const ExperimentConfig& cfg);
ApertureMask make_aperture(const ExperimentConfig& cfg, const ArrayGeometry& geom,
                           ApertureKind kind);
VoxelGrid make_grid(const ExperimentConfig& cfg);
std::vector<ApertureKind> selected_apertures(const ExperimentConfig& cfg);

struct PointMetrics {
    double fwhm_az = 0.0, fwhm_el = 0.0;  // [m]
    double smer_az = 0.0, smer_el = 0.0;  // [dB]
    bool smer_clamped = false;
};

struct PointScenarioResult {
    ApertureKind kind;
    PointMetrics das, nsi;
    double seconds = 0.0;
};

struct CystScenarioResult {
    ApertureKind kind;
    ContrastResult das, nsi;
    double seconds = 0.0;
};

struct BenchResult {
    double das_seconds = 0.0;
    double nsi_seconds = 0.0;  // three windows + combine
    double ratio = 0.0;
};

// Simulates the point phantom, reconstructs DAS and NSI volumes, dumps
// volumes/slices/profiles under out_dir (unless empty) and measures
// FWHM/SMER on finely sampled beamformed profiles through each volume's
// maximum.
PointScenarioResult run_points_scenario(const ExperimentConfig& cfg, ApertureKind kind,
                                        const std::string& out_dir);

// Speckle-cyst contrast: CR/CNR for DAS and NSI on the configured cyst.
CystScenarioResult run_cyst_scenario(const ExperimentConfig& cfg, ApertureKind kind,
                                     const std::string& out_dir);

// CW beampattern exports (DAS window and NSI combination) plus -6 dB widths.
void run_beampattern_scenario(const ExperimentConfig& cfg, ApertureKind kind,
                              const std::string& out_dir);

// Mask/apodization exports for the selected apertures.
void run_design(const ExperimentConfig& cfg, const std::string& out_dir);

// Acquisition accounting table across the three aperture kinds.
void run_rates(const ExperimentConfig& cfg, const std::string& out_dir);

// Wall-clock DAS vs NSI on the same dataset and grid.
BenchResult run_bench(const ExperimentConfig& cfg, ApertureKind kind);

// Recomputes profile metrics from a dumped envelope volume.
PointMetrics metrics_from_volume(const std::string& volume_base, const std::string& out_dir,
                                 const ExperimentConfig& cfg);

}  // namespace nsi3d
