#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nsi3d/common.hpp"

namespace nsi3d {

// One experiment, round-trippable through the key=value config format.
// Unknown keys are rejected on parse; command-line flags override file values.
struct ExperimentConfig {
    std::string scenario = "points";        // points | cyst | beampattern
    std::string aperture = "circular";      // circular | spiral | spiral_no_reuse | rectangular | all
    std::string preset = "desk";            // desk | full
    std::string compound = "coherent";      // coherent | incoherent
    std::string out_dir = "out";
    uint64_t seed = 1;
    unsigned workers = 0;                   // 0 = machine parallelism

    double dc = 1.0;
    double dynamic_range_db = 50.0;

    // array
    double pitch = 300e-6;
    std::vector<int> blank_rows{9, 17, 25};
    double sound_speed = 1540.0;
    double sim_frequency = 3e6;             // [Hz]
    double fractional_bandwidth = 0.70;
    double sampling_rate = 12e6;            // [Hz]

    // apertures (pitch units)
    double r_out_pitch = 16.0;
    double r_in_pitch = 11.5;
    int spiral_points = 256;
    double sigma_d = 0.7;
    int rect_inner_half_width = 11;

    // sequence
    double standoff = 17.4e-3;              // [m]
    double tilt_deg = 5.0;
    double depth = 70e-3;                   // [m] accounting depth (rates, RF window)

    // voxel grid
    int grid_nx = 64, grid_ny = 64, grid_nz = 96;
    double grid_x_half = 12e-3;             // [m]
    double grid_y_half = 12e-3;
    double grid_z_lo = 25e-3, grid_z_hi = 55e-3;

    // phantoms
    std::vector<double> point_depths{40e-3};            // [m]
    double cyst_diameter = 10e-3;                       // [m]
    double cyst_depth = 40e-3;
    double cyst_box_x = 26e-3, cyst_box_y = 26e-3, cyst_box_z = 18e-3;
    double scatterers_per_cell = 20.0;
    double inside_amp_ratio = 0.2;

    bool operator==(const ExperimentConfig&) const = default;
};

// Applies the named preset's grid/phantom defaults onto a default config.
ExperimentConfig make_preset(const std::string& preset);

ExperimentConfig parse_config(std::istream& is);
ExperimentConfig parse_config_file(const std::string& path);
void serialize_config(const ExperimentConfig& cfg, std::ostream& os);
std::string config_hash(const ExperimentConfig& cfg);  // hex fingerprint

}  // namespace nsi3d
