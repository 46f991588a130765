#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nsi3d/common.hpp"
#include "nsi3d/geometry.hpp"
#include "nsi3d/pulse.hpp"

namespace nsi3d {

struct Scatterer {
    Vec3 position;      // [m], z > 0
    double amplitude = 1.0;
};

struct Phantom {
    std::vector<Scatterer> scatterers;
    uint64_t rng_seed = 0;
    // generation log for speckle phantoms, so the scatterer density is auditable
    double resolution_cell_volume = 0.0;  // [m^3]
    double box_volume = 0.0;              // [m^3]
};

// Unit-amplitude on-axis points, one per depth.
Phantom make_point_phantom(std::span<const double> depths);

struct CystSpec {
    Vec3 box_center{0.0, 0.0, 40e-3};       // [m]
    Vec3 box_size{40e-3, 40e-3, 30e-3};     // [m] full extents
    Vec3 cyst_center{0.0, 0.0, 40e-3};      // [m]
    double cyst_diameter = 10e-3;           // [m]
    double scatterers_per_cell = 20.0;
    double inside_amp_ratio = 0.2;
    uint64_t seed = 1;
};

// Uniformly scattered speckle box with a weak-scattering sphere. Amplitudes
// are standard normal, scaled by inside_amp_ratio within the sphere. The
// resolution cell is (axial pulse length) x (-6 dB azimuth width) x (-6 dB
// elevation width) of the full-array rectangular window at the box center
// depth, measured with the CW beampattern.
Phantom make_cyst_phantom(const CystSpec& spec, const ArrayGeometry& geom, const Pulse& pulse);

}  // namespace nsi3d
