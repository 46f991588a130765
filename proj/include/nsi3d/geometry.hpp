#pragma once

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "nsi3d/common.hpp"

namespace nsi3d {

inline constexpr int kBankRows = 8;  // rows per multiplexer bank

struct Element {
    int id = 0;          // row-major, col fastest
    int col = 0;         // 0..n_cols-1, azimuth (x)
    int active_row = 0;  // 0..n_active_rows-1, elevation (y), blank rows skipped
    Vec3 position;       // [m] physical, blank rows leave one-pitch gaps
    int bank = 0;        // active_row / 8
    int channel = 0;     // col * 8 + active_row % 8; shared by one element per bank
    // [m] distance from the array center on the gap-free col x active_row grid.
    // Aperture radii (r_in / r_out) are defined against this coordinate, not the
    // physical position; the wiring gaps do not move an element between the
    // inner and outer aperture regions.
    double radial_distance = 0.0;
};

struct ArrayGeometry {
    double pitch = 300e-6;              // [m]
    int n_cols = 32;                    // azimuth
    int n_rows_physical = 35;           // elevation, including blank wiring rows
    std::vector<int> blank_rows;        // 1-based physical row indices
    double center_frequency = 3.5e6;    // [Hz] probe nominal
    double fractional_bandwidth = 0.70;
    double sound_speed = 1540.0;        // [m/s]
    std::vector<Element> elements;

    int n_active_rows() const { return n_rows_physical - static_cast<int>(blank_rows.size()); }
    int n_banks() const { return n_active_rows() / kBankRows; }
    int n_channels() const { return n_cols * kBankRows; }
    int n_elements() const { return static_cast<int>(elements.size()); }
};

// Builds the multiplexed matrix array. Blank rows are 1-based physical row
// indices that carry no elements; the coordinate origin is the geometric
// center of the physical grid (x: azimuth, y: elevation, z: depth).
ArrayGeometry build_matrix_array(double pitch, std::vector<int> blank_rows,
                                 int n_rows_physical = 35, int n_cols = 32);

// Every channel claimed by two or more of the given elements, with the
// claimants. Empty result means the set can operate in a single TX/RX event.
std::vector<std::pair<int, std::vector<int>>>
channel_conflicts(const ArrayGeometry& geom, std::span<const int> element_ids);

// CSV: element_id,col,active_row,x_m,y_m,bank,channel
void write_geometry_csv(const ArrayGeometry& geom, std::ostream& os);

}  // namespace nsi3d
