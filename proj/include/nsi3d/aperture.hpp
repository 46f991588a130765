#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "nsi3d/geometry.hpp"

namespace nsi3d {

enum class ApertureKind { circular, spiral, spiral_no_reuse, rectangular };

std::string to_string(ApertureKind k);
ApertureKind aperture_kind_from_string(const std::string& s);

struct ApertureMask {
    ApertureKind kind = ApertureKind::circular;
    std::vector<int> element_ids;  // sorted ascending
    std::vector<bool> is_inner;    // aligned with element_ids
    int n_inner = 0;
    int n_outer = 0;
    double r_in = 0.0;   // [m]
    double r_out = 0.0;  // [m]
};

// One aperture with its DAS and NSI receive windows. Weight vectors are
// aligned with mask.element_ids.
struct ApodizationSet {
    ApertureMask mask;
    double dc = 1.0;
    std::vector<double> w_rect;  // all ones
    std::vector<double> w_zm;    // -1 inner, +1 outer
    std::vector<double> w_dc1;   // w_zm + dc
    std::vector<double> w_dc2;   // -w_zm + dc
};

struct IdealSpiral {
    int n_points = 0;
    double r_max = 0.0;                          // [m]
    std::vector<std::array<double, 2>> points;   // [m] in the aperture plane
};

// All elements with radial_distance <= r_out; the inner/outer split is taken
// at r_in.
ApertureMask circular_mask(const ArrayGeometry& geom, double r_out, double r_in);

// Full-array mask whose inner region is the central square of
// 2*inner_half_width x 2*inner_half_width elements.
ApertureMask rectangular_mask(const ArrayGeometry& geom, int inner_half_width);

// Golden-angle Fermat spiral: point k at radius r_max*sqrt((k+1/2)/n).
IdealSpiral fermat_spiral_ideal(int n, double r_max);

// Maps every ideal point to the nearest element inside the aperture radius;
// duplicate targets collapse to one element.
ApertureMask quantize_to_grid(const IdealSpiral& ideal, const ArrayGeometry& geom, double r_in);

// Gaussian selection kernel exp(-d_min / (2 sigma_d^2)); d_min in pitch units.
double selection_score(double d_min, double sigma_d);

// Conflict-free spiral selection: candidate (ideal point, element) pairs
// within candidate_radius pitches are processed in descending selection_score
// order, a pair is accepted only while both its channel and its ideal point
// are unconsumed. Ties break on (channel, element id).
ApertureMask no_reuse_select(const IdealSpiral& ideal, const ArrayGeometry& geom,
                             double sigma_d, double r_in,
                             double candidate_radius = 2.0);

// Builds the rect/ZM/DC1/DC2 window set over a mask. Warns (returns flag via
// balance_warning) above 5% inner/outer imbalance and rejects above 10%.
ApodizationSet nsi_windows(const ApertureMask& mask, double dc = 1.0,
                           bool* balance_warning = nullptr);

// CSV: element_id,w_zm,w_dc1,w_dc2
void write_apodization_csv(const ApodizationSet& set, std::ostream& os);

// 8-bit PGM of one weight vector on the physical n_cols x n_rows grid; blank
// rows and unmasked elements render mid-gray.
void write_apodization_pgm(const ApodizationSet& set, const ArrayGeometry& geom,
                           const std::vector<double>& weights, std::ostream& os);

}  // namespace nsi3d
