#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

#include "nsi3d/aperture.hpp"
#include "nsi3d/geometry.hpp"

namespace nsi3d {

// Response sampled on a lateral x-y plane at fixed depth. For NSI patterns
// the response is real non-negative (magnitude-domain combination).
struct BeamPattern2D {
    std::vector<double> x;  // [m]
    std::vector<double> y;  // [m]
    double depth = 0.0;     // [m]
    double frequency = 0.0; // [Hz]
    std::vector<std::complex<double>> response;  // x-major: [ix * ny + iy]
    double reference = 0.0;  // |response| at the focal point (normalization)

    std::complex<double> at(std::size_t ix, std::size_t iy) const {
        return response[ix * y.size() + iy];
    }
};

// Narrowband array response with focusing phases referenced to the on-axis
// focal point: sum_e w_e * exp(j k (|p_f - p_e| - |p_focus - p_e|)).
// `weights` is indexed by element id; elements with weight 0 are skipped.
std::complex<double> cw_response(const std::vector<double>& weights, const ArrayGeometry& geom,
                                 double focus_depth, const Vec3& field_point, double frequency);

// Sweep of cw_response over a centered (2*half_extent)^2 lateral window.
BeamPattern2D cw_pattern(const std::vector<double>& weights, const ArrayGeometry& geom,
                         double depth, double half_extent, int n_points, double frequency);

// Magnitude-domain NSI combination of the three window patterns:
// max(0, (|B_DC1| + |B_DC2|)/2 - |B_ZM|).
BeamPattern2D nsi_pattern(const ApodizationSet& set, const ArrayGeometry& geom, double depth,
                          double half_extent, int n_points, double frequency);

// -6 dB width of the central lobe along x (axis 0) or y (axis 1), linear
// interpolation between samples.
double pattern_width_6db(const BeamPattern2D& p, int axis);

// expands mask-aligned weights onto an element-id-indexed vector (zeros off mask)
std::vector<double> full_weights(const ApodizationSet& set, const std::vector<double>& w,
                                 const ArrayGeometry& geom);

void write_pattern_csv(const BeamPattern2D& p, std::ostream& os);
void write_pattern_pgm(const BeamPattern2D& p, double dynamic_range_db, std::ostream& os);

}  // namespace nsi3d
