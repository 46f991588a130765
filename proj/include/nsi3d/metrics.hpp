#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nsi3d/beamform.hpp"
#include "nsi3d/common.hpp"

namespace nsi3d {

enum class ProfileAxis { azimuth, elevation };

// 1D linear-envelope profile, peak-normalized to 1 before threshold searches.
struct BeamProfile {
    ProfileAxis axis = ProfileAxis::azimuth;
    std::vector<double> coordinates;  // [m]
    std::vector<double> amplitudes;   // normalized
    int peak_index = 0;
    bool truncated = false;  // peak on the profile boundary
};

// Line through the global-maximum voxel along the requested axis.
BeamProfile profile_through_max(const EnvelopeVolume& volume, ProfileAxis axis);

// Builds a profile from explicitly beamformed line samples.
BeamProfile make_profile(std::vector<double> coordinates, std::vector<double> amplitudes,
                         ProfileAxis axis);

// Linear-interpolated width at half maximum (-6 dB amplitude).
double fwhm(const BeamProfile& profile);

// Side-to-main-lobe energy ratio [dB]: trapezoidal side-lobe energy between
// the -6 dB and -40 dB crossings over main-lobe energy. Crossings that never
// occur clamp at the profile ends (clamped flag). Zero side energy reports
// the -300 dB sentinel.
struct SmerResult {
    double db = 0.0;
    bool clamped = false;
};
SmerResult smer(const BeamProfile& profile);

struct SphereRegion {
    Vec3 center;
    double radius = 0.0;  // [m]
};

struct ShellRegion {
    Vec3 center;
    double r_inner = 0.0;  // [m]
    double r_outer = 0.0;  // [m]
};

struct ContrastResult {
    double cr = 0.0;   // (mu_o - mu_i)/(mu_o + mu_i)
    double cnr = 0.0;  // (mu_o - mu_i)/sqrt(sigma_i^2 + sigma_o^2)
    double mu_i = 0.0, mu_o = 0.0;
    double sigma_i = 0.0, sigma_o = 0.0;
    std::size_t n_inside = 0, n_outside = 0;
};

// Linear-envelope contrast between a sphere and a surrounding shell.
ContrastResult contrast(const EnvelopeVolume& volume, const SphereRegion& inside,
                        const ShellRegion& outside);

// CSV: coordinate_m,amplitude,db
void write_profile_csv(const BeamProfile& p, std::ostream& os);

}  // namespace nsi3d
