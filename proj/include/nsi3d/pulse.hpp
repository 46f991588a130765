#pragma once

#include <vector>

#include "nsi3d/common.hpp"

namespace nsi3d {

// Gaussian-envelope tone burst. The envelope sigma is chosen so the -6 dB
// spectral width equals fractional_bandwidth * center_frequency.
struct Pulse {
    double center_frequency = 3e6;      // [Hz]
    double fractional_bandwidth = 0.70;
    double sampling_rate = 12e6;        // [Hz]

    double sigma_t() const;          // [s] envelope standard deviation
    double half_support() const;     // [s] evaluation cut-off (6 sigma)
    double eval(double t) const;     // exact waveform
    // -6 dB axial pulse length (round trip): c * fwhm_t / 2
    double axial_length(double sound_speed) const;
};

// Tabulated pulse for fast RF synthesis: linear interpolation on a grid of
// `oversample` points per output sample, so consecutive RF samples advance
// the table index by an integer stride with a constant fraction.
class PulseTable {
  public:
    PulseTable(const Pulse& pulse, int oversample = 128);

    int half_width_samples() const { return half_width_; }
    int oversample() const { return oversample_; }
    // value at (j / fs - tau) for integer sample j given u = tau * fs
    // callers resolve the table base; see simulate.cpp
    const std::vector<double>& values() const { return table_; }

  private:
    std::vector<double> table_;
    int half_width_;
    int oversample_;
};

}  // namespace nsi3d
