#include "nsi3d/pulse.hpp"

#include <cmath>

namespace nsi3d {

double Pulse::sigma_t() const {
    // Gaussian spectrum: -6 dB amplitude half-width = sigma_f * sqrt(2 ln 2)
    const double half_bw = 0.5 * fractional_bandwidth * center_frequency;
    const double sigma_f = half_bw / std::sqrt(2.0 * std::log(2.0));
    return 1.0 / (2.0 * M_PI * sigma_f);
}

double Pulse::half_support() const { return 6.0 * sigma_t(); }

double Pulse::eval(double t) const {
    if (std::abs(t) > half_support()) return 0.0;
    const double s = sigma_t();
    return std::exp(-t * t / (2.0 * s * s)) * std::cos(2.0 * M_PI * center_frequency * t);
}

double Pulse::axial_length(double sound_speed) const {
    const double fwhm_t = 2.0 * std::sqrt(2.0 * std::log(2.0)) * sigma_t();
    return sound_speed * fwhm_t / 2.0;
}

PulseTable::PulseTable(const Pulse& pulse, int oversample) : oversample_(oversample) {
    half_width_ = static_cast<int>(std::ceil(pulse.half_support() * pulse.sampling_rate)) + 1;
    const std::size_t n = static_cast<std::size_t>(2 * half_width_) * oversample + 2;
    table_.resize(n);
    const double dt = 1.0 / (pulse.sampling_rate * oversample);
    for (std::size_t i = 0; i < n; ++i)
        table_[i] = pulse.eval((static_cast<double>(i) - half_width_ * oversample) * dt);
}

}  // namespace nsi3d
