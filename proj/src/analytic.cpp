#include "nsi3d/analytic.hpp"

#include <fftw3.h>

#include <mutex>

#include "nsi3d/common.hpp"

namespace nsi3d {

namespace {
std::mutex plan_mutex;  // FFTW planning is not thread-safe
}

AnalyticTransform::AnalyticTransform(int n) : n_(n) {
    if (n < 2) throw config_error("AnalyticTransform: need at least 2 samples");
    std::lock_guard<std::mutex> lock(plan_mutex);
    fftw_complex* buf = fftw_alloc_complex(n);
    fwd_ = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_1d(n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_free(buf);
}

AnalyticTransform::~AnalyticTransform() {
    std::lock_guard<std::mutex> lock(plan_mutex);
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(inv_));
}

void AnalyticTransform::transform(const double* in, std::complex<double>* out) const {
    fftw_complex* buf = fftw_alloc_complex(n_);
    for (int i = 0; i < n_; ++i) {
        buf[i][0] = in[i];
        buf[i][1] = 0.0;
    }
    fftw_execute_dft(static_cast<fftw_plan>(fwd_), buf, buf);
    // keep DC and Nyquist, double positive, zero negative frequencies
    const int half = n_ / 2;
    for (int i = 1; i < (n_ + 1) / 2; ++i) {
        buf[i][0] *= 2.0;
        buf[i][1] *= 2.0;
    }
    for (int i = half + 1; i < n_; ++i) {
        buf[i][0] = 0.0;
        buf[i][1] = 0.0;
    }
    fftw_execute_dft(static_cast<fftw_plan>(inv_), buf, buf);
    const double scale = 1.0 / n_;
    for (int i = 0; i < n_; ++i) out[i] = {buf[i][0] * scale, buf[i][1] * scale};
    fftw_free(buf);
}

}  // namespace nsi3d
