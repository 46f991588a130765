#pragma once

#include <complex>
#include <vector>

namespace nsi3d {

// FFT-based analytic (quadrature) signal: negative frequencies zeroed,
// positive doubled. One instance per transform length; execution is
// thread-safe, planning is not.
class AnalyticTransform {
  public:
    explicit AnalyticTransform(int n);
    ~AnalyticTransform();
    AnalyticTransform(const AnalyticTransform&) = delete;
    AnalyticTransform& operator=(const AnalyticTransform&) = delete;

    int length() const { return n_; }
    void transform(const double* in, std::complex<double>* out) const;

  private:
    int n_;
    void* fwd_;  // fftw_plan
    void* inv_;
};

}  // namespace nsi3d
