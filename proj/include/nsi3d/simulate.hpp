#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "nsi3d/geometry.hpp"
#include "nsi3d/phantom.hpp"
#include "nsi3d/pulse.hpp"
#include "nsi3d/sequence.hpp"

namespace nsi3d {

// One event's channel data, channel-major: samples[ch * n_samples + s].
// Channels are ordered by ascending rx element id.
struct EventRf {
    std::vector<int> rx_elements;
    std::vector<double> samples;
};

struct RfDataset {
    double sampling_rate = 12e6;  // [Hz]
    double t0 = 0.0;              // [s] first-sample time, zero at the array-center wavefront
    int n_samples = 0;
    std::vector<EventRf> events;
};

struct SimOptions {
    double sampling_rate = 12e6;  // [Hz]
    double t0 = 0.0;              // [s]
    int n_samples = 0;            // 0: derive from max_depth
    double max_depth = 70e-3;     // [m] round-trip window when n_samples == 0
    double noise_rms = 0.0;       // additive white Gaussian noise, off by default
    uint64_t noise_seed = 0;
    unsigned workers = 0;         // 0: hardware concurrency
};

// Diverging-wave single-event synthesis. Per scatterer s and rx element e the
// arrival is tau = (|p_s - p_vs| - standoff)/c + |p_s - p_e|/c with spherical
// spreading 1/(|p_s - p_vs| |p_s - p_e|); contributions accumulate per channel
// in ascending scatterer order.
EventRf simulate_rf(const TxEvent& event, const Phantom& phantom, const ArrayGeometry& geom,
                    const Pulse& pulse, const SimOptions& opt);

// simulate_rf over every event of the plan (parallel across events).
RfDataset simulate_acquisition(const AcquisitionPlan& plan, const Phantom& phantom,
                               const ArrayGeometry& geom, const Pulse& pulse,
                               const SimOptions& opt = {});

// raw little-endian float32 matrix + structured-text header per event
void dump_rf(const RfDataset& ds, const std::string& directory);
RfDataset load_rf(const std::string& directory);

}  // namespace nsi3d
