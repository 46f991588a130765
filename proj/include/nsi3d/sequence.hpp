#pragma once

#include <iosfwd>
#include <vector>

#include "nsi3d/aperture.hpp"
#include "nsi3d/geometry.hpp"

namespace nsi3d {

struct VirtualSource {
    double azimuth_tilt_deg = 0.0;
    double elevation_tilt_deg = 0.0;
    double standoff = 17.4e-3;  // [m] distance behind the array center
    Vec3 position;              // [m], z < 0
};

struct TxEvent {
    int event_index = 0;
    int angle_index = 0;
    int tx_bank = -1;  // -1: all banks fire together (conflict-free aperture)
    int rx_bank = -1;
    VirtualSource source;
    std::vector<int> tx_elements;
    std::vector<int> rx_elements;
};

struct AcquisitionPlan {
    std::vector<TxEvent> events;
    int angles = 0;
    int events_per_angle = 0;
    // accounting, filled by volume_rate()
    double depth = 0.0;              // [m]
    double sound_speed = 0.0;        // [m/s]
    double rf_bytes_per_volume = 0.0;
    double max_volume_rate = 0.0;    // [volumes/s]
};

// 3x3 angular grid of diverging-wave sources behind the array; first source
// is (0 deg, 0 deg). Azimuth tilts about y, elevation about x.
std::vector<VirtualSource> virtual_sources(double standoff, double tilt_deg);

// Multiplexed apertures expand to all (tx bank, rx bank) pairs that intersect
// the mask per angle; a conflict-free mask runs one full-aperture event per
// angle.
AcquisitionPlan build_plan(const ApertureMask& aperture, const ArrayGeometry& geom,
                           const std::vector<VirtualSource>& sources);

// Max volume rate for a round trip to `depth`; also fills the RF-size
// estimate (sum over events of rx count x samples x bytes).
double volume_rate(AcquisitionPlan& plan, double depth, double sound_speed,
                   double sampling_rate = 12e6, int bytes_per_sample = 2);

// CSV: event_index,angle_index,tx_bank,rx_bank,n_tx,n_rx
void write_plan_csv(const AcquisitionPlan& plan, std::ostream& os);

}  // namespace nsi3d
