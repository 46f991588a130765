#include "nsi3d/sequence.hpp"

#include <cmath>
#include <ostream>

namespace nsi3d {

std::vector<VirtualSource> virtual_sources(double standoff, double tilt_deg) {
    if (standoff <= 0.0) throw config_error("virtual_sources: standoff must be positive");
    std::vector<VirtualSource> out;
    out.reserve(9);
    auto make = [&](double az_deg, double el_deg) {
        const double az = deg2rad(az_deg), el = deg2rad(el_deg);
        // unit steering direction: rotate +z about y by az, then about x by el
        const Vec3 dir{std::sin(az), -std::cos(az) * std::sin(el), std::cos(az) * std::cos(el)};
        VirtualSource vs;
        vs.azimuth_tilt_deg = az_deg;
        vs.elevation_tilt_deg = el_deg;
        vs.standoff = standoff;
        vs.position = -standoff * dir;
        return vs;
    };
    out.push_back(make(0.0, 0.0));
    for (double az : {-tilt_deg, 0.0, tilt_deg})
        for (double el : {-tilt_deg, 0.0, tilt_deg})
            if (!(az == 0.0 && el == 0.0)) out.push_back(make(az, el));
    return out;
}

AcquisitionPlan build_plan(const ApertureMask& aperture, const ArrayGeometry& geom,
                           const std::vector<VirtualSource>& sources) {
    if (aperture.element_ids.empty()) throw config_error("build_plan: empty aperture");
    if (sources.empty()) throw config_error("build_plan: no virtual sources");

    AcquisitionPlan plan;
    plan.angles = static_cast<int>(sources.size());
    plan.sound_speed = geom.sound_speed;

    if (aperture.kind == ApertureKind::spiral_no_reuse) {
        if (!channel_conflicts(geom, aperture.element_ids).empty())
            throw config_error("build_plan: mask has channel conflicts, cannot run "
                               "single-event acquisition");
        plan.events_per_angle = 1;
        for (int a = 0; a < plan.angles; ++a) {
            TxEvent ev;
            ev.event_index = a;
            ev.angle_index = a;
            ev.source = sources[a];
            ev.tx_elements = aperture.element_ids;
            ev.rx_elements = aperture.element_ids;
            plan.events.push_back(std::move(ev));
        }
        return plan;
    }

    // bank-by-bank multiplexing: only banks that intersect the mask fire/listen
    std::vector<std::vector<int>> bank_elems(geom.n_banks());
    for (int id : aperture.element_ids) bank_elems[geom.elements[id].bank].push_back(id);
    std::vector<int> live;
    for (int b = 0; b < geom.n_banks(); ++b)
        if (!bank_elems[b].empty()) live.push_back(b);

    plan.events_per_angle = static_cast<int>(live.size() * live.size());
    int idx = 0;
    for (int a = 0; a < plan.angles; ++a)
        for (int tb : live)
            for (int rb : live) {
                TxEvent ev;
                ev.event_index = idx++;
                ev.angle_index = a;
                ev.tx_bank = tb;
                ev.rx_bank = rb;
                ev.source = sources[a];
                ev.tx_elements = bank_elems[tb];
                ev.rx_elements = bank_elems[rb];
                plan.events.push_back(std::move(ev));
            }
    return plan;
}

double volume_rate(AcquisitionPlan& plan, double depth, double sound_speed,
                   double sampling_rate, int bytes_per_sample) {
    if (depth <= 0.0 || sound_speed <= 0.0)
        throw config_error("volume_rate: depth and sound speed must be positive");
    const double t_event = 2.0 * depth / sound_speed;
    const double n_samples = std::ceil(t_event * sampling_rate);
    double bytes = 0.0;
    for (const auto& ev : plan.events)
        bytes += static_cast<double>(ev.rx_elements.size()) * n_samples * bytes_per_sample;
    plan.depth = depth;
    plan.sound_speed = sound_speed;
    plan.rf_bytes_per_volume = bytes;
    plan.max_volume_rate = 1.0 / (static_cast<double>(plan.events.size()) * t_event);
    return plan.max_volume_rate;
}

void write_plan_csv(const AcquisitionPlan& plan, std::ostream& os) {
    os << "event_index,angle_index,tx_bank,rx_bank,n_tx,n_rx\n";
    for (const auto& ev : plan.events)
        os << ev.event_index << ',' << ev.angle_index << ',' << ev.tx_bank << ',' << ev.rx_bank
           << ',' << ev.tx_elements.size() << ',' << ev.rx_elements.size() << '\n';
}

}  // namespace nsi3d
