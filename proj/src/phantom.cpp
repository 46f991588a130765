#include "nsi3d/phantom.hpp"

#include <cmath>
#include <random>

#include "nsi3d/beampattern.hpp"

namespace nsi3d {

Phantom make_point_phantom(std::span<const double> depths) {
    Phantom p;
    for (double d : depths) {
        if (d <= 0.0) throw config_error("make_point_phantom: depth must be positive");
        p.scatterers.push_back({{0.0, 0.0, d}, 1.0});
    }
    return p;
}

Phantom make_cyst_phantom(const CystSpec& spec, const ArrayGeometry& geom, const Pulse& pulse) {
    if (spec.scatterers_per_cell <= 0.0)
        throw config_error("make_cyst_phantom: scatterer density must be positive");

    // -6 dB lateral widths of the plain full-array window at the box depth
    std::vector<double> rect(geom.n_elements(), 1.0);
    const auto pat = cw_pattern(rect, geom, spec.box_center.z, 6e-3, 121, pulse.center_frequency);
    const double w_az = pattern_width_6db(pat, 0);
    const double w_el = pattern_width_6db(pat, 1);
    const double cell = pulse.axial_length(geom.sound_speed) * w_az * w_el;

    Phantom p;
    p.rng_seed = spec.seed;
    p.resolution_cell_volume = cell;
    p.box_volume = spec.box_size.x * spec.box_size.y * spec.box_size.z;
    const auto count =
        static_cast<std::size_t>(std::llround(spec.scatterers_per_cell * p.box_volume / cell));

    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> ux(-0.5 * spec.box_size.x, 0.5 * spec.box_size.x);
    std::uniform_real_distribution<double> uy(-0.5 * spec.box_size.y, 0.5 * spec.box_size.y);
    std::uniform_real_distribution<double> uz(-0.5 * spec.box_size.z, 0.5 * spec.box_size.z);
    std::normal_distribution<double> amp(0.0, 1.0);

    const double r2 = 0.25 * spec.cyst_diameter * spec.cyst_diameter;
    p.scatterers.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Scatterer s;
        s.position = spec.box_center + Vec3{ux(rng), uy(rng), uz(rng)};
        s.amplitude = amp(rng);
        const Vec3 d = s.position - spec.cyst_center;
        if (d.dot(d) <= r2) s.amplitude *= spec.inside_amp_ratio;
        if (s.position.z <= 0.0)
            throw config_error("make_cyst_phantom: box extends behind the array");
        p.scatterers.push_back(s);
    }
    return p;
}

}  // namespace nsi3d
