#include "nsi3d/beampattern.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "nsi3d/parallel.hpp"

namespace nsi3d {

std::vector<double> full_weights(const ApodizationSet& set, const std::vector<double>& w,
                                 const ArrayGeometry& geom) {
    std::vector<double> out(geom.n_elements(), 0.0);
    for (std::size_t i = 0; i < set.mask.element_ids.size(); ++i)
        out[set.mask.element_ids[i]] = w[i];
    return out;
}

std::complex<double> cw_response(const std::vector<double>& weights, const ArrayGeometry& geom,
                                 double focus_depth, const Vec3& field_point, double frequency) {
    if (focus_depth <= 0.0) throw config_error("cw_response: focus depth must be positive");
    const double k = 2.0 * M_PI * frequency / geom.sound_speed;
    const Vec3 focus{0.0, 0.0, focus_depth};
    std::complex<double> acc{0.0, 0.0};
    for (const auto& e : geom.elements) {
        const double w = weights[e.id];
        if (w == 0.0) continue;
        const double phase = k * ((field_point - e.position).norm() - (focus - e.position).norm());
        acc += w * std::complex<double>(std::cos(phase), std::sin(phase));
    }
    return acc;
}

BeamPattern2D cw_pattern(const std::vector<double>& weights, const ArrayGeometry& geom,
                         double depth, double half_extent, int n_points, double frequency) {
    BeamPattern2D p;
    p.depth = depth;
    p.frequency = frequency;
    p.x.resize(n_points);
    p.y.resize(n_points);
    for (int i = 0; i < n_points; ++i) {
        const double t = n_points == 1 ? 0.0 : -half_extent + 2.0 * half_extent * i / (n_points - 1);
        p.x[i] = t;
        p.y[i] = t;
    }
    p.response.resize(static_cast<std::size_t>(n_points) * n_points);
    parallel_for(n_points, 0, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t ix = lo; ix < hi; ++ix)
            for (int iy = 0; iy < n_points; ++iy)
                p.response[ix * n_points + iy] =
                    cw_response(weights, geom, depth, {p.x[ix], p.y[iy], depth}, frequency);
    });
    p.reference = std::abs(cw_response(weights, geom, depth, {0.0, 0.0, depth}, frequency));
    return p;
}

BeamPattern2D nsi_pattern(const ApodizationSet& set, const ArrayGeometry& geom, double depth,
                          double half_extent, int n_points, double frequency) {
    const auto zm = cw_pattern(full_weights(set, set.w_zm, geom), geom, depth, half_extent,
                               n_points, frequency);
    const auto d1 = cw_pattern(full_weights(set, set.w_dc1, geom), geom, depth, half_extent,
                               n_points, frequency);
    const auto d2 = cw_pattern(full_weights(set, set.w_dc2, geom), geom, depth, half_extent,
                               n_points, frequency);
    BeamPattern2D p;
    p.depth = depth;
    p.frequency = frequency;
    p.x = zm.x;
    p.y = zm.y;
    p.response.resize(zm.response.size());
    for (std::size_t i = 0; i < p.response.size(); ++i) {
        const double v = 0.5 * (std::abs(d1.response[i]) + std::abs(d2.response[i])) -
                         std::abs(zm.response[i]);
        p.response[i] = std::max(v, 0.0);
    }
    p.reference = std::max(0.5 * (d1.reference + d2.reference) - zm.reference, 0.0);
    return p;
}

double pattern_width_6db(const BeamPattern2D& p, int axis) {
    const std::size_t nx = p.x.size(), ny = p.y.size();
    const std::size_t n = axis == 0 ? nx : ny;
    const std::size_t cx = nx / 2, cy = ny / 2;
    std::vector<double> prof(n);
    const std::vector<double>& coord = axis == 0 ? p.x : p.y;
    for (std::size_t i = 0; i < n; ++i)
        prof[i] = std::abs(axis == 0 ? p.at(i, cy) : p.at(cx, i));
    const double peak = *std::max_element(prof.begin(), prof.end());
    if (peak <= 0.0) throw compute_error("pattern_width_6db: zero pattern");
    const std::size_t ip = std::max_element(prof.begin(), prof.end()) - prof.begin();
    auto cross = [&](int step) -> double {
        std::size_t i = ip;
        while ((step < 0 && i > 0) || (step > 0 && i + 1 < n)) {
            const std::size_t j = i + step;
            if (prof[j] < 0.5 * peak) {
                const double f = (prof[i] - 0.5 * peak) / (prof[i] - prof[j]);
                return coord[i] + f * (coord[j] - coord[i]);
            }
            i = j;
        }
        throw compute_error("pattern_width_6db: -6 dB level not reached inside the sweep");
    };
    return cross(+1) - cross(-1);
}

void write_pattern_csv(const BeamPattern2D& p, std::ostream& os) {
    os << "x_m,y_m,magnitude,db\n";
    os.precision(9);
    double peak = 0.0;
    for (const auto& v : p.response) peak = std::max(peak, std::abs(v));
    for (std::size_t ix = 0; ix < p.x.size(); ++ix)
        for (std::size_t iy = 0; iy < p.y.size(); ++iy) {
            const double m = std::abs(p.at(ix, iy));
            const double db = m > 0.0 ? 20.0 * std::log10(m / peak) : -999.0;
            os << p.x[ix] << ',' << p.y[iy] << ',' << m << ',' << db << '\n';
        }
}

void write_pattern_pgm(const BeamPattern2D& p, double dynamic_range_db, std::ostream& os) {
    const std::size_t nx = p.x.size(), ny = p.y.size();
    double peak = 0.0;
    for (const auto& v : p.response) peak = std::max(peak, std::abs(v));
    if (peak <= 0.0) throw compute_error("write_pattern_pgm: zero pattern");
    os << "P5\n" << nx << ' ' << ny << "\n65535\n";
    for (std::size_t row = 0; row < ny; ++row) {
        const std::size_t iy = ny - 1 - row;
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const double m = std::abs(p.at(ix, iy));
            double db = m > 0.0 ? 20.0 * std::log10(m / peak) : -dynamic_range_db;
            db = std::clamp(db, -dynamic_range_db, 0.0);
            const auto v = static_cast<unsigned>(
                std::lround((db + dynamic_range_db) / dynamic_range_db * 65535.0));
            const unsigned char hi = static_cast<unsigned char>(v >> 8);
            const unsigned char lo = static_cast<unsigned char>(v & 0xff);
            os.put(static_cast<char>(hi));
            os.put(static_cast<char>(lo));
        }
    }
}

}  // namespace nsi3d
