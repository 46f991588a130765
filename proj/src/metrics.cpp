#include "nsi3d/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace nsi3d {

namespace {

void normalize_peak(BeamProfile& p) {
    const auto it = std::max_element(p.amplitudes.begin(), p.amplitudes.end());
    if (it == p.amplitudes.end() || *it <= 0.0)
        throw compute_error("beam profile has no positive peak");
    p.peak_index = static_cast<int>(it - p.amplitudes.begin());
    const double peak = *it;
    for (double& a : p.amplitudes) a /= peak;
    p.truncated = p.peak_index == 0 || p.peak_index + 1 == static_cast<int>(p.amplitudes.size());
}

// outward crossing of `level`, linear interpolation; NaN if never reached
double crossing(const BeamProfile& p, double level, int step) {
    int i = p.peak_index;
    const int n = static_cast<int>(p.amplitudes.size());
    while ((step < 0 && i > 0) || (step > 0 && i + 1 < n)) {
        const int j = i + step;
        if (p.amplitudes[j] < level) {
            const double f = (p.amplitudes[i] - level) / (p.amplitudes[i] - p.amplitudes[j]);
            return p.coordinates[i] + f * (p.coordinates[j] - p.coordinates[i]);
        }
        i = j;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

// trapezoid over the samples falling inside [a, b]; a profile that is truly
// silent between two crossings integrates to exactly zero
double integrate(const BeamProfile& p, double a, double b) {
    if (!(b > a)) return 0.0;
    const auto& x = p.coordinates;
    const auto& y = p.amplitudes;
    const int n = static_cast<int>(x.size());
    double sum = 0.0;
    bool have_prev = false;
    double px = 0.0, pv = 0.0;
    for (int i = 0; i < n; ++i) {
        if (x[i] < a) continue;
        if (x[i] > b) break;
        if (have_prev) sum += 0.5 * (pv + y[i]) * (x[i] - px);
        px = x[i];
        pv = y[i];
        have_prev = true;
    }
    return sum;
}

}  // namespace

BeamProfile profile_through_max(const EnvelopeVolume& volume, ProfileAxis axis) {
    const auto& g = volume.grid;
    const auto it = std::max_element(volume.values.begin(), volume.values.end());
    if (it == volume.values.end() || *it <= 0.0)
        throw compute_error("profile_through_max: all-zero volume");
    const std::size_t flat = static_cast<std::size_t>(it - volume.values.begin());
    const int iz = static_cast<int>(flat % g.nz);
    const int iy = static_cast<int>((flat / g.nz) % g.ny);
    const int ix = static_cast<int>(flat / (static_cast<std::size_t>(g.nz) * g.ny));

    BeamProfile p;
    p.axis = axis;
    const int n = axis == ProfileAxis::azimuth ? g.nx : g.ny;
    p.coordinates.resize(n);
    p.amplitudes.resize(n);
    for (int i = 0; i < n; ++i) {
        if (axis == ProfileAxis::azimuth) {
            p.coordinates[i] = g.origin.x + i * g.spacing.x;
            p.amplitudes[i] = volume.values[g.index(i, iy, iz)];
        } else {
            p.coordinates[i] = g.origin.y + i * g.spacing.y;
            p.amplitudes[i] = volume.values[g.index(ix, i, iz)];
        }
    }
    normalize_peak(p);
    return p;
}

BeamProfile make_profile(std::vector<double> coordinates, std::vector<double> amplitudes,
                         ProfileAxis axis) {
    if (coordinates.size() != amplitudes.size() || coordinates.size() < 3)
        throw config_error("make_profile: need matching coordinate/amplitude arrays");
    BeamProfile p;
    p.axis = axis;
    p.coordinates = std::move(coordinates);
    p.amplitudes = std::move(amplitudes);
    normalize_peak(p);
    return p;
}

double fwhm(const BeamProfile& profile) {
    if (profile.truncated) throw compute_error("fwhm: peak not interior to the profile");
    const double lo = crossing(profile, 0.5, -1);
    const double hi = crossing(profile, 0.5, +1);
    if (std::isnan(lo) || std::isnan(hi))
        throw compute_error("fwhm: unresolved lobe (no half-maximum crossing)");
    return hi - lo;
}

SmerResult smer(const BeamProfile& profile) {
    const double lvl6 = 0.5;                      // -6 dB amplitude
    const double lvl40 = std::pow(10.0, -2.0);    // -40 dB amplitude
    double x6l = crossing(profile, lvl6, -1);
    double x6r = crossing(profile, lvl6, +1);
    if (std::isnan(x6l) || std::isnan(x6r))
        throw compute_error("smer: main lobe has no -6 dB bounds");
    SmerResult res;
    double x40l = crossing(profile, lvl40, -1);
    double x40r = crossing(profile, lvl40, +1);
    if (std::isnan(x40l)) {
        x40l = profile.coordinates.front();
        res.clamped = true;
    }
    if (std::isnan(x40r)) {
        x40r = profile.coordinates.back();
        res.clamped = true;
    }
    const double main = integrate(profile, x6l, x6r);
    if (main <= 0.0) throw compute_error("smer: degenerate main lobe");
    const double side = integrate(profile, x40l, x6l) + integrate(profile, x6r, x40r);
    res.db = side > 0.0 ? 20.0 * std::log10(side / main) : -300.0;
    return res;
}

ContrastResult contrast(const EnvelopeVolume& volume, const SphereRegion& inside,
                        const ShellRegion& outside) {
    const double cc = (outside.center - inside.center).norm();
    const bool sphere_in_hole = cc + inside.radius <= outside.r_inner;
    const bool sphere_beyond = cc - inside.radius >= outside.r_outer;
    if (!sphere_in_hole && !sphere_beyond) throw config_error("contrast: regions overlap");
    const auto& g = volume.grid;
    double s_i = 0, s2_i = 0, s_o = 0, s2_o = 0;
    std::size_t n_i = 0, n_o = 0;
    for (int ix = 0; ix < g.nx; ++ix)
        for (int iy = 0; iy < g.ny; ++iy)
            for (int iz = 0; iz < g.nz; ++iz) {
                const Vec3 v = g.voxel_center(ix, iy, iz);
                const double val = volume.values[g.index(ix, iy, iz)];
                const double di = (v - inside.center).norm();
                if (di <= inside.radius) {
                    s_i += val;
                    s2_i += val * val;
                    ++n_i;
                    continue;
                }
                const double doo = (v - outside.center).norm();
                if (doo >= outside.r_inner && doo <= outside.r_outer) {
                    s_o += val;
                    s2_o += val * val;
                    ++n_o;
                }
            }
    if (n_i < 100 || n_o < 100)
        throw config_error("contrast: regions must each contain at least 100 voxels");
    ContrastResult r;
    r.n_inside = n_i;
    r.n_outside = n_o;
    r.mu_i = s_i / n_i;
    r.mu_o = s_o / n_o;
    r.sigma_i = std::sqrt(std::max(0.0, s2_i / n_i - r.mu_i * r.mu_i));
    r.sigma_o = std::sqrt(std::max(0.0, s2_o / n_o - r.mu_o * r.mu_o));
    r.cr = (r.mu_o - r.mu_i) / (r.mu_o + r.mu_i);
    r.cnr = (r.mu_o - r.mu_i) / std::sqrt(r.sigma_i * r.sigma_i + r.sigma_o * r.sigma_o);
    return r;
}

void write_profile_csv(const BeamProfile& p, std::ostream& os) {
    os << "coordinate_m,amplitude,db\n";
    os.precision(9);
    for (std::size_t i = 0; i < p.coordinates.size(); ++i) {
        const double a = p.amplitudes[i];
        os << p.coordinates[i] << ',' << a << ','
           << (a > 0.0 ? 20.0 * std::log10(a) : -999.0) << '\n';
    }
}

}  // namespace nsi3d
