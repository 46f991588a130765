#include "nsi3d/aperture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>
#include <tuple>

namespace nsi3d {

namespace {

constexpr double kGoldenAngle = 2.39996322972865332;  // pi*(3 - sqrt(5)) [rad]

// design-plane y: element row coordinate on the gap-free grid
double design_y(const ArrayGeometry& geom, const Element& e) {
    return (e.active_row - 0.5 * (geom.n_active_rows() - 1)) * geom.pitch;
}

void finalize_counts(ApertureMask& m) {
    m.n_inner = static_cast<int>(std::count(m.is_inner.begin(), m.is_inner.end(), true));
    m.n_outer = static_cast<int>(m.element_ids.size()) - m.n_inner;
}

}  // namespace

std::string to_string(ApertureKind k) {
    switch (k) {
        case ApertureKind::circular: return "circular";
        case ApertureKind::spiral: return "spiral";
        case ApertureKind::spiral_no_reuse: return "spiral_no_reuse";
        case ApertureKind::rectangular: return "rectangular";
    }
    return "?";
}

ApertureKind aperture_kind_from_string(const std::string& s) {
    if (s == "circular") return ApertureKind::circular;
    if (s == "spiral") return ApertureKind::spiral;
    if (s == "spiral_no_reuse") return ApertureKind::spiral_no_reuse;
    if (s == "rectangular") return ApertureKind::rectangular;
    throw config_error("unknown aperture kind '" + s + "'");
}

ApertureMask circular_mask(const ArrayGeometry& geom, double r_out, double r_in) {
    if (r_out <= 0.0) throw config_error("circular_mask: r_out must be positive");
    ApertureMask m;
    m.kind = ApertureKind::circular;
    m.r_in = r_in;
    m.r_out = r_out;
    const double eps = 1e-9 * geom.pitch;
    for (const auto& e : geom.elements) {
        if (e.radial_distance <= r_out + eps) {
            m.element_ids.push_back(e.id);
            m.is_inner.push_back(e.radial_distance <= r_in + eps);
        }
    }
    if (m.element_ids.empty()) throw config_error("circular_mask: no element inside r_out");
    finalize_counts(m);
    return m;
}

ApertureMask rectangular_mask(const ArrayGeometry& geom, int inner_half_width) {
    const int half_cols = geom.n_cols / 2;
    const int half_rows = geom.n_active_rows() / 2;
    if (inner_half_width < 0 || inner_half_width >= std::min(half_cols, half_rows))
        throw config_error("rectangular_mask: inner rectangle must lie strictly inside the grid");
    ApertureMask m;
    m.kind = ApertureKind::rectangular;
    m.r_in = inner_half_width * geom.pitch;
    m.r_out = std::max(half_cols, half_rows) * geom.pitch;
    const double lim = inner_half_width * geom.pitch;
    const double eps = 1e-9 * geom.pitch;
    for (const auto& e : geom.elements) {
        m.element_ids.push_back(e.id);
        const double yd = design_y(geom, e);
        m.is_inner.push_back(std::abs(e.position.x) <= lim - eps && std::abs(yd) <= lim - eps);
    }
    finalize_counts(m);
    return m;
}

IdealSpiral fermat_spiral_ideal(int n, double r_max) {
    if (n < 1) throw config_error("fermat_spiral_ideal: need at least one point");
    if (r_max <= 0.0) throw config_error("fermat_spiral_ideal: r_max must be positive");
    IdealSpiral s;
    s.n_points = n;
    s.r_max = r_max;
    s.points.reserve(n);
    for (int k = 0; k < n; ++k) {
        const double r = r_max * std::sqrt((k + 0.5) / n);
        const double th = k * kGoldenAngle;
        s.points.push_back({r * std::cos(th), r * std::sin(th)});
    }
    return s;
}

ApertureMask quantize_to_grid(const IdealSpiral& ideal, const ArrayGeometry& geom, double r_in) {
    if (ideal.points.empty()) throw config_error("quantize_to_grid: empty ideal spiral");
    const double eps = 1e-9 * geom.pitch;
    std::set<int> chosen;
    for (const auto& p : ideal.points) {
        double best = std::numeric_limits<double>::infinity();
        int best_id = -1;
        for (const auto& e : geom.elements) {
            if (e.radial_distance > ideal.r_max + eps) continue;
            const double d = std::hypot(e.position.x - p[0], design_y(geom, e) - p[1]);
            if (d < best) {
                best = d;
                best_id = e.id;
            }
        }
        if (best_id >= 0) chosen.insert(best_id);
    }
    ApertureMask m;
    m.kind = ApertureKind::spiral;
    m.r_in = r_in;
    m.r_out = ideal.r_max;
    for (int id : chosen) {
        m.element_ids.push_back(id);
        m.is_inner.push_back(geom.elements[id].radial_distance <= r_in + eps);
    }
    finalize_counts(m);
    return m;
}

double selection_score(double d_min, double sigma_d) {
    if (d_min < 0.0) throw config_error("selection_score: d_min must be non-negative");
    if (sigma_d <= 0.0) throw config_error("selection_score: sigma_d must be positive");
    return std::exp(-d_min / (2.0 * sigma_d * sigma_d));
}

ApertureMask no_reuse_select(const IdealSpiral& ideal, const ArrayGeometry& geom,
                             double sigma_d, double r_in, double candidate_radius) {
    if (ideal.points.empty()) throw config_error("no_reuse_select: empty ideal spiral");
    const double eps = 1e-9 * geom.pitch;
    const double cap = candidate_radius * geom.pitch;

    struct Pair {
        double score;
        int channel;
        int element;
        int point;
    };
    std::vector<Pair> pairs;
    for (int i = 0; i < static_cast<int>(ideal.points.size()); ++i) {
        const auto& p = ideal.points[i];
        for (const auto& e : geom.elements) {
            if (e.radial_distance > ideal.r_max + eps) continue;
            const double d = std::hypot(e.position.x - p[0], design_y(geom, e) - p[1]);
            if (d > cap + eps) continue;
            pairs.push_back({selection_score(d / geom.pitch, sigma_d), e.channel, e.id, i});
        }
    }
    std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
        return std::tie(b.score, a.channel, a.element) < std::tie(a.score, b.channel, b.element);
    });

    std::vector<bool> channel_used(geom.n_channels(), false);
    std::vector<bool> point_used(ideal.points.size(), false);
    std::set<int> chosen;
    for (const auto& pr : pairs) {
        if (channel_used[pr.channel] || point_used[pr.point]) continue;
        channel_used[pr.channel] = true;
        point_used[pr.point] = true;
        chosen.insert(pr.element);
    }

    ApertureMask m;
    m.kind = ApertureKind::spiral_no_reuse;
    m.r_in = r_in;
    m.r_out = ideal.r_max;
    for (int id : chosen) {
        m.element_ids.push_back(id);
        m.is_inner.push_back(geom.elements[id].radial_distance <= r_in + eps);
    }
    finalize_counts(m);
    return m;
}

ApodizationSet nsi_windows(const ApertureMask& mask, double dc, bool* balance_warning) {
    if (mask.n_inner == 0 || mask.n_outer == 0)
        throw config_error("nsi_windows: aperture cannot form zero-mean window "
                           "(one-sided inner/outer partition)");
    const double imbalance =
        std::abs(mask.n_inner - mask.n_outer) / static_cast<double>(mask.n_inner + mask.n_outer);
    if (imbalance > 0.10)
        throw config_error("nsi_windows: inner/outer imbalance " + std::to_string(imbalance) +
                           " exceeds 0.10");
    if (balance_warning) *balance_warning = imbalance > 0.05;

    ApodizationSet s;
    s.mask = mask;
    s.dc = dc;
    const std::size_t n = mask.element_ids.size();
    s.w_rect.assign(n, 1.0);
    s.w_zm.resize(n);
    s.w_dc1.resize(n);
    s.w_dc2.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        s.w_zm[i] = mask.is_inner[i] ? -1.0 : 1.0;
        s.w_dc1[i] = s.w_zm[i] + dc;
        s.w_dc2[i] = -s.w_zm[i] + dc;
    }
    return s;
}

void write_apodization_csv(const ApodizationSet& set, std::ostream& os) {
    os << "element_id,w_zm,w_dc1,w_dc2\n";
    for (std::size_t i = 0; i < set.mask.element_ids.size(); ++i)
        os << set.mask.element_ids[i] << ',' << set.w_zm[i] << ',' << set.w_dc1[i] << ','
           << set.w_dc2[i] << '\n';
}

void write_apodization_pgm(const ApodizationSet& set, const ArrayGeometry& geom,
                           const std::vector<double>& weights, std::ostream& os) {
    // weights span [-2, 2] for dc = 1; map linearly onto [0, 255], 128 = 0
    std::set<int> blanks(geom.blank_rows.begin(), geom.blank_rows.end());
    std::vector<unsigned char> img(static_cast<std::size_t>(geom.n_cols) * geom.n_rows_physical,
                                   128);
    std::vector<int> active_phys;
    for (int r = 0; r < geom.n_rows_physical; ++r)
        if (!blanks.count(r + 1)) active_phys.push_back(r);
    for (std::size_t i = 0; i < set.mask.element_ids.size(); ++i) {
        const Element& e = geom.elements[set.mask.element_ids[i]];
        const int phys = active_phys[e.active_row];
        const double w = std::clamp(weights[i], -2.0, 2.0);
        img[static_cast<std::size_t>(phys) * geom.n_cols + e.col] =
            static_cast<unsigned char>(std::lround(128.0 + w * 63.5));
    }
    os << "P5\n" << geom.n_cols << ' ' << geom.n_rows_physical << "\n255\n";
    // top row = largest y
    for (int r = geom.n_rows_physical - 1; r >= 0; --r)
        os.write(reinterpret_cast<const char*>(&img[static_cast<std::size_t>(r) * geom.n_cols]),
                 geom.n_cols);
}

}  // namespace nsi3d
