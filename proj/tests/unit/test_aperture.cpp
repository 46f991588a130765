#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "nsi3d/aperture.hpp"

using namespace nsi3d;

namespace {
const ArrayGeometry& geom() {
    static const ArrayGeometry g = build_matrix_array(300e-6, {9, 17, 25});
    return g;
}
constexpr double kPitch = 300e-6;
}

TEST_SUITE("aperture") {

TEST_CASE("circular aperture at the working radii selects 812 elements, 408/404") {
    const auto m = circular_mask(geom(), 16.0 * kPitch, 11.5 * kPitch);
    CHECK(m.element_ids.size() == 812);
    CHECK(m.n_inner == 408);
    CHECK(m.n_outer == 404);
    for (std::size_t i = 0; i < m.element_ids.size(); ++i) {
        const auto& e = geom().elements[m.element_ids[i]];
        CHECK(e.radial_distance <= m.r_out * (1 + 1e-9));
        CHECK(m.is_inner[i] == (e.radial_distance <= m.r_in * (1 + 1e-9)));
    }
}

TEST_CASE("degenerate and superscribing circles") {
    // no element lies within half a pitch of the center (closest corner of the
    // central 2x2 sits at sqrt(0.5) pitches)
    CHECK_THROWS_AS(circular_mask(geom(), 0.5 * kPitch, 0.25 * kPitch), config_error);
    const auto tiny = circular_mask(geom(), 0.75 * kPitch, 0.5 * kPitch);
    CHECK(tiny.element_ids.size() == 4);
    const auto all = circular_mask(geom(), 40.0 * kPitch, 11.5 * kPitch);
    CHECK(all.element_ids.size() == 1024);
}

TEST_CASE("rectangular aperture: central 22x22 inner region") {
    const auto m = rectangular_mask(geom(), 11);
    CHECK(m.element_ids.size() == 1024);
    CHECK(m.n_inner == 484);
    CHECK(m.n_outer == 540);
}

TEST_CASE("rectangular aperture edge cases") {
    CHECK_THROWS_AS(rectangular_mask(geom(), 16), config_error);  // no outer region left
    const auto m0 = rectangular_mask(geom(), 0);
    CHECK(m0.n_inner == 0);
    CHECK(m0.n_outer == 1024);
    CHECK_THROWS_AS(nsi_windows(m0), config_error);  // cannot form a zero-mean window
}

TEST_CASE("fermat spiral point set") {
    const double r_max = 16.0 * kPitch;
    const auto s = fermat_spiral_ideal(256, r_max);
    CHECK(s.points.size() == 256);
    for (const auto& p : s.points) CHECK(std::hypot(p[0], p[1]) < r_max);

    const auto s1 = fermat_spiral_ideal(1, r_max);
    CHECK(std::hypot(s1.points[0][0], s1.points[0][1]) ==
          doctest::Approx(r_max * std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("fermat spiral nearest-neighbor spread is tight") {
    // oracle: direct pairwise distances over the generated points
    const auto s = fermat_spiral_ideal(256, 16.0 * kPitch);
    std::vector<double> nn(256, 1e9);
    for (int i = 0; i < 256; ++i)
        for (int j = 0; j < 256; ++j) {
            if (i == j) continue;
            const double d = std::hypot(s.points[i][0] - s.points[j][0],
                                        s.points[i][1] - s.points[j][1]);
            nn[i] = std::min(nn[i], d);
        }
    const double mean = std::accumulate(nn.begin(), nn.end(), 0.0) / nn.size();
    double var = 0;
    for (double d : nn) var += (d - mean) * (d - mean);
    const double cv = std::sqrt(var / nn.size()) / mean;
    CHECK(cv < 0.5);
}

TEST_CASE("spiral quantization lands near the designed inner/outer counts") {
    const auto ideal = fermat_spiral_ideal(256, 16.0 * kPitch);
    const auto m = quantize_to_grid(ideal, geom(), 11.5 * kPitch);
    CHECK(m.kind == ApertureKind::spiral);
    CHECK(m.n_inner >= 132 - 12);
    CHECK(m.n_inner <= 132 + 12);
    CHECK(m.n_outer >= 124 - 12);
    CHECK(m.n_outer <= 124 + 12);
    for (int id : m.element_ids)
        CHECK(geom().elements[id].radial_distance <= m.r_out * (1 + 1e-9));
}

TEST_CASE("quantization maps exact hits and collapses duplicates") {
    // an ideal point exactly on an element position maps to that element
    const Element& e = geom().elements[16 * 32 + 16];
    const double yd = (e.active_row - 15.5) * kPitch;
    IdealSpiral s;
    s.n_points = 2;
    s.r_max = 16.0 * kPitch;
    s.points = {{e.position.x, yd}, {e.position.x + 0.1 * kPitch, yd}};
    const auto m = quantize_to_grid(s, geom(), 11.5 * kPitch);
    CHECK(m.element_ids.size() == 1);  // both points collapse onto one element
    CHECK(m.element_ids[0] == e.id);
}

TEST_CASE("selection score kernel") {
    CHECK(selection_score(0.0, 0.7) == doctest::Approx(1.0));
    // 2 * 0.7^2 = 0.98, so d = 0.98 gives exactly exp(-1)
    CHECK(selection_score(0.98, 0.7) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    double prev = 2.0;
    for (double d : {0.0, 0.2, 0.5, 1.0, 2.0, 5.0}) {
        const double s = selection_score(d, 0.7);
        CHECK(s < prev);
        CHECK(s > 0.0);
        CHECK(s <= 1.0);
        prev = s;
    }
    CHECK_THROWS_AS(selection_score(-0.1, 0.7), config_error);
    CHECK_THROWS_AS(selection_score(1.0, 0.0), config_error);
}

TEST_CASE("no-reuse selection is conflict-free and balanced") {
    const auto ideal = fermat_spiral_ideal(256, 16.0 * kPitch);
    const auto m = no_reuse_select(ideal, geom(), 0.7, 11.5 * kPitch);
    CHECK(m.kind == ApertureKind::spiral_no_reuse);
    CHECK(channel_conflicts(geom(), m.element_ids).empty());
    CHECK(m.element_ids.size() >= 220);
    CHECK(m.element_ids.size() <= 256);
    CHECK(std::abs(m.n_inner - m.n_outer) <= 16);
    for (int id : m.element_ids)
        CHECK(geom().elements[id].radial_distance <= m.r_out * (1 + 1e-9));
}

TEST_CASE("no-reuse selection of a single ideal point") {
    IdealSpiral s;
    s.n_points = 1;
    s.r_max = 16.0 * kPitch;
    s.points = {{0.3 * kPitch, -0.2 * kPitch}};
    const auto m = no_reuse_select(s, geom(), 0.7, 11.5 * kPitch);
    CHECK(m.element_ids.size() == 1);
    CHECK(channel_conflicts(geom(), m.element_ids).empty());
}

TEST_CASE("nsi windows on the circular aperture") {
    const auto m = circular_mask(geom(), 16.0 * kPitch, 11.5 * kPitch);
    const auto w = nsi_windows(m, 1.0);
    const double sum_zm = std::accumulate(w.w_zm.begin(), w.w_zm.end(), 0.0);
    CHECK(sum_zm == doctest::Approx(-4.0));  // 404 outer - 408 inner
    CHECK(std::abs(sum_zm) == doctest::Approx(std::abs(m.n_outer - m.n_inner)));
    for (std::size_t i = 0; i < w.w_zm.size(); ++i) {
        if (m.is_inner[i]) {
            CHECK(w.w_zm[i] == -1.0);
            CHECK(w.w_dc1[i] == 0.0);
            CHECK(w.w_dc2[i] == 2.0);
        } else {
            CHECK(w.w_zm[i] == 1.0);
            CHECK(w.w_dc1[i] == 2.0);
            CHECK(w.w_dc2[i] == 0.0);
        }
        CHECK(w.w_dc1[i] - w.w_dc2[i] == 2.0 * w.w_zm[i]);
        CHECK(w.w_dc1[i] + w.w_dc2[i] == 2.0 * w.dc);
        CHECK(w.w_rect[i] == 1.0);
    }
}

TEST_CASE("flipping the inner/outer sign convention permutes the window set") {
    const auto m = circular_mask(geom(), 16.0 * kPitch, 11.5 * kPitch);
    const auto w = nsi_windows(m, 1.0);
    ApertureMask flipped = m;
    flipped.is_inner.flip();
    std::swap(flipped.n_inner, flipped.n_outer);
    const auto wf = nsi_windows(flipped, 1.0);
    for (std::size_t i = 0; i < w.w_zm.size(); ++i) {
        CHECK(wf.w_zm[i] == -w.w_zm[i]);
        CHECK(wf.w_dc1[i] == w.w_dc2[i]);
        CHECK(wf.w_dc2[i] == w.w_dc1[i]);
    }
}

TEST_CASE("windows for the three working apertures stay balanced") {
    const auto ideal = fermat_spiral_ideal(256, 16.0 * kPitch);
    const ApertureMask masks[] = {
        circular_mask(geom(), 16.0 * kPitch, 11.5 * kPitch),
        quantize_to_grid(ideal, geom(), 11.5 * kPitch),
        no_reuse_select(ideal, geom(), 0.7, 11.5 * kPitch),
    };
    for (const auto& m : masks) {
        CHECK(std::abs(m.n_inner - m.n_outer) <= 16);
        bool warn = true;
        CHECK_NOTHROW(nsi_windows(m, 1.0, &warn));
        CHECK_FALSE(warn);  // all three are within 5%
    }
}

TEST_CASE("imbalance guard") {
    // inner:outer = 40:9 is far beyond the 10% guard
    ApertureMask m = circular_mask(geom(), 4.0 * kPitch, 3.5 * kPitch);
    CHECK(m.n_inner == 32);
    CHECK(m.n_outer == 20);
    CHECK_THROWS_AS(nsi_windows(m), config_error);
}

TEST_CASE("apodization exports") {
    const auto m = circular_mask(geom(), 16.0 * kPitch, 11.5 * kPitch);
    const auto w = nsi_windows(m, 1.0);
    std::ostringstream csv;
    write_apodization_csv(w, csv);
    const std::string c = csv.str();
    CHECK(c.rfind("element_id,w_zm,w_dc1,w_dc2\n", 0) == 0);
    CHECK(std::count(c.begin(), c.end(), '\n') == 813);

    std::ostringstream pgm;
    write_apodization_pgm(w, geom(), w.w_zm, pgm);
    const std::string s = pgm.str();
    CHECK(s.rfind("P5\n32 35\n255\n", 0) == 0);
    CHECK(s.size() == std::string("P5\n32 35\n255\n").size() + 32 * 35);
}

}  // TEST_SUITE
