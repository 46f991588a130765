#include <doctest.h>

#include <cmath>
#include <map>

#include "nsi3d/sequence.hpp"

using namespace nsi3d;

namespace {
const ArrayGeometry& geom() {
    static const ArrayGeometry g = build_matrix_array(300e-6, {9, 17, 25});
    return g;
}
constexpr double kPitch = 300e-6;

ApertureMask circular() { return circular_mask(geom(), 16.0 * kPitch, 11.5 * kPitch); }
ApertureMask no_reuse() {
    return no_reuse_select(fermat_spiral_ideal(256, 16.0 * kPitch), geom(), 0.7, 11.5 * kPitch);
}
}

TEST_SUITE("sequence") {

TEST_CASE("nine virtual sources on a 3x3 tilt grid") {
    const auto vs = virtual_sources(17.4e-3, 5.0);
    REQUIRE(vs.size() == 9);
    CHECK(vs[0].azimuth_tilt_deg == 0.0);
    CHECK(vs[0].elevation_tilt_deg == 0.0);
    CHECK(vs[0].position.x == doctest::Approx(0.0));
    CHECK(vs[0].position.y == doctest::Approx(0.0));
    CHECK(vs[0].position.z == doctest::Approx(-17.4e-3));
    for (const auto& v : vs) {
        CHECK(v.position.norm() == doctest::Approx(17.4e-3).epsilon(1e-12));
        CHECK(v.position.z < 0.0);
    }
}

TEST_CASE("azimuth tilt moves the source opposite the steering direction") {
    // oracle: direct trigonometry, x = -standoff * sin(5 deg), z = -standoff * cos(5 deg)
    const auto vs = virtual_sources(17.4e-3, 5.0);
    const double s = 17.4e-3, a = 5.0 * M_PI / 180.0;
    bool found = false;
    for (const auto& v : vs) {
        if (v.azimuth_tilt_deg == 5.0 && v.elevation_tilt_deg == 0.0) {
            found = true;
            CHECK(v.position.x == doctest::Approx(-s * std::sin(a)).epsilon(1e-12));
            CHECK(v.position.x == doctest::Approx(-1.5166e-3).epsilon(1e-4));
            CHECK(v.position.y == doctest::Approx(0.0));
            CHECK(v.position.z == doctest::Approx(-s * std::cos(a)).epsilon(1e-12));
        }
    }
    CHECK(found);
}

TEST_CASE("zero tilt collapses the grid onto one point") {
    const auto vs = virtual_sources(17.4e-3, 0.0);
    for (const auto& v : vs) {
        CHECK(v.position.x == doctest::Approx(vs[0].position.x));
        CHECK(v.position.y == doctest::Approx(vs[0].position.y));
        CHECK(v.position.z == doctest::Approx(vs[0].position.z));
    }
    CHECK_THROWS_AS(virtual_sources(0.0, 5.0), config_error);
}

TEST_CASE("multiplexed plan: 16 events per angle, 144 per volume") {
    const auto plan = build_plan(circular(), geom(), virtual_sources(17.4e-3, 5.0));
    CHECK(plan.events_per_angle == 16);
    CHECK(plan.events.size() == 144);
    CHECK(plan.angles == 9);
    for (const auto& ev : plan.events) {
        CHECK(channel_conflicts(geom(), ev.rx_elements).empty());
        CHECK(channel_conflicts(geom(), ev.tx_elements).empty());
    }
}

TEST_CASE("conflict-free plan: one event per angle") {
    const auto plan = build_plan(no_reuse(), geom(), virtual_sources(17.4e-3, 5.0));
    CHECK(plan.events_per_angle == 1);
    CHECK(plan.events.size() == 9);
    for (const auto& ev : plan.events) {
        CHECK(ev.tx_bank == -1);
        CHECK(channel_conflicts(geom(), ev.rx_elements).empty());
    }
}

TEST_CASE("a mask confined to one bank runs one event per angle") {
    ApertureMask m;
    m.kind = ApertureKind::circular;
    for (const auto& e : geom().elements)
        if (e.bank == 2 && e.radial_distance < 10 * kPitch) {
            m.element_ids.push_back(e.id);
            m.is_inner.push_back(false);
        }
    REQUIRE(!m.element_ids.empty());
    const auto plan = build_plan(m, geom(), virtual_sources(17.4e-3, 5.0));
    CHECK(plan.events_per_angle == 1);
    CHECK(plan.events.size() == 9);
}

TEST_CASE("single-event operation of a conflicted mask is rejected") {
    ApertureMask m;
    m.kind = ApertureKind::spiral_no_reuse;
    // two elements sharing channel 0: (col 0, row 0) and (col 0, row 8)
    m.element_ids = {0, 8 * 32};
    m.is_inner = {true, false};
    CHECK(geom().elements[0].channel == geom().elements[8 * 32].channel);
    CHECK_THROWS_AS(build_plan(m, geom(), virtual_sources(17.4e-3, 5.0)), config_error);
}

TEST_CASE("per-angle receive events cover every mask element exactly four times") {
    const auto mask = circular();
    const auto plan = build_plan(mask, geom(), virtual_sources(17.4e-3, 5.0));
    std::map<int, int> cover;
    for (const auto& ev : plan.events) {
        if (ev.angle_index != 0) continue;
        for (int id : ev.rx_elements) cover[id]++;
    }
    CHECK(cover.size() == mask.element_ids.size());
    for (const auto& [id, n] : cover) CHECK(n == 4);
}

TEST_CASE("volume rates reproduce the acquisition accounting") {
    auto plan_c = build_plan(circular(), geom(), virtual_sources(17.4e-3, 5.0));
    auto plan_n = build_plan(no_reuse(), geom(), virtual_sources(17.4e-3, 5.0));
    const double rate_c = volume_rate(plan_c, 70e-3, 1540.0);
    const double rate_n = volume_rate(plan_n, 70e-3, 1540.0);

    // oracle: 1 / (N * 2 d / c)
    CHECK(rate_c == doctest::Approx(1.0 / (144.0 * 2.0 * 70e-3 / 1540.0)).epsilon(1e-12));
    CHECK(rate_n == doctest::Approx(1.0 / (9.0 * 2.0 * 70e-3 / 1540.0)).epsilon(1e-12));
    CHECK(std::abs(rate_c - 76.0) <= 1.0);
    CHECK(std::abs(rate_n - 1222.0) <= 5.0);
    CHECK(plan_c.events.size() / plan_n.events.size() == 16);
    CHECK(rate_n / rate_c == doctest::Approx(16.0).epsilon(1e-12));
}

TEST_CASE("unit round-trip rate") {
    ApertureMask m;
    m.kind = ApertureKind::spiral_no_reuse;
    m.element_ids = {0};
    m.is_inner = {true};
    auto vs = virtual_sources(17.4e-3, 5.0);
    vs.resize(1);
    auto plan = build_plan(m, geom(), vs);
    REQUIRE(plan.events.size() == 1);
    CHECK(volume_rate(plan, 1540.0 / 2.0, 1540.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("rf size estimate follows the per-event receive counts") {
    auto plan = build_plan(circular(), geom(), virtual_sources(17.4e-3, 5.0));
    const double fs = 12e6;
    volume_rate(plan, 70e-3, 1540.0, fs, 2);
    double expect = 0;
    const double n_samples = std::ceil(2.0 * 70e-3 / 1540.0 * fs);
    for (const auto& ev : plan.events) expect += ev.rx_elements.size() * n_samples * 2.0;
    CHECK(plan.rf_bytes_per_volume == doctest::Approx(expect));
    // the multiplexed working apertures record roughly the published volumes
    CHECK(plan.rf_bytes_per_volume / 1e6 > 71.0 * 0.75);
    CHECK(plan.rf_bytes_per_volume / 1e6 < 71.0 * 1.25);
}

TEST_CASE("errors") {
    auto plan = build_plan(circular(), geom(), virtual_sources(17.4e-3, 5.0));
    CHECK_THROWS_AS(volume_rate(plan, 0.0, 1540.0), config_error);
    CHECK_THROWS_AS(volume_rate(plan, 70e-3, 0.0), config_error);
    CHECK_THROWS_AS(build_plan(ApertureMask{}, geom(), virtual_sources(17.4e-3, 5.0)),
                    config_error);
}

}  // TEST_SUITE
