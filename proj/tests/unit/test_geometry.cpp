#include <doctest.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <set>
#include <sstream>

#include "nsi3d/geometry.hpp"

using namespace nsi3d;

namespace {
ArrayGeometry default_geom() { return build_matrix_array(300e-6, {9, 17, 25}); }
}

TEST_SUITE("geometry") {

TEST_CASE("default probe has 1024 elements spanning 34 pitches in elevation") {
    const auto g = default_geom();
    CHECK(g.n_elements() == 1024);
    CHECK(g.n_active_rows() == 32);
    CHECK(g.n_banks() == 4);
    double y_min = 1e9, y_max = -1e9;
    for (const auto& e : g.elements) {
        y_min = std::min(y_min, e.position.y);
        y_max = std::max(y_max, e.position.y);
    }
    CHECK((y_max - y_min) / g.pitch == doctest::Approx(34.0).epsilon(1e-12));
}

TEST_CASE("element ordering is row-major with column fastest") {
    const auto g = default_geom();
    for (int i = 0; i < g.n_elements(); ++i) {
        CHECK(g.elements[i].id == i);
        CHECK(g.elements[i].col == i % 32);
        CHECK(g.elements[i].active_row == i / 32);
    }
}

TEST_CASE("blank rows open one-pitch gaps in physical y") {
    const auto g = default_geom();
    // active rows 7 and 8 straddle the first blank physical row (1-based 9)
    const double y7 = g.elements[7 * 32].position.y;
    const double y8 = g.elements[8 * 32].position.y;
    CHECK((y8 - y7) / g.pitch == doctest::Approx(2.0));
    // away from blanks the spacing is one pitch
    const double y0 = g.elements[0].position.y;
    const double y1 = g.elements[32].position.y;
    CHECK((y1 - y0) / g.pitch == doctest::Approx(1.0));
}

TEST_CASE("no-blank 32-row grid is uniform") {
    const auto g = build_matrix_array(300e-6, {}, 32);
    CHECK(g.n_elements() == 1024);
    for (int ar = 1; ar < 32; ++ar) {
        const double dy = g.elements[ar * 32].position.y - g.elements[(ar - 1) * 32].position.y;
        CHECK(dy == doctest::Approx(g.pitch).epsilon(1e-12));
    }
    // with no gaps the design radius and the physical radius coincide
    for (const auto& e : g.elements)
        CHECK(e.radial_distance ==
              doctest::Approx(std::hypot(e.position.x, e.position.y)).epsilon(1e-12));
}

TEST_CASE("opposite corner elements are point-symmetric about the origin") {
    // oracle: direct position arithmetic from the grid definition. Columns run
    // 0..31 around the x midline; active rows 0 and 31 sit on physical rows 1
    // and 35, one grid half-span either side of the y midline.
    const auto g = default_geom();
    const Element& a = g.elements[0];           // col 0, active row 0
    const Element& b = g.elements[31 * 32 + 31];  // col 31, active row 31
    CHECK(a.position.x == doctest::Approx(-15.5 * g.pitch).epsilon(1e-12));
    CHECK(a.position.y == doctest::Approx(-17.0 * g.pitch).epsilon(1e-12));
    CHECK(a.position.x == doctest::Approx(-b.position.x).epsilon(1e-12));
    CHECK(a.position.y == doctest::Approx(-b.position.y).epsilon(1e-12));
}

TEST_CASE("elevation half-extent exceeds azimuth half-extent by 1.5 pitches") {
    const auto g = default_geom();
    double x_max = 0, y_max = 0;
    for (const auto& e : g.elements) {
        x_max = std::max(x_max, std::abs(e.position.x));
        y_max = std::max(y_max, std::abs(e.position.y));
    }
    CHECK((y_max - x_max) / g.pitch == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("bank and channel follow the multiplexer wiring") {
    const auto g = default_geom();
    std::map<int, std::vector<const Element*>> by_channel;
    for (const auto& e : g.elements) {
        CHECK(e.bank == e.active_row / 8);
        CHECK(e.channel == e.col * 8 + e.active_row % 8);
        by_channel[e.channel].push_back(&e);
    }
    CHECK(by_channel.size() == 256);
    for (const auto& [ch, elems] : by_channel) {
        REQUIRE(elems.size() == 4);  // one element per bank
        std::set<int> banks;
        for (const auto* e : elems) {
            banks.insert(e->bank);
            CHECK(e->col == elems[0]->col);
            CHECK(e->active_row % 8 == elems[0]->active_row % 8);
        }
        CHECK(banks.size() == 4);
    }
}

TEST_CASE("bank element counts sum to the full array") {
    const auto g = default_geom();
    std::vector<int> counts(g.n_banks(), 0);
    for (const auto& e : g.elements) counts[e.bank]++;
    int total = 0;
    for (int c : counts) {
        CHECK(c == 256);
        total += c;
    }
    CHECK(total == 1024);
}

TEST_CASE("channel_conflicts on the full array reports 256 four-way conflicts") {
    const auto g = default_geom();
    std::vector<int> all(g.n_elements());
    for (int i = 0; i < g.n_elements(); ++i) all[i] = i;
    const auto conflicts = channel_conflicts(g, all);
    CHECK(conflicts.size() == 256);
    for (const auto& [ch, ids] : conflicts) CHECK(ids.size() == 4);
}

TEST_CASE("a single bank is conflict-free") {
    const auto g = default_geom();
    std::vector<int> bank0;
    for (const auto& e : g.elements)
        if (e.bank == 0) bank0.push_back(e.id);
    CHECK(bank0.size() == 256);
    CHECK(channel_conflicts(g, bank0).empty());
}

TEST_CASE("invalid blank rows are rejected by name") {
    CHECK_THROWS_WITH_AS(build_matrix_array(300e-6, {0}),
                         doctest::Contains("blank row 0"), config_error);
    CHECK_THROWS_WITH_AS(build_matrix_array(300e-6, {36}),
                         doctest::Contains("blank row 36"), config_error);
    CHECK_THROWS_AS(build_matrix_array(300e-6, {9, 9}), config_error);
    // 35 rows minus two blanks = 33, not divisible by the bank height
    CHECK_THROWS_AS(build_matrix_array(300e-6, {9, 17}), config_error);
    CHECK_THROWS_AS(channel_conflicts(default_geom(), std::vector<int>{-1}), config_error);
}

TEST_CASE("construction is deterministic down to the bit pattern") {
    const auto a = default_geom();
    const auto b = default_geom();
    REQUIRE(a.n_elements() == b.n_elements());
    for (int i = 0; i < a.n_elements(); ++i) {
        CHECK(std::memcmp(&a.elements[i].position, &b.elements[i].position, sizeof(Vec3)) == 0);
        CHECK(a.elements[i].radial_distance == b.elements[i].radial_distance);
    }
}

TEST_CASE("geometry csv export") {
    const auto g = default_geom();
    std::ostringstream os;
    write_geometry_csv(g, os);
    const std::string s = os.str();
    CHECK(s.rfind("element_id,col,active_row,x_m,y_m,bank,channel\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 1025);
}

}  // TEST_SUITE
