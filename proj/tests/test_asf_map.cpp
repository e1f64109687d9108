#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "lorasf/asf_map.hpp"
#include "lorasf/errors.hpp"
#include "test_support.hpp"

using namespace lorasf;

namespace {

const double NA = std::numeric_limits<double>::quiet_NaN();

AsfMap parse(const std::string& text) {
    std::istringstream in(text);
    return load_asf_map(in);
}

AsfMap random_map(std::mt19937_64& rng, double nodata_fraction) {
    std::uniform_int_distribution<std::size_t> n(2, 12);
    std::uniform_real_distribution<double> val(-5.0, 5.0), unit(0.0, 1.0), step(0.01, 0.5);
    std::uniform_real_distribution<double> lat(-60, 50), lon(-170, 160);
    const std::size_t n_lat = n(rng), n_lon = n(rng);
    std::vector<double> v(n_lat * n_lon);
    for (auto& x : v) x = unit(rng) < nodata_fraction ? NA : val(rng);
    return AsfMap("STN" + std::to_string(n_lat), {lat(rng), lon(rng)}, step(rng), step(rng), n_lat, n_lon, v);
}

// Exhaustive nearest non-NODATA node, scanned in row-major order with strict improvement.
double nearest_node_oracle(const AsfMap& m, const GeoPoint& p) {
    double best = std::numeric_limits<double>::infinity();
    double value = NA;
    for (std::size_t i = 0; i < m.n_lat(); ++i)
        for (std::size_t j = 0; j < m.n_lon(); ++j) {
            const double v = m.values()[i * m.n_lon() + j];
            if (std::isnan(v)) continue;
            const GeoPoint q = m.node(i, j);
            const double r = testing::law_of_cosines_range(p.lat, p.lon, q.lat, q.lon);
            if (r < best) {
                best = r;
                value = v;
            }
        }
    return value;
}

}  // namespace

TEST_CASE("load a 2x2 all-zero grid") {
    const auto m = parse("ASFGRID v1 Pohang 36 129 0.1 0.1 2 2\n0 0\n0 0\n");
    CHECK(m.station_id() == "Pohang");
    CHECK(m.n_lat() == 2);
    CHECK(m.n_lon() == 2);
    CHECK(m.values() == std::vector<double>{0, 0, 0, 0});
    CHECK(m.units() == "us");
}

TEST_CASE("loader accepts NA, scientific notation and comments") {
    const auto m = parse("ASFGRID v1 X 1e1 2.0E1 5e-2 0.05 2 3\n# units: us\n\n1.5e0 NA -2\n0 3E-1 4\n");
    CHECK(m.origin().lat == 10.0);
    CHECK(m.origin().lon == 20.0);
    CHECK(m.is_nodata(0, 1));
    CHECK(*m.value(1, 1) == 0.3);
    CHECK(*m.value(0, 0) == 1.5);
}

TEST_CASE("loader rejects malformed input") {
    CHECK_THROWS_AS(parse("ASFGRID v1 X 0 0 0.1 0.1 2 2\n0 0\n0 0\n0 0\n"), FormatError);
    CHECK_THROWS_AS(parse("ASFGRID v1 X 0 0 0.1 0.1 2 2\n0 0\n"), FormatError);
    CHECK_THROWS_AS(parse("ASFGRID v1 X 0 0 0.1 0.1 2 2\n0 0 0\n0 0\n"), FormatError);
    CHECK_THROWS_AS(parse("ASFGRID v2 X 0 0 0.1 0.1 2 2\n0 0\n0 0\n"), FormatError);
    CHECK_THROWS_AS(parse("ASFGRID v1 X 0 0 0.1 0.1 2\n0 0\n0 0\n"), FormatError);
    CHECK_THROWS_AS(parse("ASFGRID v1 X 0 0 0.1 0.1 2 2\n0 0,5\n0 0\n"), FormatError);
    CHECK_THROWS_AS(parse(""), FormatError);
}

TEST_CASE("loader rejects bad values") {
    CHECK_THROWS_AS(parse("ASFGRID v1 X 0 0 0.1 0.1 2 2\n0 inf\n0 0\n"), ValueError);
    CHECK_THROWS_AS(parse("ASFGRID v1 X 0 0 0.1 0.1 2 2\n0 nan\n0 0\n"), ValueError);
    CHECK_THROWS_AS(parse("ASFGRID v1 X 0 0 0.1 0.1 2 2\n0 100.5\n0 0\n"), ValueError);
    CHECK_THROWS_AS(parse("ASFGRID v1 X 0 0 -0.1 0.1 2 2\n0 0\n0 0\n"), ValueError);
    CHECK_THROWS_AS(parse("ASFGRID v1 X 0 0 0.1 0.1 1 2\n0 0\n"), ValueError);
    // Meter rasters (exported ACC grids) are not bound by the ASF sanity limit.
    CHECK_NOTHROW(parse("ASFGRID v1 ACC_S0 0 0 0.1 0.1 1 2\n# units: m\n1154 NA\n"));
}

TEST_CASE("write(load(f)) is canonical and load(write(g)) == g") {
    std::mt19937_64 rng(21);
    for (int k = 0; k < 100; ++k) {
        const AsfMap g = random_map(rng, 0.2);
        const std::string text = to_string(g);
        const AsfMap back = parse(text);
        CHECK(back == g);
        CHECK(to_string(back) == text);
    }
    const std::string loose = "ASFGRID   v1 S 37.0 126.50 0.10 1e-1 2 2\n  1.50   NA\n\n2e0 -0.0\n";
    const std::string canonical = to_string(parse(loose));
    CHECK(canonical == "ASFGRID v1 S 37 126.5 0.1 0.1 2 2\n# units: us\n1.5 NA\n2 -0\n");
    CHECK(to_string(parse(canonical)) == canonical);
}

TEST_CASE("interpolation examples") {
    const AsfMap m("S", {37.0, 126.0}, 0.1, 0.2, 2, 2, {0.0, 1.0, 1.0, 2.0});
    SUBCASE("node exactness") {
        const AsfMap n("S", {37.0, 126.0}, 0.1, 0.1, 2, 2, {2.5, 0, 0, 0});
        const auto s = interpolate_asf(n, {37.0, 126.0});
        CHECK(s.valid);
        CHECK(s.value == 2.5);
    }
    SUBCASE("cell centre") {
        const auto s = interpolate_asf(m, {37.05, 126.1});
        CHECK(s.valid);
        CHECK(std::abs(s.value - 1.0) < 1e-12);
    }
    SUBCASE("outside bounds") {
        CHECK_FALSE(interpolate_asf(m, {36.9, 126.1}).valid);
        CHECK_FALSE(interpolate_asf(m, {37.05, 126.3}).valid);
        CHECK_FALSE(interpolate_asf(m, {37.2, 126.1}).valid);
    }
}

TEST_CASE("NODATA corners invalidate samples that use them") {
    const AsfMap m("S", {0.0, 0.0}, 1.0, 1.0, 2, 3, {0.0, 1.0, NA, 1.0, 2.0, 3.0});
    CHECK(interpolate_asf(m, {0.5, 0.5}).valid);
    CHECK_FALSE(interpolate_asf(m, {0.5, 1.5}).valid);
    CHECK_FALSE(interpolate_asf(m, {0.0, 2.0}).valid);
    // A sample on the shared edge only touches the two nodes on that edge.
    CHECK(interpolate_asf(m, {0.5, 1.0}).valid);
    CHECK(interpolate_asf(m, {0.5, 1.0}).value == 1.5);
}

TEST_CASE("interpolation properties on random maps") {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        const AsfMap m = random_map(rng, 0.0);
        for (std::size_t i = 0; i < m.n_lat(); ++i)
            for (std::size_t j = 0; j < m.n_lon(); ++j) {
                const auto s = interpolate_asf(m, m.node(i, j));
                REQUIRE(s.valid);
                CHECK(s.value == *m.value(i, j));
            }

        std::uniform_int_distribution<std::size_t> ci(0, m.n_lat() - 2), cj(0, m.n_lon() - 2);
        const std::size_t i = ci(rng), j = cj(rng);
        const double corners[4] = {*m.value(i, j), *m.value(i, j + 1), *m.value(i + 1, j), *m.value(i + 1, j + 1)};
        const double lo = *std::min_element(corners, corners + 4);
        const double hi = *std::max_element(corners, corners + 4);
        const GeoPoint base = m.node(i, j);
        const double cell = std::min(m.d_lat(), m.d_lon());
        const double lipschitz = (hi - lo) / cell;
        for (int t = 0; t < 20; ++t) {
            const GeoPoint p{base.lat + unit(rng) * m.d_lat(), base.lon + unit(rng) * m.d_lon()};
            const auto sp = interpolate_asf(m, p);
            REQUIRE(sp.valid);
            CHECK(sp.value >= lo - 1e-12);
            CHECK(sp.value <= hi + 1e-12);

            const double delta = 0.01 * cell;
            GeoPoint q{p.lat + (unit(rng) - 0.5) * delta, p.lon + (unit(rng) - 0.5) * delta};
            q.lat = std::clamp(q.lat, base.lat, base.lat + m.d_lat());
            q.lon = std::clamp(q.lon, base.lon, base.lon + m.d_lon());
            const double dist = std::hypot(q.lat - p.lat, q.lon - p.lon);
            const auto sq = interpolate_asf(m, q);
            REQUIRE(sq.valid);
            // Bilinear slope is bounded by the corner spread over the cell size along each axis.
            CHECK(std::abs(sq.value - sp.value) <= 2.0 * lipschitz * dist + 1e-12);
        }
    }
}

TEST_CASE("reference value examples") {
    SUBCASE("coincident node") {
        const AsfMap m("S", {37.0, 126.0}, 0.5, 0.5, 2, 2, {0.1, 0.2, -0.8, 0.3});
        CHECK(reference_asf(m, {37.5, 126.0}) == -0.8);
    }
    SUBCASE("tie goes to the lower latitude index") {
        const AsfMap m("S", {0.0, 10.0}, 0.5, 0.5, 2, 2, {1.0, 2.0, 3.0, 4.0});
        CHECK(reference_asf(m, {0.25, 10.0}) == 1.0);
        CHECK(reference_asf(m, {0.25, 10.5}) == 2.0);
    }
    SUBCASE("NODATA nearest node falls back to nearest valid node") {
        const AsfMap m("S", {37.0, 126.0}, 0.1, 0.1, 3, 3, {9, 9, 9, 9, NA, 5, 9, 9, 9});
        CHECK(reference_asf(m, {37.1, 126.1}) == nearest_node_oracle(m, {37.1, 126.1}));
        CHECK(reference_asf(m, {37.1, 126.14}) == 5.0);
    }
    SUBCASE("all NODATA") {
        const AsfMap m("S", {37.0, 126.0}, 0.1, 0.1, 2, 2, {NA, NA, NA, NA});
        CHECK_THROWS_AS(reference_asf(m, {37.0, 126.0}), NoDataError);
    }
}

TEST_CASE("reference value matches exhaustive nearest-node search") {
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<std::size_t> n(2, 50);
    std::uniform_real_distribution<double> unit(0.0, 1.0), val(-3, 3);
    for (int k = 0; k < 60; ++k) {
        const std::size_t n_lat = n(rng), n_lon = n(rng);
        std::vector<double> v(n_lat * n_lon);
        for (auto& x : v) x = unit(rng) < 0.3 ? NA : val(rng);
        v[0] = 0.5;
        const AsfMap m("S", {30.0 + 5 * unit(rng), 120.0 + 5 * unit(rng)}, 0.05, 0.07, n_lat, n_lon, v);
        for (int t = 0; t < 10; ++t) {
            const GeoPoint p{m.origin().lat + (unit(rng) * 1.2 - 0.1) * n_lat * 0.05,
                             m.origin().lon + (unit(rng) * 1.2 - 0.1) * n_lon * 0.07};
            CHECK(reference_asf(m, p) == nearest_node_oracle(m, p));
        }
    }
}
