#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "lorasf/errors.hpp"
#include "lorasf/wls.hpp"
#include "test_support.hpp"

using namespace lorasf;

namespace {

const std::vector<double> kSymmetric{0.0, 2 * kPi / 3, 4 * kPi / 3};

}  // namespace

TEST_CASE("range bias multiplies by c") {
    CHECK(range_bias(std::vector<double>{0, 0, 0}) == std::vector<double>{0, 0, 0});
    CHECK(range_bias(std::vector<double>{1, 0, 0})[0] == doctest::Approx(299.792458).epsilon(1e-15));
    const auto d = range_bias(std::vector<double>{-0.5, 0.2, 1.0});
    CHECK(std::abs(d[0] - -149.896229) < 1e-9);
    CHECK(std::abs(d[1] - 59.9584916) < 1e-9);
    CHECK(std::abs(d[2] - 299.792458) < 1e-9);
}

TEST_CASE("normal matrix for symmetric bearings") {
    const auto g = geometry_from_bearings(kSymmetric);
    const std::vector<double> w{1, 1, 1};
    const Mat3 m = normal_matrix(g, w);
    const double expected[3][3] = {{1.5, 0, 0}, {0, 1.5, 0}, {0, 0, 3}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(std::abs(m[i][j] - expected[i][j]) < 1e-9);

    const std::vector<double> w4{4, 4, 4};
    const Mat3 m4 = normal_matrix(g, w4);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(m4[i][j] == 4 * m[i][j]);
}

TEST_CASE("degenerate geometry is singular") {
    const auto g = geometry_from_bearings(std::vector<double>{1.0, 1.0, 1.0});
    CHECK_THROWS_AS(normal_matrix(g, std::vector<double>{1, 2, 3}), SingularGeometry);
    const auto g2 = geometry_from_bearings(std::vector<double>{0.3, 0.3 + kPi, 0.3});
    CHECK_THROWS_AS(normal_matrix(g2, std::vector<double>{1, 1, 1}), SingularGeometry);
}

TEST_CASE("normal matrix shape errors") {
    const auto g = geometry_from_bearings(kSymmetric);
    CHECK_THROWS_AS(normal_matrix(g, std::vector<double>{1, 1}), ValueError);
    CHECK_THROWS_AS(normal_matrix(g, std::vector<double>{1, 0, 1}), ValueError);
    const auto g2 = geometry_from_bearings(std::vector<double>{0.0, 1.0});
    CHECK_THROWS_AS(normal_matrix(g2, std::vector<double>{1, 1}), InsufficientStations);
}

TEST_CASE("normal matrix is symmetric") {
    std::mt19937_64 rng(41);
    for (int k = 0; k < 200; ++k) {
        const auto inst = testing::random_wls_instance(rng);
        const Mat3 m = normal_matrix(geometry_from_bearings(inst.bearings), inst.weights);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) CHECK(std::abs(m[i][j] - m[j][i]) <= 1e-12);
    }
}

TEST_CASE("sigma_pos examples") {
    const Mat3 diag{{{1.5, 0, 0}, {0, 1.5, 0}, {0, 0, 3}}};
    CHECK(std::abs(sigma_pos(diag) - 1.154700) < 1e-6);
    const Mat3 eye{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    CHECK(sigma_pos(eye) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

    std::mt19937_64 rng(42);
    for (int k = 0; k < 100; ++k) {
        const auto inst = testing::random_wls_instance(rng);
        const auto g = geometry_from_bearings(inst.bearings);
        std::vector<double> w4;
        for (double w : inst.weights) w4.push_back(4 * w);
        CHECK(sigma_pos(normal_matrix(g, w4)) == sigma_pos(normal_matrix(g, inst.weights)) / 2);
    }
}

TEST_CASE("bias solution trivial cases") {
    const auto g = geometry_from_bearings(kSymmetric);
    const std::vector<double> w{0.3, 0.5, 0.9};
    const Mat3 m = normal_matrix(g, w);

    const auto zero = bias_solution(m, g, w, std::vector<double>{0, 0, 0});
    CHECK(zero.dx == 0.0);
    CHECK(zero.dy == 0.0);
    CHECK(zero.db == 0.0);
    CHECK(zero.pos_bias == 0.0);

    const double ck = kSpeedOfLight * 1.7e-6;
    const auto common = bias_solution(m, g, w, std::vector<double>{ck, ck, ck});
    CHECK(std::abs(common.dx) < 1e-9);
    CHECK(std::abs(common.dy) < 1e-9);
    CHECK(std::abs(common.db - ck) < 1e-9);
    CHECK(common.pos_bias < 1e-9);
}

TEST_CASE("bias solution matches brute-force weighted least squares") {
    std::mt19937_64 rng(43);
    for (int k = 0; k < 100; ++k) {
        const auto inst = testing::random_wls_instance(rng);
        const auto g = geometry_from_bearings(inst.bearings);
        const Mat3 m = normal_matrix(g, inst.weights);
        const auto sol = bias_solution(m, g, inst.weights, inst.d);
        const auto oracle = testing::brute_force_wls(inst);
        CHECK(std::abs(sol.dx - oracle[0]) <= 1e-3);
        CHECK(std::abs(sol.dy - oracle[1]) <= 1e-3);
        CHECK(std::abs(sol.db - oracle[2]) <= 1e-3);
        CHECK(sol.pos_bias >= 0.0);
    }
}

TEST_CASE("three stations give an exact fit") {
    std::mt19937_64 rng(44);
    for (int k = 0; k < 200; ++k) {
        const auto inst = testing::random_wls_instance(rng, 3, 3);
        const auto g = geometry_from_bearings(inst.bearings);
        const auto sol = bias_solution(normal_matrix(g, inst.weights), g, inst.weights, inst.d);
        for (std::size_t i = 0; i < 3; ++i) {
            const double pred = g.rows[i][0] * sol.dx + g.rows[i][1] * sol.dy + sol.db;
            CHECK(std::abs(pred - inst.d[i]) <= 1e-6);
        }
    }
}

TEST_CASE("acc combines random and bias terms") {
    CHECK(acc(3, 4) == 5.0);
    CHECK(acc(2.5, 0) == 2.5);
    CHECK(std::abs(acc(1.1547, 299.79) - 299.7922) < 1e-3);
}

TEST_CASE("solve_acc reports NoFix instead of throwing") {
    const auto g = geometry_from_bearings(std::vector<double>{1.0, 1.0, 1.0});
    const auto r = solve_acc(g, std::vector<double>{1, 1, 1}, std::vector<double>{0.1, 0.2, 0.3});
    CHECK_FALSE(r.ok());
    CHECK(r.reason == "singular geometry");

    const auto g2 = geometry_from_bearings(std::vector<double>{0.0, 1.0});
    CHECK(solve_acc(g2, std::vector<double>{1, 1}, std::vector<double>{0, 0}).reason == "insufficient stations");
}

TEST_CASE("solve_acc invariants on random instances") {
    std::mt19937_64 rng(45);
    std::uniform_real_distribution<double> shift(-3.0, 3.0), scale(0.01, 100.0);
    for (int k = 0; k < 500; ++k) {
        const auto inst = testing::random_wls_instance(rng);
        const auto g = geometry_from_bearings(inst.bearings);
        std::vector<double> r_us;
        for (double d : inst.d) r_us.push_back(d / kSpeedOfLight * 1e6);
        const auto base = solve_acc(g, inst.weights, r_us);
        REQUIRE(base.ok());
        CHECK(std::abs(base.acc * base.acc - (base.sigma_pos * base.sigma_pos + base.pos_bias * base.pos_bias)) <=
              1e-9 * base.acc * base.acc);
        CHECK(base.acc >= std::max(base.sigma_pos, base.pos_bias));

        const double k_us = shift(rng);
        std::vector<double> shifted = r_us;
        for (auto& v : shifted) v += k_us;
        const auto sh = solve_acc(g, inst.weights, shifted);
        CHECK(std::abs(sh.dx - base.dx) <= 1e-9);
        CHECK(std::abs(sh.dy - base.dy) <= 1e-9);
        CHECK(std::abs(sh.pos_bias - base.pos_bias) <= 1e-9);
        CHECK(std::abs(sh.clock_bias - (base.clock_bias + kSpeedOfLight * k_us * 1e-6)) <= 1e-9);
        CHECK(sh.sigma_pos == base.sigma_pos);

        const double s = scale(rng);
        std::vector<double> ws;
        for (double w : inst.weights) ws.push_back(s * w);
        const auto sc = solve_acc(g, ws, r_us);
        CHECK(std::abs(sc.dx - base.dx) <= 1e-9);
        CHECK(std::abs(sc.dy - base.dy) <= 1e-9);
        CHECK(std::abs(sc.clock_bias - base.clock_bias) <= 1e-9);
        CHECK(std::abs(sc.sigma_pos * std::sqrt(s) - base.sigma_pos) <= 1e-12 * base.sigma_pos);
    }
}

TEST_CASE("condition number of the normal matrix") {
    const Mat3 diag{{{1.5, 0, 0}, {0, 1.5, 0}, {0, 0, 3}}};
    CHECK(condition_number(diag) == doctest::Approx(2.0).epsilon(1e-14));

    // Rank-1 matrices whose adjugate cancels to a finite "inverse" must still be rejected.
    for (double b : {0.3, 1.0, 2.5, 4.0}) {
        const auto g = geometry_from_bearings(std::vector<double>{b, b, b});
        Mat3 m{};
        for (const auto& r : g.rows)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) m[i][j] += r[i] * r[j];
        CHECK(condition_number(m) > kMaxConditionNumber);
        CHECK_THROWS_AS(invert_checked(m), SingularGeometry);
    }

    // Well-spread geometries invert cleanly.
    std::mt19937_64 rng(46);
    for (int k = 0; k < 200; ++k) {
        const auto inst = testing::random_wls_instance(rng);
        const Mat3 m = normal_matrix(geometry_from_bearings(inst.bearings), inst.weights);
        const Mat3 inv = invert_checked(m);
        // M M^-1 = I
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const double e = m[i][0] * inv[0][j] + m[i][1] * inv[1][j] + m[i][2] * inv[2][j];
                CHECK(std::abs(e - (i == j ? 1.0 : 0.0)) < 1e-10);
            }
        CHECK(condition_number(m) >= 1.0);
        CHECK(condition_number(m) < 1e4);
    }
}
