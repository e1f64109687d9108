#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "lorasf/geo.hpp"

namespace lorasf {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

// Normal matrices with a 2-norm condition number above this are treated as singular.
inline constexpr double kMaxConditionNumber = 1e8;

using Mat3 = std::array<std::array<double, 3>, 3>;
using Vec3 = std::array<double, 3>;

// d_i = c * r_i, with residuals in microseconds and biases in meters.
std::vector<double> range_bias(std::span<const double> residuals_us);

// M = G^T W G for diagonal W. Throws SingularGeometry when M is not safely invertible.
Mat3 normal_matrix(const GeometryMatrix& g, std::span<const double> weights);

// lambda_max / lambda_min of a symmetric matrix; infinity unless positive definite.
double condition_number(const Mat3& m);

// Closed-form adjugate inverse of a symmetric normal matrix. Throws SingularGeometry when
// the condition number exceeds kMaxConditionNumber or the determinant vanishes.
Mat3 invert_checked(const Mat3& m);

// sqrt((M^-1)_11 + (M^-1)_22), the horizontal random error.
double sigma_pos(const Mat3& m);

struct BiasSolution {
    double dx = 0.0;  // east, m
    double dy = 0.0;  // north, m
    double db = 0.0;  // receiver clock, m
    double pos_bias = 0.0;
};

// [dx dy db]^T = M^-1 G^T W d.
BiasSolution bias_solution(const Mat3& m, const GeometryMatrix& g, std::span<const double> weights,
                           std::span<const double> d);

inline double acc(double sigma_pos_m, double pos_bias_m) {
    return std::hypot(sigma_pos_m, pos_bias_m);
}

enum class FixStatus { Ok, NoFix };

struct AccResult {
    double sigma_pos = 0.0;
    double pos_bias = 0.0;
    double acc = 0.0;
    double dx = 0.0;
    double dy = 0.0;
    double clock_bias = 0.0;
    FixStatus status = FixStatus::NoFix;
    std::string reason;  // NoFix cause

    bool ok() const noexcept { return status == FixStatus::Ok; }

    static AccResult no_fix(std::string why) {
        AccResult r;
        r.reason = std::move(why);
        return r;
    }
};

// Full chain from ASF residuals to ACC. Singular geometry and fewer than three rows
// come back as NoFix rather than throwing.
AccResult solve_acc(const GeometryMatrix& g, std::span<const double> weights,
                    std::span<const double> residuals_us);

}  // namespace lorasf
