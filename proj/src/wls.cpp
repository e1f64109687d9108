#include "lorasf/wls.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lorasf/errors.hpp"

namespace lorasf {
namespace {

// Eigenvalues of a symmetric 3x3 matrix by cyclic Jacobi rotations. Small eigenvalues
// keep an absolute accuracy of about eps * |M|, which the closed-form trigonometric
// solution does not.
Vec3 symmetric_eigenvalues(Mat3 a) {
    for (int sweep = 0; sweep < 50; ++sweep) {
        const double off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
        if (off == 0.0) {
            break;
        }
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (a[p][q] == 0.0) {
                    continue;
                }
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < 3; ++k) {
                    const double akp = a[k][p];
                    const double akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    const double apk = a[p][k];
                    const double aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    return {a[0][0], a[1][1], a[2][2]};
}

void check_shapes(const GeometryMatrix& g, std::span<const double> weights) {
    if (g.size() != weights.size()) {
        throw ValueError("weight count does not match geometry rows");
    }
    if (g.size() < 3) {
        throw InsufficientStations("normal matrix needs at least 3 rows");
    }
    for (double w : weights) {
        if (!(std::isfinite(w) && w > 0.0)) {
            throw ValueError("weights must be positive and finite");
        }
    }
}

}  // namespace

std::vector<double> range_bias(std::span<const double> residuals_us) {
    std::vector<double> d;
    d.reserve(residuals_us.size());
    for (double r : residuals_us) {
        d.push_back(kSpeedOfLight * (r * 1e-6));
    }
    return d;
}

double condition_number(const Mat3& m) {
    const Vec3 ev = symmetric_eigenvalues(m);
    const double lo = std::min({ev[0], ev[1], ev[2]});
    const double hi = std::max({ev[0], ev[1], ev[2]});
    if (!(lo > 0.0) || !std::isfinite(hi)) {
        return std::numeric_limits<double>::infinity();
    }
    return hi / lo;
}

Mat3 invert_checked(const Mat3& m) {
    const double kappa = condition_number(m);
    if (!(kappa <= kMaxConditionNumber)) {
        throw SingularGeometry("normal matrix condition number exceeds 1e8");
    }
    const double c00 = m[1][1] * m[2][2] - m[1][2] * m[2][1];
    const double c01 = m[1][2] * m[2][0] - m[1][0] * m[2][2];
    const double c02 = m[1][0] * m[2][1] - m[1][1] * m[2][0];
    const double det = m[0][0] * c00 + m[0][1] * c01 + m[0][2] * c02;
    if (!std::isfinite(det) || det == 0.0) {
        throw SingularGeometry("normal matrix is singular");
    }
    const double inv_det = 1.0 / det;
    Mat3 inv;
    inv[0][0] = c00 * inv_det;
    inv[1][0] = c01 * inv_det;
    inv[2][0] = c02 * inv_det;
    inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * inv_det;
    inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) * inv_det;
    inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * inv_det;
    inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * inv_det;
    inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * inv_det;
    inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * inv_det;

    return inv;
}

Mat3 normal_matrix(const GeometryMatrix& g, std::span<const double> weights) {
    check_shapes(g, weights);
    Mat3 m{};
    for (std::size_t k = 0; k < g.size(); ++k) {
        const auto& row = g.rows[k];
        for (int i = 0; i < 3; ++i) {
            for (int j = i; j < 3; ++j) {
                m[i][j] += weights[k] * row[i] * row[j];
            }
        }
    }
    m[1][0] = m[0][1];
    m[2][0] = m[0][2];
    m[2][1] = m[1][2];
    invert_checked(m);
    return m;
}

double sigma_pos(const Mat3& m) {
    const Mat3 inv = invert_checked(m);
    return std::sqrt(inv[0][0] + inv[1][1]);
}

BiasSolution bias_solution(const Mat3& m, const GeometryMatrix& g, std::span<const double> weights,
                           std::span<const double> d) {
    if (d.size() != g.size() || weights.size() != g.size()) {
        throw ValueError("bias vector, weights and geometry rows must align");
    }
    const Mat3 inv = invert_checked(m);
    Vec3 rhs{};
    for (std::size_t k = 0; k < g.size(); ++k) {
        for (int i = 0; i < 3; ++i) {
            rhs[i] += g.rows[k][i] * weights[k] * d[k];
        }
    }
    Vec3 x{};
    for (int i = 0; i < 3; ++i) {
        x[i] = inv[i][0] * rhs[0] + inv[i][1] * rhs[1] + inv[i][2] * rhs[2];
    }
    return {x[0], x[1], x[2], std::hypot(x[0], x[1])};
}

AccResult solve_acc(const GeometryMatrix& g, std::span<const double> weights,
                    std::span<const double> residuals_us) {
    if (g.size() < 3) {
        return AccResult::no_fix("insufficient stations");
    }
    try {
        const Mat3 m = normal_matrix(g, weights);
        const auto d = range_bias(residuals_us);
        const BiasSolution bias = bias_solution(m, g, weights, d);

        AccResult r;
        r.sigma_pos = sigma_pos(m);
        r.pos_bias = bias.pos_bias;
        r.acc = acc(r.sigma_pos, r.pos_bias);
        r.dx = bias.dx;
        r.dy = bias.dy;
        r.clock_bias = bias.db;
        r.status = FixStatus::Ok;
        return r;
    } catch (const SingularGeometry&) {
        return AccResult::no_fix("singular geometry");
    }
}

}  // namespace lorasf
