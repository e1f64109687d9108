#include "lorasf/geo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lorasf/errors.hpp"

namespace lorasf {

bool is_valid(const GeoPoint& p) noexcept {
    return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 && p.lat <= 90.0 &&
           p.lon >= -180.0 && p.lon < 180.0;
}

void validate(const GeoPoint& p) {
    if (!is_valid(p)) {
        std::ostringstream msg;
        msg << "invalid geographic point (" << p.lat << ", " << p.lon << ")";
        throw ValueError(msg.str());
    }
}

RangeBearing geodesic_range_bearing(const GeoPoint& a, const GeoPoint& b, double earth_radius) {
    if (a == b) {
        return {};
    }
    const double phi1 = a.lat * kDegToRad;
    const double phi2 = b.lat * kDegToRad;
    const double dphi = (b.lat - a.lat) * kDegToRad;
    const double dlambda = (b.lon - a.lon) * kDegToRad;

    const double s_phi = std::sin(0.5 * dphi);
    const double s_lambda = std::sin(0.5 * dlambda);
    double h = s_phi * s_phi + std::cos(phi1) * std::cos(phi2) * s_lambda * s_lambda;
    h = std::min(1.0, std::max(0.0, h));
    const double central = 2.0 * std::asin(std::sqrt(h));

    RangeBearing out;
    out.range = earth_radius * central;

    // Any direction leaving a pole is "south"/"north"; report 0 there.
    if (std::abs(a.lat) >= 90.0) {
        return out;
    }
    const double y = std::sin(dlambda) * std::cos(phi2);
    const double x = std::cos(phi1) * std::sin(phi2) - std::sin(phi1) * std::cos(phi2) * std::cos(dlambda);
    double theta = std::atan2(y, x);
    if (theta < 0.0) {
        theta += kTwoPi;
    }
    if (theta >= kTwoPi) {
        theta = 0.0;
    }
    out.bearing = theta;
    return out;
}

GeometryMatrix geometry_from_bearings(std::span<const double> bearings) {
    GeometryMatrix g;
    g.rows.reserve(bearings.size());
    for (double theta : bearings) {
        g.rows.push_back({-std::sin(theta), -std::cos(theta), 1.0});
    }
    return g;
}

GeometryMatrix build_geometry_matrix(const GeoPoint& rx, std::span<const GeoPoint> stations,
                                     double earth_radius) {
    if (stations.size() < 3) {
        throw InsufficientStations("geometry needs at least 3 stations, got " +
                                   std::to_string(stations.size()));
    }
    std::vector<double> bearings;
    bearings.reserve(stations.size());
    for (std::size_t i = 0; i < stations.size(); ++i) {
        const RangeBearing rb = geodesic_range_bearing(rx, stations[i], earth_radius);
        if (rb.range < kMinStationRange) {
            throw StationTooClose("station " + std::to_string(i) + " is within " +
                                  std::to_string(kMinStationRange) + " m of the receiver");
        }
        bearings.push_back(rb.bearing);
    }
    return geometry_from_bearings(bearings);
}

}  // namespace lorasf
