#pragma once

#include <array>
#include <span>
#include <vector>

namespace lorasf {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kDegToRad = kPi / 180.0;

// Mean spherical earth radius used for every range and bearing (overridable in the run config).
inline constexpr double kDefaultEarthRadius = 6371000.0;

// Stations closer than this to the receiver leave the line-of-sight direction undefined.
inline constexpr double kMinStationRange = 1.0;

struct GeoPoint {
    double lat = 0.0;  // degrees, [-90, 90]
    double lon = 0.0;  // degrees, [-180, 180)

    bool operator==(const GeoPoint&) const = default;
};

bool is_valid(const GeoPoint& p) noexcept;

// Throws ValueError when p is non-finite or out of range.
void validate(const GeoPoint& p);

struct RangeBearing {
    double range = 0.0;    // meters
    double bearing = 0.0;  // radians clockwise from north, [0, 2pi)
};

// Great-circle range (haversine) and forward azimuth on a sphere of the given radius.
// Identical points, and departures from a pole, report bearing 0.
RangeBearing geodesic_range_bearing(const GeoPoint& a, const GeoPoint& b,
                                    double earth_radius = kDefaultEarthRadius);

// Rows are [-e_east, -e_north, 1]: the negated receiver-to-station unit vector
// followed by the receiver clock column.
struct GeometryMatrix {
    std::vector<std::array<double, 3>> rows;

    std::size_t size() const noexcept { return rows.size(); }
};

GeometryMatrix geometry_from_bearings(std::span<const double> bearings);

// Throws InsufficientStations for fewer than 3 stations and StationTooClose when a
// station lies within kMinStationRange of rx. Row order follows station order.
GeometryMatrix build_geometry_matrix(const GeoPoint& rx, std::span<const GeoPoint> stations,
                                     double earth_radius = kDefaultEarthRadius);

}  // namespace lorasf
