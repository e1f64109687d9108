#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lorasf/geo.hpp"

namespace lorasf {

// Sanity bound on spatial ASF values held in microseconds.
inline constexpr double kMaxAbsAsfMicroseconds = 100.0;

// Units tag of a raster. ASF maps carry microseconds; exported ACC grids carry meters.
inline constexpr const char* kUnitsMicroseconds = "us";
inline constexpr const char* kUnitsMeters = "m";

// Regular lat/lon raster stored south-to-north, west-to-east. NODATA cells are NaN.
//
// The same structure backs per-station ASF maps and exported ACC grids, so every
// output grid can be read back by load_asf_map.
class AsfMap {
public:
    AsfMap() = default;
    AsfMap(std::string station_id, GeoPoint origin, double d_lat, double d_lon, std::size_t n_lat,
           std::size_t n_lon, std::vector<double> values, std::string units = kUnitsMicroseconds);

    const std::string& station_id() const noexcept { return station_id_; }
    const GeoPoint& origin() const noexcept { return origin_; }
    double d_lat() const noexcept { return d_lat_; }
    double d_lon() const noexcept { return d_lon_; }
    std::size_t n_lat() const noexcept { return n_lat_; }
    std::size_t n_lon() const noexcept { return n_lon_; }
    const std::string& units() const noexcept { return units_; }
    const std::vector<double>& values() const noexcept { return values_; }

    bool is_nodata(std::size_t i_lat, std::size_t i_lon) const { return !value(i_lat, i_lon); }
    std::optional<double> value(std::size_t i_lat, std::size_t i_lon) const;
    GeoPoint node(std::size_t i_lat, std::size_t i_lon) const;

    bool operator==(const AsfMap& other) const;

private:
    std::string station_id_;
    GeoPoint origin_;
    double d_lat_ = 0.0;
    double d_lon_ = 0.0;
    std::size_t n_lat_ = 0;
    std::size_t n_lon_ = 0;
    std::vector<double> values_;
    std::string units_ = kUnitsMicroseconds;
};

// Parses an ASFGRID v1 stream. Throws FormatError on a malformed header or row/column
// count and ValueError on non-finite values or, for microsecond rasters, values outside
// +-kMaxAbsAsfMicroseconds.
AsfMap load_asf_map(std::istream& in);
AsfMap load_asf_map_file(const std::string& path);

// Canonical writer: shortest round-trip decimal for every number, `NA` for NODATA.
void write_asf_map(std::ostream& out, const AsfMap& map);
void write_asf_map_file(const std::string& path, const AsfMap& map);
std::string to_string(const AsfMap& map);

struct AsfSample {
    double value = 0.0;  // microseconds, meaningful only when valid
    bool valid = false;
};

// Bilinear interpolation over the enclosing cell. Points outside the raster, or whose
// interpolation weights touch a NODATA node, yield an invalid sample.
AsfSample interpolate_asf(const AsfMap& map, const GeoPoint& p);

// Value of the non-NODATA node nearest (great-circle) to ref_point. Ties go to the lower
// latitude index, then the lower longitude index. Throws NoDataError on an all-NODATA map.
double reference_asf(const AsfMap& map, const GeoPoint& ref_point,
                     double earth_radius = kDefaultEarthRadius);

}  // namespace lorasf
