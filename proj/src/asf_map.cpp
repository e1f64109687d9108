#include "lorasf/asf_map.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "lorasf/errors.hpp"

namespace lorasf {
namespace {

constexpr double kNoData = std::numeric_limits<double>::quiet_NaN();

// Fractional indices this close to a node are snapped onto it, so lattice points
// generated as origin + i * step hit nodes exactly.
constexpr double kNodeSnap = 1e-9;

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) {
        tokens.push_back(tok);
    }
    return tokens;
}

double parse_double(const std::string& tok, const std::string& what) {
    double v = 0.0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        throw FormatError("cannot parse " + what + " '" + tok + "'");
    }
    return v;
}

std::size_t parse_count(const std::string& tok, const std::string& what) {
    std::size_t v = 0;
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), last, v);
    if (ec != std::errc() || ptr != last) {
        throw FormatError("cannot parse " + what + " '" + tok + "'");
    }
    return v;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) {
        throw ValueError("cannot format value");
    }
    return std::string(buf, ptr);
}

bool is_blank(const std::string& line) {
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Snaps near-integer fractional indices and reports the lower cell index plus weight.
bool locate(double frac, std::size_t n, std::size_t& lower, double& t) {
    const double nearest = std::round(frac);
    if (std::abs(frac - nearest) <= kNodeSnap) {
        frac = nearest;
    }
    if (!(frac >= 0.0) || frac > static_cast<double>(n - 1)) {
        return false;
    }
    if (n == 1) {
        lower = 0;
        t = 0.0;
        return true;
    }
    lower = std::min(static_cast<std::size_t>(std::floor(frac)), n - 2);
    t = frac - static_cast<double>(lower);
    return true;
}

}  // namespace

AsfMap::AsfMap(std::string station_id, GeoPoint origin, double d_lat, double d_lon,
               std::size_t n_lat, std::size_t n_lon, std::vector<double> values, std::string units)
    : station_id_(std::move(station_id)),
      origin_(origin),
      d_lat_(d_lat),
      d_lon_(d_lon),
      n_lat_(n_lat),
      n_lon_(n_lon),
      values_(std::move(values)),
      units_(std::move(units)) {
    if (station_id_.empty() || station_id_.find_first_of(" \t\r\n") != std::string::npos) {
        throw ValueError("raster id must be a non-empty token without whitespace");
    }
    if (units_.empty() || units_.find_first_of(" \t\r\n") != std::string::npos) {
        throw ValueError("raster units must be a non-empty token");
    }
    validate(origin_);
    if (!(std::isfinite(d_lat_) && d_lat_ > 0.0) || !(std::isfinite(d_lon_) && d_lon_ > 0.0)) {
        throw ValueError("raster cell size must be positive");
    }
    const bool is_asf = units_ == kUnitsMicroseconds;
    const std::size_t min_nodes = is_asf ? 2 : 1;
    if (n_lat_ < min_nodes || n_lon_ < min_nodes) {
        throw ValueError("raster '" + station_id_ + "' needs at least " +
                         std::to_string(min_nodes) + " nodes per axis");
    }
    if (values_.size() != n_lat_ * n_lon_) {
        throw ValueError("raster value count does not match n_lat * n_lon");
    }
    for (double v : values_) {
        if (std::isnan(v)) {
            continue;
        }
        if (!std::isfinite(v)) {
            throw ValueError("raster '" + station_id_ + "' holds a non-finite value");
        }
        if (is_asf && std::abs(v) > kMaxAbsAsfMicroseconds) {
            throw ValueError("ASF value " + format_double(v) + " us in map '" + station_id_ +
                             "' exceeds the +-100 us sanity bound");
        }
    }
}

std::optional<double> AsfMap::value(std::size_t i_lat, std::size_t i_lon) const {
    const double v = values_.at(i_lat * n_lon_ + i_lon);
    if (std::isnan(v)) {
        return std::nullopt;
    }
    return v;
}

GeoPoint AsfMap::node(std::size_t i_lat, std::size_t i_lon) const {
    return {origin_.lat + static_cast<double>(i_lat) * d_lat_,
            origin_.lon + static_cast<double>(i_lon) * d_lon_};
}

bool AsfMap::operator==(const AsfMap& other) const {
    if (station_id_ != other.station_id_ || !(origin_ == other.origin_) ||
        d_lat_ != other.d_lat_ || d_lon_ != other.d_lon_ || n_lat_ != other.n_lat_ ||
        n_lon_ != other.n_lon_ || units_ != other.units_ || values_.size() != other.values_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        const double a = values_[i];
        const double b = other.values_[i];
        if (std::isnan(a) != std::isnan(b) || (!std::isnan(a) && a != b)) {
            return false;
        }
    }
    return true;
}

AsfMap load_asf_map(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw FormatError("empty grid stream");
    }
    const auto header = split_ws(line);
    if (header.size() != 9 || header[0] != "ASFGRID" || header[1] != "v1") {
        throw FormatError("header must be 'ASFGRID v1 <id> <origin_lat> <origin_lon> <d_lat> "
                          "<d_lon> <n_lat> <n_lon>'");
    }
    const std::string& id = header[2];
    const GeoPoint origin{parse_double(header[3], "origin_lat"),
                          parse_double(header[4], "origin_lon")};
    const double d_lat = parse_double(header[5], "d_lat");
    const double d_lon = parse_double(header[6], "d_lon");
    const std::size_t n_lat = parse_count(header[7], "n_lat");
    const std::size_t n_lon = parse_count(header[8], "n_lon");
    if (n_lat == 0 || n_lon == 0 || n_lat > 100'000'000 / n_lon) {
        throw FormatError("implausible raster dimensions");
    }

    std::string units = kUnitsMicroseconds;
    std::vector<double> values;
    values.reserve(n_lat * n_lon);
    std::size_t rows = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) {
            continue;
        }
        const std::string t = trim(line);
        if (t.front() == '#') {
            const std::string body = trim(t.substr(1));
            constexpr std::string_view kUnitsKey = "units:";
            if (body.rfind(kUnitsKey, 0) == 0) {
                units = trim(body.substr(kUnitsKey.size()));
            }
            continue;
        }
        const auto tokens = split_ws(t);
        if (tokens.size() != n_lon) {
            throw FormatError("line " + std::to_string(line_no) + ": expected " +
                              std::to_string(n_lon) + " values, found " +
                              std::to_string(tokens.size()));
        }
        ++rows;
        if (rows > n_lat) {
            throw FormatError("grid declares n_lat=" + std::to_string(n_lat) +
                              " but contains more rows");
        }
        for (const auto& tok : tokens) {
            if (tok == "NA") {
                values.push_back(kNoData);
                continue;
            }
            const double v = parse_double(tok, "value on line " + std::to_string(line_no));
            if (!std::isfinite(v)) {
                throw ValueError("line " + std::to_string(line_no) + ": non-finite value '" +
                                 tok + "'");
            }
            values.push_back(v);
        }
    }
    if (rows != n_lat) {
        throw FormatError("grid declares n_lat=" + std::to_string(n_lat) + " but contains " +
                          std::to_string(rows) + " rows");
    }
    return AsfMap(id, origin, d_lat, d_lon, n_lat, n_lon, std::move(values), units);
}

AsfMap load_asf_map_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open grid file '" + path + "'");
    }
    try {
        return load_asf_map(in);
    } catch (const FormatError& e) {
        throw FormatError(path + ": " + e.what());
    } catch (const ValueError& e) {
        throw ValueError(path + ": " + e.what());
    }
}

void write_asf_map(std::ostream& out, const AsfMap& map) {
    out << "ASFGRID v1 " << map.station_id() << ' ' << format_double(map.origin().lat) << ' '
        << format_double(map.origin().lon) << ' ' << format_double(map.d_lat()) << ' '
        << format_double(map.d_lon()) << ' ' << map.n_lat() << ' ' << map.n_lon() << '\n';
    out << "# units: " << map.units() << '\n';
    const auto& values = map.values();
    for (std::size_t i = 0; i < map.n_lat(); ++i) {
        for (std::size_t j = 0; j < map.n_lon(); ++j) {
            if (j > 0) {
                out << ' ';
            }
            const double v = values[i * map.n_lon() + j];
            if (std::isnan(v)) {
                out << "NA";
            } else {
                out << format_double(v);
            }
        }
        out << '\n';
    }
}

void write_asf_map_file(const std::string& path, const AsfMap& map) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw FormatError("cannot open '" + path + "' for writing");
    }
    write_asf_map(out, map);
    if (!out) {
        throw FormatError("write to '" + path + "' failed");
    }
}

std::string to_string(const AsfMap& map) {
    std::ostringstream out;
    write_asf_map(out, map);
    return out.str();
}

AsfSample interpolate_asf(const AsfMap& map, const GeoPoint& p) {
    if (!std::isfinite(p.lat) || !std::isfinite(p.lon)) {
        return {};
    }
    std::size_t i0 = 0;
    std::size_t j0 = 0;
    double t = 0.0;
    double u = 0.0;
    if (!locate((p.lat - map.origin().lat) / map.d_lat(), map.n_lat(), i0, t) ||
        !locate((p.lon - map.origin().lon) / map.d_lon(), map.n_lon(), j0, u)) {
        return {};
    }

    // Corners with zero weight are not touched, so samples on a node or an edge only
    // depend on the nodes they actually use. std::lerp is exact at both ends and for
    // equal endpoints, which keeps nodes and constant fields exact.
    auto along_lon = [&](std::size_t i) -> std::optional<double> {
        if (u == 0.0) {
            return map.value(i, j0);
        }
        const auto a = map.value(i, j0);
        const auto b = map.value(i, j0 + 1);
        if (!a || !b) {
            return std::nullopt;
        }
        return u == 1.0 ? *b : std::lerp(*a, *b, u);
    };
    std::optional<double> value;
    if (t == 0.0) {
        value = along_lon(i0);
    } else if (t == 1.0) {
        value = along_lon(i0 + 1);
    } else {
        const auto lo = along_lon(i0);
        const auto hi = along_lon(i0 + 1);
        if (lo && hi) {
            value = std::lerp(*lo, *hi, t);
        }
    }
    if (!value) {
        return {};
    }
    return {*value, true};
}

double reference_asf(const AsfMap& map, const GeoPoint& ref_point, double earth_radius) {
    double best_range = std::numeric_limits<double>::infinity();
    std::optional<double> best;
    for (std::size_t i = 0; i < map.n_lat(); ++i) {
        for (std::size_t j = 0; j < map.n_lon(); ++j) {
            const auto v = map.value(i, j);
            if (!v) {
                continue;
            }
            const double range = geodesic_range_bearing(ref_point, map.node(i, j), earth_radius).range;
            if (range < best_range) {
                best_range = range;
                best = v;
            }
        }
    }
    if (!best) {
        throw NoDataError("map '" + map.station_id() + "' has no valid nodes");
    }
    return *best;
}

}  // namespace lorasf
