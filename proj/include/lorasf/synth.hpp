#pragma once

#include <cstddef>
#include <string>

#include "lorasf/asf_map.hpp"

namespace lorasf {

enum class SynthKind { Constant, Gradient, Bump };

SynthKind parse_synth_kind(const std::string& text);  // throws ValueError

// Synthetic ASF surface in microseconds:
//   constant  offset
//   gradient  offset + grad_lat (lat - anchor.lat) + grad_lon (lon - anchor.lon)
//   bump      offset + amplitude exp(-|p - center|^2 / (2 sigma^2)), distances in degrees
struct SynthParams {
    SynthKind kind = SynthKind::Constant;
    std::string station_id = "STATION";
    GeoPoint origin{33.0, 124.0};
    double d_lat = 0.05;
    double d_lon = 0.05;
    std::size_t n_lat = 121;
    std::size_t n_lon = 141;

    double offset_us = 0.0;
    double grad_lat_us_per_deg = 0.0;
    double grad_lon_us_per_deg = 0.0;
    GeoPoint anchor{36.0, 127.5};
    double amplitude_us = 0.0;
    GeoPoint center{36.0, 127.5};
    double sigma_deg = 1.0;
};

double synth_value(const SynthParams& params, const GeoPoint& p);

AsfMap synthesize_asf_map(const SynthParams& params);

}  // namespace lorasf
