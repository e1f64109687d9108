#pragma once

#include <span>
#include <string>
#include <vector>

#include "lorasf/geo.hpp"

namespace lorasf {

struct TransmitterSpec {
    std::string station_id;
    GeoPoint location;
    double power_kw = 0.0;  // > 0
    double jitter_m = 0.0;  // 1-sigma range jitter, >= 0
};

// Throws ValueError on non-positive power, negative jitter, bad location or duplicate ids.
void validate_network(std::span<const TransmitterSpec> network);

// Log-domain groundwave stand-in: inverse distance spreading plus linear attenuation,
// anchored at e0 for 1 kW at the reference distance.
struct PropagationParams {
    double e0_dbuv = 100.0;          // dB(uV/m) for 1 kW at d0
    double d0_m = 1000.0;            // reference distance
    double alpha_db_per_km = 0.007;  // attenuation beyond d0
    double d_min_m = 1000.0;         // distances below this clamp to it
};

void validate(const PropagationParams& prop);

struct NoiseModel {
    double field_strength_dbuv = 62.0;  // operative noise level, dB(uV/m)
    double percentile = 95.0;           // informational
    std::string season = "Averaged";    // informational
};

double field_strength(double power_kw, double distance_m, const PropagationParams& prop = {});

inline double snr(double field_dbuv, const NoiseModel& noise) {
    return field_dbuv - noise.field_strength_dbuv;
}

// Range sigma for a usable station: jitter floor plus the amplitude-SNR term.
double range_sigma(double jitter_m, double snr_db, double sigma0_m);

struct StationMeasurement {
    double range_m = 0.0;
    double snr_db = 0.0;
    bool usable = false;
    double sigma_m = 0.0;  // set when usable
    double weight = 0.0;   // 1/m^2, set when usable
};

struct MeasurementSettings {
    NoiseModel noise;
    PropagationParams propagation;
    double snr_threshold_db = -15.0;
    double sigma0_m = 10.0;
    double earth_radius = kDefaultEarthRadius;
};

using MeasurementModel = std::vector<StationMeasurement>;

// One entry per station, in network order. A station is usable iff snr >= threshold.
MeasurementModel measurement_model(std::span<const TransmitterSpec> network, const GeoPoint& rx,
                                   const MeasurementSettings& settings);

}  // namespace lorasf
