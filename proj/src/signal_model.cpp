#include "lorasf/signal_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "lorasf/errors.hpp"

namespace lorasf {

void validate_network(std::span<const TransmitterSpec> network) {
    std::set<std::string> ids;
    for (const auto& tx : network) {
        if (tx.station_id.empty()) {
            throw ValueError("transmitter with empty station id");
        }
        if (!ids.insert(tx.station_id).second) {
            throw ValueError("duplicate station id '" + tx.station_id + "'");
        }
        validate(tx.location);
        if (!(std::isfinite(tx.power_kw) && tx.power_kw > 0.0)) {
            throw ValueError("station '" + tx.station_id + "': power must be > 0 kW");
        }
        if (!(std::isfinite(tx.jitter_m) && tx.jitter_m >= 0.0)) {
            throw ValueError("station '" + tx.station_id + "': jitter must be >= 0 m");
        }
    }
}

void validate(const PropagationParams& prop) {
    if (!std::isfinite(prop.e0_dbuv)) {
        throw ValueError("propagation e0 must be finite");
    }
    if (!(std::isfinite(prop.d0_m) && prop.d0_m > 0.0)) {
        throw ValueError("propagation d0 must be > 0");
    }
    if (!(std::isfinite(prop.alpha_db_per_km) && prop.alpha_db_per_km >= 0.0)) {
        throw ValueError("propagation alpha must be >= 0");
    }
    if (!(std::isfinite(prop.d_min_m) && prop.d_min_m > 0.0)) {
        throw ValueError("propagation d_min must be > 0");
    }
}

double field_strength(double power_kw, double distance_m, const PropagationParams& prop) {
    const double d = std::max(distance_m, prop.d_min_m);
    return prop.e0_dbuv + 10.0 * std::log10(power_kw) - 20.0 * std::log10(d / prop.d0_m) -
           prop.alpha_db_per_km * (d - prop.d0_m) / 1000.0;
}

double range_sigma(double jitter_m, double snr_db, double sigma0_m) {
    const double noise_term = sigma0_m * std::pow(10.0, -snr_db / 20.0);
    return std::sqrt(jitter_m * jitter_m + noise_term * noise_term);
}

MeasurementModel measurement_model(std::span<const TransmitterSpec> network, const GeoPoint& rx,
                                   const MeasurementSettings& settings) {
    MeasurementModel model;
    model.reserve(network.size());
    for (const auto& tx : network) {
        StationMeasurement m;
        m.range_m = geodesic_range_bearing(rx, tx.location, settings.earth_radius).range;
        m.snr_db = snr(field_strength(tx.power_kw, m.range_m, settings.propagation), settings.noise);
        m.usable = m.snr_db >= settings.snr_threshold_db;
        if (m.usable) {
            m.sigma_m = range_sigma(tx.jitter_m, m.snr_db, settings.sigma0_m);
            m.weight = 1.0 / (m.sigma_m * m.sigma_m);
        }
        model.push_back(m);
    }
    return model;
}

}  // namespace lorasf
