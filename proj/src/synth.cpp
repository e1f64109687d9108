#include "lorasf/synth.hpp"

#include <cmath>
#include <vector>

#include "lorasf/errors.hpp"

namespace lorasf {

SynthKind parse_synth_kind(const std::string& text) {
    if (text == "constant") return SynthKind::Constant;
    if (text == "gradient") return SynthKind::Gradient;
    if (text == "bump") return SynthKind::Bump;
    throw ValueError("unknown synthetic map kind '" + text + "' (expected constant, gradient or bump)");
}

double synth_value(const SynthParams& params, const GeoPoint& p) {
    switch (params.kind) {
        case SynthKind::Constant:
            return params.offset_us;
        case SynthKind::Gradient:
            return params.offset_us + params.grad_lat_us_per_deg * (p.lat - params.anchor.lat) +
                   params.grad_lon_us_per_deg * (p.lon - params.anchor.lon);
        case SynthKind::Bump: {
            const double dlat = p.lat - params.center.lat;
            const double dlon = p.lon - params.center.lon;
            const double s2 = params.sigma_deg * params.sigma_deg;
            return params.offset_us + params.amplitude_us * std::exp(-(dlat * dlat + dlon * dlon) / (2.0 * s2));
        }
    }
    return 0.0;
}

AsfMap synthesize_asf_map(const SynthParams& params) {
    if (params.kind == SynthKind::Bump && !(std::isfinite(params.sigma_deg) && params.sigma_deg > 0.0)) {
        throw ValueError("bump sigma must be > 0");
    }
    std::vector<double> values;
    values.reserve(params.n_lat * params.n_lon);
    for (std::size_t i = 0; i < params.n_lat; ++i) {
        for (std::size_t j = 0; j < params.n_lon; ++j) {
            const GeoPoint p{params.origin.lat + static_cast<double>(i) * params.d_lat,
                             params.origin.lon + static_cast<double>(j) * params.d_lon};
            values.push_back(synth_value(params, p));
        }
    }
    return AsfMap(params.station_id, params.origin, params.d_lat, params.d_lon, params.n_lat,
                  params.n_lon, std::move(values), kUnitsMicroseconds);
}

}  // namespace lorasf
