#pragma once

// Shared scenario fixtures: the three-station network and synthetic ASF maps on the
// default study lattice.

#include <vector>

#include "lorasf/scenario.hpp"
#include "lorasf/synth.hpp"

namespace lorasf::testing {

inline std::vector<TransmitterSpec> paper_network() {
    return {{"Pohang", {36.18483, 129.34094}, 150.0, 2.11},
            {"Gwangju", {35.03997, 126.54089}, 50.0, 3.21},
            {"Socheong", {37.75, 124.74}, 8.0, 2.11}};
}

inline SynthParams lattice_params(const std::string& id) {
    SynthParams p;
    p.station_id = id;
    p.origin = {33.0, 124.0};
    p.d_lat = 0.05;
    p.d_lon = 0.05;
    p.n_lat = 121;
    p.n_lon = 141;
    return p;
}

inline AsfMap constant_map(const std::string& id, double value_us) {
    auto p = lattice_params(id);
    p.kind = SynthKind::Constant;
    p.offset_us = value_us;
    return synthesize_asf_map(p);
}

inline AsfMap gradient_map(const std::string& id, double offset_us, double grad_lat, double grad_lon,
                           GeoPoint anchor = {36.0, 127.5}) {
    auto p = lattice_params(id);
    p.kind = SynthKind::Gradient;
    p.offset_us = offset_us;
    p.grad_lat_us_per_deg = grad_lat;
    p.grad_lon_us_per_deg = grad_lon;
    p.anchor = anchor;
    return synthesize_asf_map(p);
}

inline Environment make_environment(std::vector<AsfMap> maps) {
    Environment env;
    env.network = paper_network();
    env.maps = std::move(maps);
    return env;
}

inline Environment constant_environment(double a, double b, double c) {
    return make_environment({constant_map("Pohang", a), constant_map("Gwangju", b), constant_map("Socheong", c)});
}

inline Environment gradient_environment() {
    return make_environment({gradient_map("Pohang", 2.6, 0.05, -0.12), gradient_map("Gwangju", 1.1, 0.2, 0.1),
                             gradient_map("Socheong", 0.4, -0.04, 0.15)});
}

inline constexpr GeoPoint kReference{37.449232, 126.593994};

}  // namespace lorasf::testing
