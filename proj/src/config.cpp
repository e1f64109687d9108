#include "lorasf/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lorasf/errors.hpp"
#include "lorasf/wls.hpp"

namespace lorasf {
namespace {

using nlohmann::json;

std::string join(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) {
        throw ConfigError(path, "expected an object");
    }
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [key, value] : obj.items()) {
        if (!keys.count(key)) {
            throw ConfigError(join(path, key), "unknown key");
        }
    }
}

const json& require(const json& obj, const std::string& path, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw ConfigError(join(path, key), "missing required key");
    }
    return *it;
}

double get_number(const json& v, const std::string& path) {
    if (!v.is_number()) {
        throw ConfigError(path, "expected a number");
    }
    return v.get<double>();
}

double number_or(const json& obj, const std::string& path, const char* key, double fallback) {
    const auto it = obj.find(key);
    return it == obj.end() ? fallback : get_number(*it, join(path, key));
}

std::string get_string(const json& v, const std::string& path) {
    if (!v.is_string()) {
        throw ConfigError(path, "expected a string");
    }
    return v.get<std::string>();
}

GeoPoint parse_point(const json& v, const std::string& path) {
    reject_unknown(v, path, {"lat", "lon"});
    GeoPoint p{get_number(require(v, path, "lat"), join(path, "lat")),
               get_number(require(v, path, "lon"), join(path, "lon"))};
    if (!is_valid(p)) {
        throw ConfigError(path, "latitude/longitude out of range");
    }
    return p;
}

std::vector<TransmitterSpec> parse_network(const json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) {
        throw ConfigError(path, "expected a non-empty array of stations");
    }
    std::vector<TransmitterSpec> network;
    std::set<std::string> ids;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        const json& s = v[i];
        reject_unknown(s, p, {"id", "lat", "lon", "power_kw", "jitter_m"});
        TransmitterSpec tx;
        tx.station_id = get_string(require(s, p, "id"), join(p, "id"));
        if (tx.station_id.empty() || tx.station_id.find_first_of(" \t\r\n") != std::string::npos) {
            throw ConfigError(join(p, "id"), "station id must be a non-empty token");
        }
        if (!ids.insert(tx.station_id).second) {
            throw ConfigError(join(p, "id"), "duplicate station id '" + tx.station_id + "'");
        }
        tx.location = {get_number(require(s, p, "lat"), join(p, "lat")),
                       get_number(require(s, p, "lon"), join(p, "lon"))};
        if (!is_valid(tx.location)) {
            throw ConfigError(p, "latitude/longitude out of range");
        }
        tx.power_kw = get_number(require(s, p, "power_kw"), join(p, "power_kw"));
        if (!(tx.power_kw > 0.0)) {
            throw ConfigError(join(p, "power_kw"), "must be > 0");
        }
        tx.jitter_m = get_number(require(s, p, "jitter_m"), join(p, "jitter_m"));
        if (!(tx.jitter_m >= 0.0)) {
            throw ConfigError(join(p, "jitter_m"), "must be >= 0");
        }
        network.push_back(std::move(tx));
    }
    return network;
}

std::vector<Scenario> parse_scenarios(const json& v, const std::string& path) {
    if (!v.is_array()) {
        throw ConfigError(path, "expected an array");
    }
    if (v.empty()) {
        throw ConfigError(path, "scenario list is empty");
    }
    std::vector<Scenario> out;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        reject_unknown(v[i], p, {"tag", "reference_point"});
        const std::string tag_text = get_string(require(v[i], p, "tag"), join(p, "tag"));
        if (!seen.insert(tag_text).second) {
            throw ConfigError(join(p, "tag"), "scenario listed twice");
        }
        ScenarioTag tag;
        try {
            tag = parse_scenario_tag(tag_text);
        } catch (const ValueError& e) {
            throw ConfigError(join(p, "tag"), e.what());
        }
        std::optional<GeoPoint> ref;
        if (const auto it = v[i].find("reference_point"); it != v[i].end()) {
            ref = parse_point(*it, join(p, "reference_point"));
        }
        if (tag == ScenarioTag::S2 && !ref) {
            throw ConfigError(join(p, "reference_point"), "scenario S2 requires a reference point");
        }
        if (tag != ScenarioTag::S2 && ref) {
            throw ConfigError(join(p, "reference_point"), "only scenario S2 takes a reference point");
        }
        out.push_back(Scenario::make(tag, ref));
    }
    return out;
}

json point_json(const GeoPoint& p) { return json{{"lat", p.lat}, {"lon", p.lon}}; }

}  // namespace

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("malformed JSON: ") + e.what());
    }
    reject_unknown(root, "", {"network", "noise", "propagation", "snr_threshold_db", "sigma0_m",
                              "earth_radius_m", "grid", "scenarios", "asf_maps", "output_dir",
                              "threads", "manifest"});

    RunConfig cfg;
    cfg.network = parse_network(require(root, "", "network"), "network");

    if (const auto it = root.find("noise"); it != root.end()) {
        reject_unknown(*it, "noise", {"field_strength_dbuv", "percentile", "season"});
        auto& noise = cfg.settings.noise;
        noise.field_strength_dbuv = number_or(*it, "noise", "field_strength_dbuv", noise.field_strength_dbuv);
        noise.percentile = number_or(*it, "noise", "percentile", noise.percentile);
        if (const auto s = it->find("season"); s != it->end()) {
            noise.season = get_string(*s, "noise.season");
        }
    }
    if (const auto it = root.find("propagation"); it != root.end()) {
        reject_unknown(*it, "propagation", {"e0_dbuv", "d0_m", "alpha_db_per_km", "d_min_m"});
        auto& prop = cfg.settings.propagation;
        prop.e0_dbuv = number_or(*it, "propagation", "e0_dbuv", prop.e0_dbuv);
        prop.d0_m = number_or(*it, "propagation", "d0_m", prop.d0_m);
        prop.alpha_db_per_km = number_or(*it, "propagation", "alpha_db_per_km", prop.alpha_db_per_km);
        prop.d_min_m = number_or(*it, "propagation", "d_min_m", prop.d_min_m);
        try {
            validate(prop);
        } catch (const ValueError& e) {
            throw ConfigError("propagation", e.what());
        }
    }
    cfg.settings.snr_threshold_db = number_or(root, "", "snr_threshold_db", cfg.settings.snr_threshold_db);
    cfg.settings.sigma0_m = number_or(root, "", "sigma0_m", cfg.settings.sigma0_m);
    if (!(cfg.settings.sigma0_m > 0.0)) {
        throw ConfigError("sigma0_m", "must be > 0");
    }
    cfg.settings.earth_radius = number_or(root, "", "earth_radius_m", cfg.settings.earth_radius);
    if (!(cfg.settings.earth_radius > 0.0)) {
        throw ConfigError("earth_radius_m", "must be > 0");
    }

    if (const auto it = root.find("grid"); it != root.end()) {
        reject_unknown(*it, "grid", {"lat_min", "lat_max", "lon_min", "lon_max", "step_deg"});
        auto& g = cfg.grid;
        g.lat_min = number_or(*it, "grid", "lat_min", g.lat_min);
        g.lat_max = number_or(*it, "grid", "lat_max", g.lat_max);
        g.lon_min = number_or(*it, "grid", "lon_min", g.lon_min);
        g.lon_max = number_or(*it, "grid", "lon_max", g.lon_max);
        g.step = number_or(*it, "grid", "step_deg", g.step);
    }
    try {
        validate(cfg.grid);
    } catch (const ValueError& e) {
        throw ConfigError("grid", e.what());
    }

    cfg.scenarios = parse_scenarios(require(root, "", "scenarios"), "scenarios");

    const json& maps = require(root, "", "asf_maps");
    if (!maps.is_object()) {
        throw ConfigError("asf_maps", "expected an object mapping station id to grid file");
    }
    for (const auto& [key, value] : maps.items()) {
        const bool known = std::any_of(cfg.network.begin(), cfg.network.end(),
                                       [&](const TransmitterSpec& tx) { return tx.station_id == key; });
        if (!known) {
            throw ConfigError(join("asf_maps", key), "no station with this id in network");
        }
    }
    for (const auto& tx : cfg.network) {
        const auto it = maps.find(tx.station_id);
        if (it == maps.end()) {
            throw ConfigError(join("asf_maps", tx.station_id), "station has no ASF map");
        }
        std::filesystem::path p = get_string(*it, join("asf_maps", tx.station_id));
        cfg.asf_map_paths.push_back(p.is_absolute() ? p : (base_dir / p).lexically_normal());
    }

    if (const auto it = root.find("output_dir"); it != root.end()) {
        std::filesystem::path p = get_string(*it, "output_dir");
        cfg.output_dir = p.is_absolute() ? p : (base_dir / p).lexically_normal();
    } else {
        cfg.output_dir = (base_dir / cfg.output_dir).lexically_normal();
    }
    if (const auto it = root.find("threads"); it != root.end()) {
        if (!it->is_number_unsigned()) {
            throw ConfigError("threads", "expected a non-negative integer");
        }
        cfg.threads = it->get<unsigned>();
    }
    if (const auto it = root.find("manifest"); it != root.end() && !it->is_object()) {
        throw ConfigError("manifest", "expected an object");
    }
    return cfg;
}

RunConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("", "cannot read config file '" + path.string() + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    auto base = path.parent_path();
    if (base.empty()) {
        base = ".";
    }
    return parse_config(ss.str(), std::filesystem::absolute(base));
}

std::string manifest_json(const RunConfig& config) {
    json root;
    root["manifest"] = {{"tool", "lorasf"},
                        {"version", kVersion},
                        {"speed_of_light_m_s", kSpeedOfLight},
                        {"max_condition_number", kMaxConditionNumber},
                        {"min_station_range_m", kMinStationRange},
                        {"max_abs_asf_us", kMaxAbsAsfMicroseconds}};
    json network = json::array();
    json maps = json::object();
    for (std::size_t i = 0; i < config.network.size(); ++i) {
        const auto& tx = config.network[i];
        network.push_back({{"id", tx.station_id},
                           {"lat", tx.location.lat},
                           {"lon", tx.location.lon},
                           {"power_kw", tx.power_kw},
                           {"jitter_m", tx.jitter_m}});
        maps[tx.station_id] = std::filesystem::absolute(config.asf_map_paths.at(i)).lexically_normal().string();
    }
    root["network"] = network;
    root["asf_maps"] = maps;
    const auto& s = config.settings;
    root["noise"] = {{"field_strength_dbuv", s.noise.field_strength_dbuv},
                     {"percentile", s.noise.percentile},
                     {"season", s.noise.season}};
    root["propagation"] = {{"e0_dbuv", s.propagation.e0_dbuv},
                           {"d0_m", s.propagation.d0_m},
                           {"alpha_db_per_km", s.propagation.alpha_db_per_km},
                           {"d_min_m", s.propagation.d_min_m}};
    root["snr_threshold_db"] = s.snr_threshold_db;
    root["sigma0_m"] = s.sigma0_m;
    root["earth_radius_m"] = s.earth_radius;
    root["grid"] = {{"lat_min", config.grid.lat_min},
                    {"lat_max", config.grid.lat_max},
                    {"lon_min", config.grid.lon_min},
                    {"lon_max", config.grid.lon_max},
                    {"step_deg", config.grid.step}};
    json scenarios = json::array();
    for (const auto& sc : config.scenarios) {
        json entry{{"tag", to_string(sc.tag())}};
        if (sc.reference_point()) {
            entry["reference_point"] = point_json(*sc.reference_point());
        }
        scenarios.push_back(entry);
    }
    root["scenarios"] = scenarios;
    root["output_dir"] = std::filesystem::absolute(config.output_dir).lexically_normal().string();
    root["threads"] = config.threads;
    return root.dump(2) + "\n";
}

}  // namespace lorasf
