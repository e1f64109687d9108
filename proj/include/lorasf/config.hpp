#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lorasf/scenario.hpp"
#include "lorasf/signal_model.hpp"

namespace lorasf {

inline constexpr const char* kVersion = "0.1.0";

// Wide-area reference point of the bundled config (Incheon reference station).
inline constexpr GeoPoint kIncheonReference{37.449232, 126.593994};

struct RunConfig {
    std::vector<TransmitterSpec> network;
    MeasurementSettings settings;
    GridSpec grid;
    std::vector<Scenario> scenarios;
    std::vector<std::filesystem::path> asf_map_paths;  // aligned with network
    std::filesystem::path output_dir = "out";
    unsigned threads = 0;
};

// Parses a JSON run configuration. Relative paths resolve against base_dir. Unknown
// keys, duplicate station ids, missing or extra ASF map entries, an empty scenario list
// and S2 without a reference point all raise ConfigError naming the offending key.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".");
RunConfig load_config_file(const std::filesystem::path& path);

// Resolved configuration plus constants and version. Feeding it back to parse_config
// reproduces the run.
std::string manifest_json(const RunConfig& config);

}  // namespace lorasf
