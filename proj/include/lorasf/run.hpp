#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lorasf/config.hpp"
#include "lorasf/scenario.hpp"

namespace lorasf {

// Loads every station's map and checks it against the config (id match, microsecond units).
Environment load_environment(const RunConfig& config);

struct RunResults {
    std::vector<ScenarioResult> scenarios;
    std::vector<PairComparison> comparisons;
};

RunResults simulate(const RunConfig& config, const Environment& env);

std::string format_summary(const RunResults& results);

// Writes acc_<tag>.grid per scenario, summary.txt and run_manifest.txt into out_dir.
void write_outputs(const std::filesystem::path& out_dir, const RunConfig& config, const RunResults& results);

// Full pipeline. out_dir overrides config.output_dir when given.
RunResults run(const RunConfig& config, const std::optional<std::filesystem::path>& out_dir = std::nullopt);

// Command-line entry point: run, validate and synth. Returns 0 on success, 1 on
// configuration or data errors and 2 on internal errors.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lorasf
