#include "lorasf/run.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lorasf/errors.hpp"

namespace lorasf {
namespace {

std::string fixed(double v, int digits) {
    if (std::isnan(v)) {
        return "NA";
    }
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw FormatError("cannot open '" + path.string() + "' for writing");
    }
    out << text;
    if (!out) {
        throw FormatError("write to '" + path.string() + "' failed");
    }
}

}  // namespace

Environment load_environment(const RunConfig& config) {
    Environment env;
    env.network = config.network;
    env.settings = config.settings;
    env.maps.reserve(config.network.size());
    for (std::size_t i = 0; i < config.network.size(); ++i) {
        AsfMap map = load_asf_map_file(config.asf_map_paths.at(i).string());
        const auto& id = config.network[i].station_id;
        if (map.station_id() != id) {
            throw ConfigError("asf_maps." + id, "grid file belongs to station '" + map.station_id() + "'");
        }
        if (map.units() != kUnitsMicroseconds) {
            throw ConfigError("asf_maps." + id, "ASF map must be in microseconds, found '" + map.units() + "'");
        }
        env.maps.push_back(std::move(map));
    }
    validate(env);
    return env;
}

RunResults simulate(const RunConfig& config, const Environment& env) {
    RunResults results;
    for (const auto& scenario : config.scenarios) {
        results.scenarios.push_back(evaluate_grid(config.grid, scenario, env, config.threads));
    }
    results.comparisons = summary_compare(results.scenarios);
    return results;
}

std::string format_summary(const RunResults& results) {
    std::ostringstream out;
    out << "# lorasf " << kVersion << " summary, ACC in meters\n";
    for (const auto& r : results.scenarios) {
        out << "scenario " << to_string(r.scenario.tag());
        if (r.scenario.reference_point()) {
            out << " reference " << fixed(r.scenario.reference_point()->lat, 6) << ' '
                << fixed(r.scenario.reference_point()->lon, 6);
        }
        out << '\n';
        out << "  ok_cells " << r.stats.ok_cell_count << '\n';
        out << "  nofix_cells " << r.stats.nofix_cell_count << '\n';
        if (r.stats.acc) {
            out << "  mean " << fixed(r.stats.acc->mean, 4) << '\n';
            out << "  median " << fixed(r.stats.acc->median, 4) << '\n';
            out << "  p95 " << fixed(r.stats.acc->p95, 4) << '\n';
            out << "  max " << fixed(r.stats.acc->max, 4) << '\n';
        } else {
            out << "  mean NA\n  median NA\n  p95 NA\n  max NA\n";
        }
    }
    for (const auto& c : results.comparisons) {
        out << "compare " << to_string(c.baseline) << " -> " << to_string(c.improved)
            << " common_cells " << c.common_ok_cells << " mean " << fixed(c.baseline_mean, 4) << " -> "
            << fixed(c.improved_mean, 4) << " reduction " << fixed(c.reduction.meters, 4) << " m "
            << fixed(c.reduction.percent, 2) << " %\n";
    }
    return out.str();
}

void write_outputs(const std::filesystem::path& out_dir, const RunConfig& config, const RunResults& results) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw FormatError("cannot create output directory '" + out_dir.string() + "': " + ec.message());
    }
    for (const auto& r : results.scenarios) {
        write_asf_map_file((out_dir / ("acc_" + to_string(r.scenario.tag()) + ".grid")).string(), acc_raster(r));
    }
    write_text(out_dir / "summary.txt", format_summary(results));
    write_text(out_dir / "run_manifest.txt", manifest_json(config));
}

RunResults run(const RunConfig& config, const std::optional<std::filesystem::path>& out_dir) {
    RunConfig resolved = config;
    if (out_dir) {
        resolved.output_dir = *out_dir;
    }
    const Environment env = load_environment(resolved);
    RunResults results = simulate(resolved, env);
    write_outputs(resolved.output_dir, resolved, results);
    return results;
}

}  // namespace lorasf
