#include <exception>
#include <fstream>
#include <ostream>
#include <string>

#include <CLI11.hpp>

#include "lorasf/errors.hpp"
#include "lorasf/run.hpp"
#include "lorasf/synth.hpp"

namespace lorasf {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitDataError = 1;
constexpr int kExitInternal = 2;

struct SynthOptions {
    std::string kind;
    std::string out;
    SynthParams params;
};

void add_synth_options(CLI::App& cmd, SynthOptions& o) {
    auto& p = o.params;
    cmd.add_option("--kind", o.kind, "constant | gradient | bump")->required();
    cmd.add_option("--station", p.station_id, "Station id written to the grid header")->required();
    cmd.add_option("--out", o.out, "Output grid file (stdout when omitted)");
    cmd.add_option("--origin-lat", p.origin.lat, "Latitude of the south-west node")->capture_default_str();
    cmd.add_option("--origin-lon", p.origin.lon, "Longitude of the south-west node")->capture_default_str();
    cmd.add_option("--d-lat", p.d_lat, "Latitude spacing, degrees")->capture_default_str();
    cmd.add_option("--d-lon", p.d_lon, "Longitude spacing, degrees")->capture_default_str();
    cmd.add_option("--n-lat", p.n_lat, "Node count along latitude")->capture_default_str();
    cmd.add_option("--n-lon", p.n_lon, "Node count along longitude")->capture_default_str();
    cmd.add_option("--offset", p.offset_us, "Constant term, microseconds")->capture_default_str();
    cmd.add_option("--grad-lat", p.grad_lat_us_per_deg, "Gradient, us per degree latitude")->capture_default_str();
    cmd.add_option("--grad-lon", p.grad_lon_us_per_deg, "Gradient, us per degree longitude")->capture_default_str();
    cmd.add_option("--anchor-lat", p.anchor.lat, "Latitude where the gradient term is zero")->capture_default_str();
    cmd.add_option("--anchor-lon", p.anchor.lon, "Longitude where the gradient term is zero")->capture_default_str();
    cmd.add_option("--amplitude", p.amplitude_us, "Bump amplitude, microseconds")->capture_default_str();
    cmd.add_option("--center-lat", p.center.lat, "Bump centre latitude")->capture_default_str();
    cmd.add_option("--center-lon", p.center.lon, "Bump centre longitude")->capture_default_str();
    cmd.add_option("--sigma", p.sigma_deg, "Bump width, degrees")->capture_default_str();
}

int run_synth(SynthOptions& o, std::ostream& out) {
    o.params.kind = parse_synth_kind(o.kind);
    const AsfMap map = synthesize_asf_map(o.params);
    if (o.out.empty()) {
        write_asf_map(out, map);
    } else {
        write_asf_map_file(o.out, map);
    }
    return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"eLoran spatial ASF correction accuracy simulator", "lorasf"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    auto* run_cmd = app.add_subcommand("run", "Evaluate ACC grids for every configured scenario");
    run_cmd->add_option("--config", config_path, "Run configuration (JSON)")->required();
    run_cmd->add_option("--out", out_dir, "Output directory (overrides output_dir)");

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate", "Check a configuration and its ASF maps");
    validate_cmd->add_option("--config", validate_path, "Run configuration (JSON)")->required();

    SynthOptions synth;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic ASF map");
    add_synth_options(*synth_cmd, synth);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "lorasf: " << e.what() << '\n';
        return kExitDataError;
    }

    try {
        if (*run_cmd) {
            const RunConfig cfg = load_config_file(config_path);
            std::optional<std::filesystem::path> dir;
            if (!out_dir.empty()) {
                dir = std::filesystem::path(out_dir);
            }
            const RunResults results = run(cfg, dir);
            out << format_summary(results);
        } else if (*validate_cmd) {
            const RunConfig cfg = load_config_file(validate_path);
            const Environment env = load_environment(cfg);
            for (const auto& scenario : cfg.scenarios) {
                reference_values(scenario, env);
            }
            out << "ok: " << cfg.network.size() << " stations, " << cfg.scenarios.size() << " scenarios, grid "
                << cfg.grid.n_lat() << "x" << cfg.grid.n_lon() << '\n';
        } else if (*synth_cmd) {
            return run_synth(synth, out);
        }
    } catch (const Error& e) {
        err << "lorasf: " << e.what() << '\n';
        return kExitDataError;
    } catch (const std::exception& e) {
        err << "lorasf: internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    return kExitOk;
}

}  // namespace lorasf
