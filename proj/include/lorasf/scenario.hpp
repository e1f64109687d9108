#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lorasf/asf_map.hpp"
#include "lorasf/geo.hpp"
#include "lorasf/signal_model.hpp"
#include "lorasf/wls.hpp"

namespace lorasf {

enum class ScenarioTag { S0, S1, S2 };

std::string to_string(ScenarioTag tag);
ScenarioTag parse_scenario_tag(const std::string& text);  // throws ValueError

// S0: no spatial ASF correction. S1: local per-point correction. S2: one reference
// value per station applied network-wide.
class Scenario {
public:
    static Scenario no_correction() { return Scenario(ScenarioTag::S0, std::nullopt); }
    static Scenario local_correction() { return Scenario(ScenarioTag::S1, std::nullopt); }
    static Scenario wide_area(const GeoPoint& reference_point);

    // Throws ValueError when the reference point presence does not match the tag.
    static Scenario make(ScenarioTag tag, std::optional<GeoPoint> reference_point);

    ScenarioTag tag() const noexcept { return tag_; }
    const std::optional<GeoPoint>& reference_point() const noexcept { return reference_point_; }

    bool operator==(const Scenario&) const = default;

private:
    Scenario(ScenarioTag tag, std::optional<GeoPoint> ref) : tag_(tag), reference_point_(ref) {}

    ScenarioTag tag_;
    std::optional<GeoPoint> reference_point_;
};

// Per-station residuals in microseconds. asf_ref must be given exactly for S2.
std::vector<double> residual_vector(const Scenario& scenario, std::span<const double> asf_true_us,
                                    std::optional<std::span<const double>> asf_ref_us);

struct GridSpec {
    double lat_min = 33.0;
    double lat_max = 39.0;
    double lon_min = 124.0;
    double lon_max = 131.0;
    double step = 0.05;  // degrees

    std::size_t n_lat() const;
    std::size_t n_lon() const;
    GeoPoint point(std::size_t i_lat, std::size_t i_lon) const;

    bool operator==(const GridSpec&) const = default;
};

inline constexpr std::size_t kMaxGridCellsPerAxis = 5000;

void validate(const GridSpec& spec);  // throws ValueError

// Everything held fixed across scenarios: the network, its ASF maps (aligned by index)
// and the measurement settings.
struct Environment {
    std::vector<TransmitterSpec> network;
    std::vector<AsfMap> maps;
    MeasurementSettings settings;
};

void validate(const Environment& env);  // throws ValueError

// S2 reference values per station (nearest non-NODATA node); empty for S0/S1.
std::optional<std::vector<double>> reference_values(const Scenario& scenario, const Environment& env);

// Stations that are SNR-usable but have no valid ASF sample at p drop out of the fix in
// every scenario.
AccResult evaluate_point(const GeoPoint& p, const Scenario& scenario, const Environment& env,
                         const std::optional<std::vector<double>>& asf_ref);

struct AccStats {
    double mean = 0.0;
    double median = 0.0;
    double p95 = 0.0;
    double max = 0.0;
};

struct GridStats {
    std::size_t ok_cell_count = 0;
    std::size_t nofix_cell_count = 0;
    std::optional<AccStats> acc;  // absent when no cell has a fix
};

// Mean, median and p95 (linear interpolation between order statistics) over OK cells.
GridStats compute_stats(std::span<const AccResult> cells);

struct ScenarioResult {
    Scenario scenario;
    GridSpec grid;
    std::vector<AccResult> cells;  // row-major, south-to-north then west-to-east
    GridStats stats;

    const AccResult& at(std::size_t i_lat, std::size_t i_lon) const {
        return cells.at(i_lat * grid.n_lon() + i_lon);
    }
};

// threads == 0 uses the hardware concurrency. Output does not depend on the thread count.
ScenarioResult evaluate_grid(const GridSpec& spec, const Scenario& scenario, const Environment& env,
                             unsigned threads = 0);

// ACC raster in meters with NA for NoFix cells, named ACC_<tag>.
AsfMap acc_raster(const ScenarioResult& result);

struct Reduction {
    double meters = 0.0;
    double percent = 0.0;  // NaN when the baseline mean is zero
};

// (a - b) and 100 (a - b) / a.
Reduction mean_reduction(double mean_a, double mean_b);

struct PairComparison {
    ScenarioTag baseline;  // larger mean
    ScenarioTag improved;
    double baseline_mean = 0.0;
    double improved_mean = 0.0;
    std::size_t common_ok_cells = 0;
    Reduction reduction;
};

// Every pair of results, compared over cells that are OK in both. The worse scenario
// of each pair is the percentage baseline. Throws GridMismatch on differing grids.
std::vector<PairComparison> summary_compare(std::span<const ScenarioResult> results);

}  // namespace lorasf
