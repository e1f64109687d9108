#include "lorasf/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "lorasf/errors.hpp"

namespace lorasf {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Tolerance absorbing decimal step sizes when counting lattice points.
constexpr double kLatticeSlack = 1e-9;

std::size_t axis_count(double lo, double hi, double step) {
    return static_cast<std::size_t>(std::floor((hi - lo) / step + kLatticeSlack)) + 1;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::string to_string(ScenarioTag tag) {
    switch (tag) {
        case ScenarioTag::S0:
            return "S0";
        case ScenarioTag::S1:
            return "S1";
        case ScenarioTag::S2:
            return "S2";
    }
    return "?";
}

ScenarioTag parse_scenario_tag(const std::string& text) {
    if (text == "S0") return ScenarioTag::S0;
    if (text == "S1") return ScenarioTag::S1;
    if (text == "S2") return ScenarioTag::S2;
    throw ValueError("unknown scenario tag '" + text + "' (expected S0, S1 or S2)");
}

Scenario Scenario::wide_area(const GeoPoint& reference_point) {
    validate(reference_point);
    return Scenario(ScenarioTag::S2, reference_point);
}

Scenario Scenario::make(ScenarioTag tag, std::optional<GeoPoint> reference_point) {
    if (tag == ScenarioTag::S2) {
        if (!reference_point) {
            throw ValueError("scenario S2 requires a reference point");
        }
        return wide_area(*reference_point);
    }
    if (reference_point) {
        throw ValueError("scenario " + to_string(tag) + " does not take a reference point");
    }
    return Scenario(tag, std::nullopt);
}

std::vector<double> residual_vector(const Scenario& scenario, std::span<const double> asf_true_us,
                                    std::optional<std::span<const double>> asf_ref_us) {
    switch (scenario.tag()) {
        case ScenarioTag::S0:
            return {asf_true_us.begin(), asf_true_us.end()};
        case ScenarioTag::S1:
            return std::vector<double>(asf_true_us.size(), 0.0);
        case ScenarioTag::S2: {
            if (!asf_ref_us) {
                throw MissingReference("scenario S2 needs reference ASF values");
            }
            if (asf_ref_us->size() != asf_true_us.size()) {
                throw ValueError("reference ASF vector is not station-aligned");
            }
            std::vector<double> r(asf_true_us.size());
            for (std::size_t i = 0; i < r.size(); ++i) {
                r[i] = asf_true_us[i] - (*asf_ref_us)[i];
            }
            return r;
        }
    }
    return {};
}

std::size_t GridSpec::n_lat() const { return axis_count(lat_min, lat_max, step); }
std::size_t GridSpec::n_lon() const { return axis_count(lon_min, lon_max, step); }

GeoPoint GridSpec::point(std::size_t i_lat, std::size_t i_lon) const {
    return {lat_min + static_cast<double>(i_lat) * step, lon_min + static_cast<double>(i_lon) * step};
}

void validate(const GridSpec& spec) {
    const bool finite = std::isfinite(spec.lat_min) && std::isfinite(spec.lat_max) &&
                        std::isfinite(spec.lon_min) && std::isfinite(spec.lon_max) &&
                        std::isfinite(spec.step);
    if (!finite) {
        throw ValueError("grid bounds and step must be finite");
    }
    if (!(spec.step > 0.0)) {
        throw ValueError("grid step must be > 0");
    }
    if (!(spec.lat_min < spec.lat_max) || !(spec.lon_min < spec.lon_max)) {
        throw ValueError("grid requires lat_min < lat_max and lon_min < lon_max");
    }
    if (spec.lat_min < -90.0 || spec.lat_max > 90.0 || spec.lon_min < -180.0 || spec.lon_max >= 180.0) {
        throw ValueError("grid bounds outside valid latitude/longitude ranges");
    }
    if ((spec.lat_max - spec.lat_min) / spec.step > kMaxGridCellsPerAxis ||
        (spec.lon_max - spec.lon_min) / spec.step > kMaxGridCellsPerAxis) {
        throw ValueError("grid exceeds 5000 cells per axis");
    }
}

void validate(const Environment& env) {
    validate_network(env.network);
    validate(env.settings.propagation);
    if (!(std::isfinite(env.settings.sigma0_m) && env.settings.sigma0_m > 0.0)) {
        throw ValueError("sigma0 must be > 0");
    }
    if (!std::isfinite(env.settings.snr_threshold_db)) {
        throw ValueError("SNR threshold must be finite");
    }
    if (!std::isfinite(env.settings.noise.field_strength_dbuv)) {
        throw ValueError("noise field strength must be finite");
    }
    if (!(std::isfinite(env.settings.earth_radius) && env.settings.earth_radius > 0.0)) {
        throw ValueError("earth radius must be > 0");
    }
    if (env.maps.size() != env.network.size()) {
        throw ValueError("every station needs exactly one ASF map");
    }
    for (const auto& map : env.maps) {
        if (map.units() != kUnitsMicroseconds) {
            throw ValueError("ASF map '" + map.station_id() + "' must be in microseconds");
        }
    }
}

std::optional<std::vector<double>> reference_values(const Scenario& scenario, const Environment& env) {
    if (scenario.tag() != ScenarioTag::S2) {
        return std::nullopt;
    }
    std::vector<double> ref;
    ref.reserve(env.maps.size());
    for (const auto& map : env.maps) {
        ref.push_back(reference_asf(map, *scenario.reference_point(), env.settings.earth_radius));
    }
    return ref;
}

AccResult evaluate_point(const GeoPoint& p, const Scenario& scenario, const Environment& env,
                         const std::optional<std::vector<double>>& asf_ref) {
    if (scenario.tag() == ScenarioTag::S2 && !asf_ref) {
        throw MissingReference("scenario S2 evaluated without reference ASF values");
    }
    const MeasurementModel model = measurement_model(env.network, p, env.settings);

    std::vector<GeoPoint> stations;
    std::vector<double> weights;
    std::vector<double> asf_true;
    std::vector<double> asf_ref_used;
    for (std::size_t s = 0; s < env.network.size(); ++s) {
        if (!model[s].usable) {
            continue;
        }
        const AsfSample sample = interpolate_asf(env.maps[s], p);
        if (!sample.valid) {
            continue;
        }
        stations.push_back(env.network[s].location);
        weights.push_back(model[s].weight);
        asf_true.push_back(sample.value);
        if (asf_ref) {
            asf_ref_used.push_back((*asf_ref)[s]);
        }
    }
    if (stations.size() < 3) {
        return AccResult::no_fix("insufficient stations");
    }

    GeometryMatrix g;
    try {
        g = build_geometry_matrix(p, stations, env.settings.earth_radius);
    } catch (const StationTooClose&) {
        return AccResult::no_fix("station too close");
    }

    std::optional<std::span<const double>> ref_span;
    if (asf_ref) {
        ref_span = std::span<const double>(asf_ref_used);
    }
    const auto residuals = residual_vector(scenario, asf_true, ref_span);
    return solve_acc(g, weights, residuals);
}

GridStats compute_stats(std::span<const AccResult> cells) {
    GridStats stats;
    std::vector<double> values;
    values.reserve(cells.size());
    double sum = 0.0;
    for (const auto& c : cells) {
        if (c.ok()) {
            values.push_back(c.acc);
            sum += c.acc;
        }
    }
    stats.ok_cell_count = values.size();
    stats.nofix_cell_count = cells.size() - values.size();
    if (values.empty()) {
        return stats;
    }
    AccStats acc;
    acc.mean = sum / static_cast<double>(values.size());
    std::sort(values.begin(), values.end());
    acc.median = quantile_sorted(values, 0.5);
    acc.p95 = quantile_sorted(values, 0.95);
    acc.max = values.back();
    stats.acc = acc;
    return stats;
}

ScenarioResult evaluate_grid(const GridSpec& spec, const Scenario& scenario, const Environment& env,
                             unsigned threads) {
    validate(spec);
    validate(env);
    const auto asf_ref = reference_values(scenario, env);

    const std::size_t n_lat = spec.n_lat();
    const std::size_t n_lon = spec.n_lon();
    std::vector<AccResult> cells(n_lat * n_lon);

    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n_lat));

    // Each worker claims whole rows and writes into its own slots, so the lattice is
    // assembled in row-major order regardless of scheduling.
    std::atomic<std::size_t> next_row{0};
    auto worker = [&] {
        for (std::size_t i = next_row++; i < n_lat; i = next_row++) {
            for (std::size_t j = 0; j < n_lon; ++j) {
                cells[i * n_lon + j] = evaluate_point(spec.point(i, j), scenario, env, asf_ref);
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }

    ScenarioResult result{scenario, spec, std::move(cells), {}};
    result.stats = compute_stats(result.cells);
    return result;
}

AsfMap acc_raster(const ScenarioResult& result) {
    std::vector<double> values;
    values.reserve(result.cells.size());
    for (const auto& c : result.cells) {
        values.push_back(c.ok() ? c.acc : kNaN);
    }
    return AsfMap("ACC_" + to_string(result.scenario.tag()), {result.grid.lat_min, result.grid.lon_min},
                  result.grid.step, result.grid.step, result.grid.n_lat(), result.grid.n_lon(),
                  std::move(values), kUnitsMeters);
}

Reduction mean_reduction(double mean_a, double mean_b) {
    Reduction r;
    r.meters = mean_a - mean_b;
    r.percent = mean_a != 0.0 ? 100.0 * r.meters / mean_a : kNaN;
    return r;
}

std::vector<PairComparison> summary_compare(std::span<const ScenarioResult> results) {
    for (const auto& r : results) {
        if (!(r.grid == results.front().grid) || r.cells.size() != results.front().cells.size()) {
            throw GridMismatch("scenario results are not on the same grid");
        }
    }
    std::vector<PairComparison> out;
    for (std::size_t a = 0; a < results.size(); ++a) {
        for (std::size_t b = a + 1; b < results.size(); ++b) {
            double sum_a = 0.0;
            double sum_b = 0.0;
            std::size_t n = 0;
            for (std::size_t k = 0; k < results[a].cells.size(); ++k) {
                const auto& ca = results[a].cells[k];
                const auto& cb = results[b].cells[k];
                if (ca.ok() && cb.ok()) {
                    sum_a += ca.acc;
                    sum_b += cb.acc;
                    ++n;
                }
            }
            PairComparison cmp;
            cmp.common_ok_cells = n;
            const double mean_a = n ? sum_a / static_cast<double>(n) : kNaN;
            const double mean_b = n ? sum_b / static_cast<double>(n) : kNaN;
            const bool a_worse = !(mean_b > mean_a);
            cmp.baseline = a_worse ? results[a].scenario.tag() : results[b].scenario.tag();
            cmp.improved = a_worse ? results[b].scenario.tag() : results[a].scenario.tag();
            cmp.baseline_mean = a_worse ? mean_a : mean_b;
            cmp.improved_mean = a_worse ? mean_b : mean_a;
            cmp.reduction = mean_reduction(cmp.baseline_mean, cmp.improved_mean);
            out.push_back(cmp);
        }
    }
    return out;
}

}  // namespace lorasf
