#pragma once

// Parameter sweeps over a base scenario, evaluated with the analytic engine,
// the Monte Carlo engine, or both.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hetnet/config.hpp"
#include "hetnet/montecarlo.hpp"
#include "hetnet/netmodel.hpp"

namespace hetnet::sweep {

enum class Metric { success, ase, sir_sinr_gap, association };
enum class Engines { analytic, montecarlo, both };

std::string_view metric_name(Metric m);
Metric parse_metric(std::string_view name);
std::string_view engines_name(Engines e);
/// Accepts analytic, mc, montecarlo, both.
Engines parse_engines(std::string_view name);

inline bool uses_analytic(Engines e) { return e != Engines::montecarlo; }
inline bool uses_montecarlo(Engines e) { return e != Engines::analytic; }

/// Axes that can be swept: r_th plus the scenario parameters m1, m2, n2, p1,
/// lambda2, carrier_freq.
bool is_axis(std::string_view name);

struct Series {
  std::string label;  // "base" when there are no overrides
  std::vector<std::pair<std::string, double>> overrides;
};

struct SweepSpec {
  std::string axis = "r_th";
  std::vector<double> values;
  std::vector<Metric> metrics{Metric::success};
  Engines engines = Engines::analytic;
  double r_th = 1e8;  // fixed threshold when the axis is not r_th
  std::vector<Series> series;
};

/// "logspace(a, b, n)", "linspace(a, b, n)" or a comma-separated list, each
/// number optionally carrying a unit suffix of `kind`.
std::vector<double> parse_values(std::string_view text, Quantity kind);

/// Interprets [sweep] entries. Unknown keys, unknown axes and malformed
/// values raise ConfigError naming the offending entry.
SweepSpec parse_sweep_spec(const std::vector<std::pair<std::string, std::string>>& entries);

/// Structural checks: non-empty strictly monotone values, known axis and
/// override names, integer values for integer parameters.
void check_sweep_spec(const SweepSpec& spec);

struct EngineValue {
  double value = 0.0;
  std::optional<double> half_width_95;  // Monte Carlo only
};

struct MetricRecord {
  Metric metric = Metric::success;
  std::optional<EngineValue> analytic;
  std::optional<EngineValue> montecarlo;
  std::optional<double> abs_diff;  // present when both engines ran
};

struct PointRecord {
  std::string series;
  std::string axis;
  double axis_value = 0.0;
  double r_th = 0.0;
  std::vector<MetricRecord> metrics;
  std::int64_t n_drops = 0;
  std::uint64_t seed = 0;
  int quadrature_u1 = 0;
  int quadrature_u2 = 0;
  std::string scenario_hash;
  std::int64_t resampled_windows = 0;
};

struct PointOptions {
  Engines engines = Engines::analytic;
  std::vector<Metric> metrics{Metric::success};
  MonteCarloSettings montecarlo;
  int threads = 0;
};

/// Evaluates the requested metrics at one threshold. Monte Carlo metrics are
/// all read off one shared set of drops.
PointRecord run_point(const Scenario& scn, double r_th, const PointOptions& options);

struct SeriesSummary {
  std::string label;
  std::optional<double> max_ase;  // analytic when available, else Monte Carlo
  std::optional<double> max_ase_at;
  std::optional<double> max_gap;  // largest analytic-vs-MC difference over all metrics
};

struct SweepResult {
  SweepSpec spec;
  ScenarioDescription base;
  std::string base_hash;
  MonteCarloSettings montecarlo;
  std::vector<PointRecord> records;  // series order, then axis order
  std::vector<SeriesSummary> summaries;
};

/// Every point scenario is built and validated before any evaluation, so
/// configuration problems surface as ConfigError up front. Evaluation errors
/// are rethrown as specfun::EvaluationError naming the point.
SweepResult run_sweep(const ScenarioDescription& base, const SweepSpec& spec, const MonteCarloSettings& mc,
                      int threads = 0);

}  // namespace hetnet::sweep
