#include "hetnet/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "hetnet/analytic.hpp"
#include "hetnet/specfun.hpp"

namespace hetnet::sweep {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

Quantity axis_quantity(std::string_view axis) {
  return axis == "r_th" ? Quantity::rate : parameter_quantity(axis);
}

std::vector<double> spaced(std::string_view fn, const std::vector<std::string_view>& args, Quantity kind) {
  if (args.size() != 3) throw ConfigError(fmt::format("{}() takes (start, stop, count)", fn));
  const double a = parse_quantity(args[0], kind);
  const double b = parse_quantity(args[1], kind);
  const double count = parse_quantity(args[2], Quantity::integer);
  if (count < 1) throw ConfigError(fmt::format("{}() count must be >= 1", fn));
  const int n = static_cast<int>(count);
  const bool log = fn == "logspace";
  if (log && !(a > 0.0 && b > 0.0)) throw ConfigError("logspace() bounds must be positive");
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double t = n == 1 ? 0.0 : static_cast<double>(k) / (n - 1);
    v[static_cast<std::size_t>(k)] =
        log ? std::pow(10.0, std::log10(a) + t * (std::log10(b) - std::log10(a))) : a + t * (b - a);
  }
  v.front() = a;
  v.back() = n == 1 ? a : b;
  return v;
}

std::string point_name(const std::string& series, const std::string& axis, double value) {
  return fmt::format("series '{}', {}={}", series, axis, value);
}

MetricRecord& metric_slot(PointRecord& rec, Metric m) {
  for (auto& slot : rec.metrics) {
    if (slot.metric == m) return slot;
  }
  rec.metrics.push_back({m, {}, {}, {}});
  return rec.metrics.back();
}

}  // namespace

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::success: return "success";
    case Metric::ase: return "ase";
    case Metric::sir_sinr_gap: return "sir_sinr_gap";
    case Metric::association: return "association";
  }
  return "unknown";
}

Metric parse_metric(std::string_view name) {
  for (Metric m : {Metric::success, Metric::ase, Metric::sir_sinr_gap, Metric::association}) {
    if (metric_name(m) == name) return m;
  }
  throw ConfigError(fmt::format("unknown metric '{}'", name));
}

std::string_view engines_name(Engines e) {
  switch (e) {
    case Engines::analytic: return "analytic";
    case Engines::montecarlo: return "mc";
    case Engines::both: return "both";
  }
  return "unknown";
}

Engines parse_engines(std::string_view name) {
  if (name == "analytic") return Engines::analytic;
  if (name == "mc" || name == "montecarlo") return Engines::montecarlo;
  if (name == "both") return Engines::both;
  throw ConfigError(fmt::format("unknown engines '{}' (expected analytic, mc or both)", name));
}

bool is_axis(std::string_view name) {
  static constexpr std::array<std::string_view, 7> kAxes{"r_th", "m1", "m2", "n2", "p1", "lambda2",
                                                         "carrier_freq"};
  return std::find(kAxes.begin(), kAxes.end(), name) != kAxes.end();
}

std::vector<double> parse_values(std::string_view text, Quantity kind) {
  text = trim(text);
  for (std::string_view fn : {"logspace", "linspace"}) {
    if (text.starts_with(fn)) {
      auto rest = trim(text.substr(fn.size()));
      if (rest.size() < 2 || rest.front() != '(' || rest.back() != ')') {
        throw ConfigError(fmt::format("malformed {}(...) expression '{}'", fn, text));
      }
      return spaced(fn, split(rest.substr(1, rest.size() - 2), ','), kind);
    }
  }
  std::vector<double> values;
  for (auto item : split(text, ',')) {
    if (item.empty()) throw ConfigError(fmt::format("empty entry in value list '{}'", text));
    values.push_back(parse_quantity(item, kind));
  }
  return values;
}

SweepSpec parse_sweep_spec(const std::vector<std::pair<std::string, std::string>>& entries) {
  std::map<std::string, std::string> keys;
  for (const auto& [key, value] : entries) {
    static constexpr std::array<std::string_view, 6> kKeys{"axis", "values", "metrics", "engines", "r_th", "series"};
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
      throw ConfigError(fmt::format("[sweep] unknown key '{}'", key));
    }
    keys[key] = value;
  }

  SweepSpec spec;
  if (auto it = keys.find("axis"); it != keys.end()) spec.axis = std::string(trim(it->second));
  if (!is_axis(spec.axis)) throw ConfigError(fmt::format("[sweep] axis: unknown sweep axis '{}'", spec.axis));

  const auto values = keys.find("values");
  if (values == keys.end()) throw ConfigError("[sweep] values: missing");
  try {
    spec.values = parse_values(values->second, axis_quantity(spec.axis));
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("[sweep] values: {}", e.what()));
  }

  if (auto it = keys.find("metrics"); it != keys.end()) {
    spec.metrics.clear();
    for (auto name : split(it->second, ',')) {
      const Metric m = parse_metric(name);
      if (std::find(spec.metrics.begin(), spec.metrics.end(), m) == spec.metrics.end()) spec.metrics.push_back(m);
    }
  }
  if (auto it = keys.find("engines"); it != keys.end()) spec.engines = parse_engines(trim(it->second));
  if (auto it = keys.find("r_th"); it != keys.end()) spec.r_th = parse_quantity(it->second, Quantity::rate);

  if (auto it = keys.find("series"); it != keys.end()) {
    for (auto entry : split(it->second, ';')) {
      if (entry.empty()) continue;
      Series s;
      s.label = std::string(entry);
      for (auto assignment : split(entry, ',')) {
        const auto eq = assignment.find('=');
        if (eq == std::string_view::npos) {
          throw ConfigError(fmt::format("[sweep] series: expected key=value, got '{}'", assignment));
        }
        const auto name = std::string(trim(assignment.substr(0, eq)));
        if (!is_scenario_parameter(name)) {
          throw ConfigError(fmt::format("[sweep] series: unknown parameter '{}'", name));
        }
        s.overrides.emplace_back(name, parse_quantity(trim(assignment.substr(eq + 1)), parameter_quantity(name)));
      }
      spec.series.push_back(std::move(s));
    }
  }
  check_sweep_spec(spec);
  return spec;
}

void check_sweep_spec(const SweepSpec& spec) {
  if (!is_axis(spec.axis)) throw ConfigError(fmt::format("[sweep] axis: unknown sweep axis '{}'", spec.axis));
  if (spec.values.empty()) throw ConfigError("[sweep] values: empty");
  const bool increasing = spec.values.size() < 2 || spec.values[1] > spec.values[0];
  for (std::size_t k = 1; k < spec.values.size(); ++k) {
    const bool ok = increasing ? spec.values[k] > spec.values[k - 1] : spec.values[k] < spec.values[k - 1];
    if (!ok) throw ConfigError("[sweep] values: must be strictly monotone");
  }
  for (double v : spec.values) {
    if (!std::isfinite(v)) throw ConfigError("[sweep] values: must be finite");
  }
  if (spec.metrics.empty()) throw ConfigError("[sweep] metrics: empty");
  if (!(spec.r_th >= 0.0)) throw ConfigError("[sweep] r_th: must be >= 0");

  auto check_integer = [](std::string_view name, double v, std::string_view where) {
    if (parameter_quantity(name) == Quantity::integer && v != std::floor(v)) {
      throw ConfigError(fmt::format("[sweep] {}: {} must be an integer, got {}", where, name, v));
    }
  };
  if (spec.axis != "r_th") {
    for (double v : spec.values) check_integer(spec.axis, v, "values");
  }
  for (const auto& s : spec.series) {
    for (const auto& [name, value] : s.overrides) {
      if (!is_scenario_parameter(name)) throw ConfigError(fmt::format("[sweep] series: unknown parameter '{}'", name));
      if (name == spec.axis) throw ConfigError(fmt::format("[sweep] series: '{}' is also the sweep axis", name));
      check_integer(name, value, "series");
    }
  }
}

PointRecord run_point(const Scenario& scn, double r_th, const PointOptions& options) {
  PointRecord rec;
  rec.r_th = r_th;
  rec.quadrature_u1 = scn.quadrature_u1();
  rec.quadrature_u2 = scn.quadrature_u2();
  rec.scenario_hash = format_hash(scenario_hash(scn.description()));
  rec.seed = options.montecarlo.seed;
  for (Metric m : options.metrics) metric_slot(rec, m);

  if (uses_analytic(options.engines)) {
    for (auto& slot : rec.metrics) {
      switch (slot.metric) {
        case Metric::success: slot.analytic = EngineValue{analytic::success_probability(r_th, scn).total, {}}; break;
        case Metric::ase: slot.analytic = EngineValue{analytic::ase(r_th, scn), {}}; break;
        case Metric::association: slot.analytic = EngineValue{analytic::association_prob(Tier::pico, scn), {}}; break;
        case Metric::sir_sinr_gap: break;  // no analytic counterpart
      }
    }
  }

  if (uses_montecarlo(options.engines)) {
    mc::SimOptions sim{options.montecarlo.window_factor, options.threads};
    const auto drops = mc::run_drops(scn, r_th, options.montecarlo.drops, options.montecarlo.seed, sim,
                                     &rec.resampled_windows);
    rec.n_drops = static_cast<std::int64_t>(drops.size());
    std::vector<double> values(drops.size());
    for (auto& slot : rec.metrics) {
      for (std::size_t k = 0; k < drops.size(); ++k) {
        const auto& d = drops[k];
        switch (slot.metric) {
          case Metric::success: values[k] = d.success ? 1.0 : 0.0; break;
          case Metric::ase: {
            const auto& t = scn.tier(d.mode == mc::Mode::server ? Tier::macro : d.serving_tier);
            values[k] = d.success ? t.density * r_th / t.bandwidth : 0.0;
            break;
          }
          case Metric::sir_sinr_gap: values[k] = (d.success_sir ? 1.0 : 0.0) - (d.success ? 1.0 : 0.0); break;
          case Metric::association: values[k] = d.maxrp_tier == Tier::pico ? 1.0 : 0.0; break;
        }
      }
      const auto e = mc::summarize(values, options.montecarlo.seed);
      slot.montecarlo = EngineValue{e.mean, e.half_width_95};
    }
  }

  for (auto& slot : rec.metrics) {
    if (slot.analytic && slot.montecarlo) slot.abs_diff = std::abs(slot.analytic->value - slot.montecarlo->value);
  }
  return rec;
}

SweepResult run_sweep(const ScenarioDescription& base, const SweepSpec& spec, const MonteCarloSettings& mc,
                      int threads) {
  check_sweep_spec(spec);
  SweepResult result;
  result.spec = spec;
  result.base = base;
  result.base_hash = format_hash(scenario_hash(base));
  result.montecarlo = mc;

  struct Planned {
    std::string series;
    double axis_value;
    double r_th;
    Scenario scenario;
  };
  std::vector<Planned> plan;
  auto series = spec.series;
  if (series.empty()) series.push_back({"base", {}});
  for (const auto& s : series) {
    for (double v : spec.values) {
      ScenarioDescription desc = base;
      for (const auto& [name, value] : s.overrides) apply_parameter(desc, name, value);
      if (spec.axis != "r_th") apply_parameter(desc, spec.axis, v);
      try {
        plan.push_back({s.label, v, spec.axis == "r_th" ? v : spec.r_th, validate(desc)});
      } catch (const ValidationError& e) {
        throw ConfigError(fmt::format("{}: {}", point_name(s.label, spec.axis, v), e.what()));
      }
    }
  }

  PointOptions options{spec.engines, spec.metrics, mc, threads};
  for (const auto& p : plan) {
    try {
      auto rec = run_point(p.scenario, p.r_th, options);
      rec.series = p.series;
      rec.axis = spec.axis;
      rec.axis_value = p.axis_value;
      result.records.push_back(std::move(rec));
    } catch (const std::exception& e) {
      throw specfun::EvaluationError(fmt::format("{}: {}", point_name(p.series, spec.axis, p.axis_value), e.what()));
    }
  }

  for (const auto& s : series) {
    SeriesSummary summary{s.label, {}, {}, {}};
    for (const auto& rec : result.records) {
      if (rec.series != s.label) continue;
      for (const auto& slot : rec.metrics) {
        if (slot.abs_diff) summary.max_gap = std::max(summary.max_gap.value_or(0.0), *slot.abs_diff);
        if (slot.metric != Metric::ase) continue;
        const auto& v = slot.analytic ? slot.analytic : slot.montecarlo;
        if (v && (!summary.max_ase || v->value > *summary.max_ase)) {
          summary.max_ase = v->value;
          summary.max_ase_at = rec.axis_value;
        }
      }
    }
    result.summaries.push_back(std::move(summary));
  }
  return result;
}

}  // namespace hetnet::sweep
