// hetnet: analytic evaluation, simulation, sweeps and comparisons for the
// cache-enabled two-tier sub-6 GHz / mmWave network.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "hetnet/analytic.hpp"
#include "hetnet/config.hpp"
#include "hetnet/montecarlo.hpp"
#include "hetnet/report.hpp"
#include "hetnet/specfun.hpp"
#include "hetnet/sweep.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct Common {
  std::string config;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> drops;
  std::string out;
  std::string format = "csv";
  std::string engines;
};

void add_common(CLI::App* cmd, Common& c) {
  auto* cfg = cmd->add_option("--config", c.config, "Scenario file (INI)");
  auto* pre = cmd->add_option("--preset", c.preset, "Built-in scenario: table1, fig1, fig2, fig3");
  cfg->excludes(pre);
  cmd->add_option("--seed", c.seed, "Monte Carlo seed");
  cmd->add_option("--drops", c.drops, "Monte Carlo drops per point")->check(CLI::PositiveNumber);
  cmd->add_option("--out", c.out, "Output file (default: stdout)");
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

hetnet::ConfigBundle load(const Common& c) {
  hetnet::ConfigBundle bundle;
  if (!c.config.empty()) {
    bundle = hetnet::load_config_file(c.config);
  } else if (!c.preset.empty()) {
    bundle = hetnet::load_preset(c.preset);
  } else {
    throw hetnet::ConfigError("one of --config or --preset is required");
  }
  if (c.seed) bundle.montecarlo.seed = *c.seed;
  if (c.drops) bundle.montecarlo.drops = *c.drops;
  hetnet::validate(bundle.scenario);
  return bundle;
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw hetnet::ConfigError("cannot write '" + c.out + "'");
  f << text;
}

std::string render(const Common& c, const hetnet::sweep::SweepResult& result) {
  std::ostringstream s;
  if (c.format == "json") {
    hetnet::report::write_json(s, result);
  } else {
    hetnet::report::write_csv(s, hetnet::report::to_table(result));
  }
  return s.str();
}

hetnet::sweep::SweepSpec single_point(double r_th, hetnet::sweep::Engines engines) {
  hetnet::sweep::SweepSpec spec;
  spec.axis = "r_th";
  spec.values = {r_th};
  spec.engines = engines;
  spec.metrics = {hetnet::sweep::Metric::success, hetnet::sweep::Metric::ase, hetnet::sweep::Metric::association};
  if (hetnet::sweep::uses_montecarlo(engines)) spec.metrics.push_back(hetnet::sweep::Metric::sir_sinr_gap);
  return spec;
}

hetnet::sweep::SweepSpec sweep_spec(const Common& c, const hetnet::ConfigBundle& bundle) {
  if (bundle.sweep.empty()) throw hetnet::ConfigError("configuration has no [sweep] section");
  auto spec = hetnet::sweep::parse_sweep_spec(bundle.sweep);
  if (!c.engines.empty()) spec.engines = hetnet::sweep::parse_engines(c.engines);
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Success probability and area spectral efficiency of a cache-enabled sub-6 GHz / mmWave HetNet"};
  app.require_subcommand(1);

  Common c;
  std::string rth_text = "100Mbps";
  std::string lo_text = "10Mbps";
  std::string hi_text = "10Gbps";
  std::string input;
  std::string trace;

  auto* analytic_cmd = app.add_subcommand("analytic", "Evaluate the analytic model at one rate threshold");
  add_common(analytic_cmd, c);
  analytic_cmd->add_option("--rth", rth_text, "Rate threshold, e.g. 100Mbps");

  auto* simulate_cmd = app.add_subcommand("simulate", "Monte Carlo estimate at one rate threshold");
  add_common(simulate_cmd, c);
  simulate_cmd->add_option("--rth", rth_text, "Rate threshold, e.g. 100Mbps");
  simulate_cmd->add_option("--engines", c.engines, "analytic, mc or both")
      ->check(CLI::IsMember({"analytic", "mc", "montecarlo", "both"}));
  simulate_cmd->add_option("--trace", trace, "Write per-drop records (JSON lines) to this file");

  auto* sweep_cmd = app.add_subcommand("sweep", "Run the [sweep] section of a scenario");
  add_common(sweep_cmd, c);
  sweep_cmd->add_option("--engines", c.engines, "Override the engines of the sweep")
      ->check(CLI::IsMember({"analytic", "mc", "montecarlo", "both"}));

  auto* compare_cmd = app.add_subcommand("compare", "Analytic vs Monte Carlo gaps of a sweep");
  add_common(compare_cmd, c);
  compare_cmd->add_option("--input", input, "Sweep CSV produced with engines=both; runs the sweep when omitted");

  auto* optimize_cmd = app.add_subcommand("optimize", "Rate threshold maximizing the analytic ASE");
  add_common(optimize_cmd, c);
  optimize_cmd->add_option("--lo", lo_text, "Lower search bound");
  optimize_cmd->add_option("--hi", hi_text, "Upper search bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (analytic_cmd->parsed()) {
      const auto bundle = load(c);
      const double r_th = hetnet::parse_quantity(rth_text, hetnet::Quantity::rate);
      const auto result = hetnet::sweep::run_sweep(bundle.scenario, single_point(r_th, hetnet::sweep::Engines::analytic),
                                                   bundle.montecarlo);
      emit(c, render(c, result));
    } else if (simulate_cmd->parsed()) {
      const auto bundle = load(c);
      const double r_th = hetnet::parse_quantity(rth_text, hetnet::Quantity::rate);
      const auto engines =
          c.engines.empty() ? hetnet::sweep::Engines::montecarlo : hetnet::sweep::parse_engines(c.engines);
      if (!hetnet::sweep::uses_montecarlo(engines)) throw hetnet::ConfigError("simulate needs engines mc or both");
      const auto result = hetnet::sweep::run_sweep(bundle.scenario, single_point(r_th, engines), bundle.montecarlo);
      if (!trace.empty()) {
        const auto scn = hetnet::validate(bundle.scenario);
        const auto drops = hetnet::mc::run_drops(scn, r_th, bundle.montecarlo.drops, bundle.montecarlo.seed,
                                                 {bundle.montecarlo.window_factor, 0});
        std::ofstream f(trace, std::ios::binary);
        if (!f) throw hetnet::ConfigError("cannot write '" + trace + "'");
        hetnet::mc::write_drop_trace(f, drops);
      }
      emit(c, render(c, result));
    } else if (sweep_cmd->parsed()) {
      const auto bundle = load(c);
      const auto result = hetnet::sweep::run_sweep(bundle.scenario, sweep_spec(c, bundle), bundle.montecarlo);
      emit(c, render(c, result));
    } else if (compare_cmd->parsed()) {
      hetnet::report::Table table;
      if (!input.empty()) {
        std::ifstream f(input, std::ios::binary);
        if (!f) throw hetnet::ConfigError("cannot open '" + input + "'");
        table = hetnet::report::read_csv(f);
      } else {
        const auto bundle = load(c);
        auto spec = sweep_spec(c, bundle);
        spec.engines = hetnet::sweep::Engines::both;
        table = hetnet::report::to_table(hetnet::sweep::run_sweep(bundle.scenario, spec, bundle.montecarlo));
      }
      std::ostringstream s;
      hetnet::report::write_comparison(s, hetnet::report::compare_report(table));
      emit(c, s.str());
    } else if (optimize_cmd->parsed()) {
      const auto bundle = load(c);
      const auto scn = hetnet::validate(bundle.scenario);
      const double lo = hetnet::parse_quantity(lo_text, hetnet::Quantity::rate);
      const double hi = hetnet::parse_quantity(hi_text, hetnet::Quantity::rate);
      if (!(lo > 0.0 && lo < hi)) throw hetnet::ConfigError("optimize needs 0 < --lo < --hi");
      const auto best = hetnet::analytic::optimal_rate_threshold(scn, lo, hi);
      emit(c, fmt::format("r_th,ase,scenario_hash\n{},{},{}\n", best.r_th, best.value,
                          hetnet::format_hash(hetnet::scenario_hash(bundle.scenario))));
    }
  } catch (const hetnet::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const hetnet::ValidationError& e) {
    std::cerr << "invalid scenario: " << e.what() << '\n';
    return kExitConfig;
  } catch (const hetnet::report::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
