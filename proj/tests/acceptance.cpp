// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "hetnet/analytic.hpp"
#include "hetnet/config.hpp"
#include "hetnet/montecarlo.hpp"
#include "hetnet/report.hpp"
#include "hetnet/specfun.hpp"
#include "hetnet/sweep.hpp"
#include "oracle/oracle.hpp"

using namespace hetnet;

namespace {

// Pinned tolerances.
constexpr double kAgreementGap = 0.03;
constexpr std::int64_t kAgreementDrops = 20'000;
constexpr double kSirSinrGap = 0.01;
constexpr double kOracleRel = 1e-6;
constexpr int kOraclePoints = 50;
constexpr double kNoCacheGap = 0.02;
constexpr std::int64_t kNoCacheDrops = 50'000;
constexpr double kSpotTol = 1e-9;
constexpr double kM1Independence = 0.005;
constexpr double kHyp2f1Rel = 1e-9;
constexpr double kLaplaceAtZero = 1e-9;
constexpr double kDoubling = 1e-6;

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Criterion = std::function<Outcome()>;

ScenarioDescription preset(const std::string& name) { return load_preset(name).scenario; }

sweep::SweepSpec preset_spec(const std::string& name) { return sweep::parse_sweep_spec(load_preset(name).sweep); }

ScenarioDescription with(ScenarioDescription d, const sweep::Series& s) {
  for (const auto& [name, value] : s.overrides) apply_parameter(d, name, value);
  return d;
}

std::vector<double> log_grid(int n) { return sweep::parse_values(fmt::format("logspace(1e7, 1e10, {})", n), Quantity::rate); }

double rel(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

Outcome engine_agreement() {
  auto spec = preset_spec("fig1");
  spec.values = log_grid(8);
  spec.metrics = {sweep::Metric::success};
  spec.engines = sweep::Engines::both;
  spec.series.clear();
  MonteCarloSettings mc = load_preset("fig1").montecarlo;
  mc.drops = kAgreementDrops;
  const auto result = sweep::run_sweep(preset("fig1"), spec, mc);
  double worst = 0.0;
  for (const auto& rec : result.records) worst = std::max(worst, *rec.metrics[0].abs_diff);
  return {worst <= kAgreementGap, fmt::format("max |analytic - mc| = {:.4f} over 8 points (tol {})", worst, kAgreementGap)};
}

Outcome sir_sinr_gap() {
  sweep::SweepSpec spec;
  spec.values = log_grid(8);
  spec.metrics = {sweep::Metric::sir_sinr_gap};
  spec.engines = sweep::Engines::montecarlo;
  MonteCarloSettings mc = load_preset("table1").montecarlo;
  mc.drops = kAgreementDrops;
  const auto result = sweep::run_sweep(preset("table1"), spec, mc);
  double worst = 0.0;
  for (const auto& rec : result.records) worst = std::max(worst, std::abs(rec.metrics[0].montecarlo->value));
  return {worst <= kSirSinrGap, fmt::format("max paired SIR-SINR gap = {:.4f} (tol {})", worst, kSirSinrGap)};
}

Outcome oracle_laplace() {
  double worst = 0.0;
  std::string where;
  for (double alpha : {2.0, 3.0}) {
    auto d = preset("table1");
    d.tiers[1].pathloss_exp = alpha;
    const auto scn = validate(d);
    std::mt19937_64 rng(static_cast<std::uint64_t>(alpha * 1000));
    std::uniform_int_distribution<int> n(1, scn.tier(Tier::pico).nakagami_order);
    std::uniform_real_distribution<double> r(1.0, 199.0);
    std::uniform_real_distribution<double> logtau(-2.0, 3.0);
    for (int i = 0; i < kOraclePoints; ++i) {
      const int nn = n(rng);
      const double rr = r(rng);
      const double s = scn.eta_l() * std::pow(10.0, logtau(rng)) * std::pow(rr, alpha);
      const double e = rel(analytic::laplace_tier2(nn, s, rr, scn), oracle::laplace_tier2(nn, s, rr, scn));
      if (e > worst) {
        worst = e;
        where = fmt::format("alpha2={} n={} r={:.1f}", alpha, nn, rr);
      }
    }
  }
  return {worst <= kOracleRel,
          fmt::format("max rel error {:.2e} at {} over {} points per exponent (tol {})", worst, where, kOraclePoints, kOracleRel)};
}

Outcome nocache_coverage() {
  const auto scn = validate(preset("table1"));
  Outcome out;
  double worst = 0.0;
  for (double tau : {0.1, 1.0, 10.0}) {
    const double a = analytic::coverage_nocache_tier1(tau, scn);
    const auto m = mc::estimate_nocache_coverage(scn, tau, kNoCacheDrops, 1);
    worst = std::max(worst, std::abs(a - m.mean));
  }
  const double spot = analytic::coverage_nocache_tier1(1.0, scn);
  const double want = 1.0 / (1.0 + std::numbers::pi / 4.0);
  out.pass = worst <= kNoCacheGap && std::abs(spot - want) <= kSpotTol;
  out.detail = fmt::format("max |closed form - mc| = {:.4f} (tol {}); tau=1 value {:.10f} vs {:.10f}", worst,
                           kNoCacheGap, spot, want);
  return out;
}

double success(const ScenarioDescription& d, double r_th) {
  return analytic::success_probability(r_th, validate(d)).total;
}

Outcome monotonicity() {
  std::vector<std::string> failures;

  const auto fig1 = preset_spec("fig1");
  for (double r_th : fig1.values) {
    double previous = -1.0;
    for (const auto& s : fig1.series) {
      const double v = success(with(preset("fig1"), s), r_th);
      if (v < previous - 1e-12) failures.push_back(fmt::format("N2 order at r_th={:g}", r_th));
      previous = v;
    }
  }

  const auto fig2 = preset_spec("fig2");
  const auto base2 = preset("fig2");
  const double cbh = base2.backhaul_capacity;
  auto fig2_value = [&](double m1, double p1, double m2, double r_th) {
    auto d = base2;
    apply_parameter(d, "m1", m1);
    apply_parameter(d, "p1", p1);
    apply_parameter(d, "m2", m2);
    return success(d, r_th);
  };
  for (const auto& s : fig2.series) {
    double previous = -1.0;
    for (double m2 : fig2.values) {
      auto d = with(base2, s);
      apply_parameter(d, "m2", m2);
      const double v = success(d, fig2.r_th);
      if (v < previous - 1e-12) failures.push_back(fmt::format("M2 order in {} at m2={}", s.label, m2));
      previous = v;
    }
  }
  double m1_spread = 0.0;
  for (double p1 : {1e5, 1e6, 1e7}) {  // 80, 90, 100 dBm
    for (double m2 : {0.0, 5.0, 10.0}) {
      m1_spread = std::max(m1_spread, std::abs(fig2_value(20, p1, m2, fig2.r_th) - fig2_value(80, p1, m2, fig2.r_th)));
      if (!(fig2_value(80, p1, m2, 2 * cbh) > fig2_value(20, p1, m2, 2 * cbh))) {
        failures.push_back(fmt::format("M1 strict order at p1={:g} m2={}", p1, m2));
      }
      for (double m1 : {20.0, 80.0}) {
        if (fig2_value(m1, 1e7, m2, fig2.r_th) > fig2_value(m1, 1e5, m2, fig2.r_th) + 1e-12) {
          failures.push_back(fmt::format("P1 order at m1={} m2={}", m1, m2));
        }
      }
    }
  }
  if (m1_spread >= kM1Independence) failures.push_back(fmt::format("M1 spread {:.4f}", m1_spread));

  Outcome out{failures.empty(), fmt::format("M1 spread below backhaul {:.2e} (tol {})", m1_spread, kM1Independence)};
  for (const auto& f : failures) out.detail += "; " + f;
  return out;
}

Outcome ase_shape() {
  const auto spec = preset_spec("fig3");
  const double lo = 1e7;
  const double hi = 1e10;
  std::vector<double> argmax;
  bool interior = true;
  for (int k : {0, 1}) {  // lambda2 = 10 and 30 per disc
    const auto best = analytic::optimal_rate_threshold(validate(with(preset("fig3"), spec.series[k])), lo, hi);
    const auto scn = validate(with(preset("fig3"), spec.series[k]));
    interior = interior && best.value > analytic::ase(lo, scn) && best.value > analytic::ase(hi, scn) &&
               best.r_th > lo && best.r_th < hi;
    argmax.push_back(best.r_th);
  }
  return {interior && argmax[1] < argmax[0],
          fmt::format("argmax {:.3e} (10 per disc) vs {:.3e} (30 per disc), interior={}", argmax[0], argmax[1], interior)};
}

Outcome carrier_comparison() {
  const auto spec = preset_spec("fig3");
  std::vector<std::pair<std::string, double>> peaks;
  for (std::size_t k = 2; k < spec.series.size(); ++k) {
    const auto best = analytic::optimal_rate_threshold(validate(with(preset("fig3"), spec.series[k])), 1e7, 1e10);
    peaks.emplace_back(spec.series[k].label, best.value);
  }
  const auto top = std::max_element(peaks.begin(), peaks.end(), [](auto& a, auto& b) { return a.second < b.second; });
  std::string detail;
  for (const auto& [label, v] : peaks) detail += fmt::format("{}: {:.3e}  ", label, v);
  return {top->first.starts_with("carrier_freq=73GHz"), detail};
}

Outcome numerics() {
  double worst_2f1 = 0.0;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> alpha(2.05, 6.0);
  std::uniform_int_distribution<int> b(1, 10);
  std::uniform_real_distribution<double> logz(-8.0, 6.0);
  for (int i = 0; i < 200; ++i) {
    const double delta = 2.0 / alpha(rng);
    const int bb = b(rng);
    const double z = -std::pow(10.0, logz(rng));
    worst_2f1 = std::max(worst_2f1, rel(specfun::gauss_2f1(-delta, bb, 1.0 - delta, z), oracle::hyp2f1_shifted_c(-delta, bb, z)));
  }
  std::uniform_real_distribution<double> ab(-0.9, 2.5);
  std::uniform_real_distribution<double> cc(0.5, 4.0);
  for (int i = 0; i < 30; ++i) {
    const double a = ab(rng);
    const double bb = ab(rng);
    const double c = std::max(cc(rng), std::max(a, bb) + 0.25);  // Euler representation needs c > b > 0
    const double z = -std::pow(10.0, logz(rng) / 3.0);
    if (bb <= 0.0) continue;
    worst_2f1 = std::max(worst_2f1, rel(specfun::gauss_2f1(a, bb, c, z), oracle::hyp2f1_euler(a, bb, c, z)));
  }

  double worst_zero = 0.0;
  for (const char* name : {"table1", "fig1", "fig3"}) {
    const auto scn = validate(preset(name));
    for (double r : {1.0, 37.0, 150.0}) {
      worst_zero = std::max(worst_zero, std::abs(analytic::laplace_tier1(0.0, r, scn) - 1.0));
      for (int n = 1; n <= scn.tier(Tier::pico).nakagami_order; ++n) {
        worst_zero = std::max(worst_zero, std::abs(analytic::laplace_tier2(n, 0.0, r, scn) - 1.0));
      }
    }
  }

  double worst_doubling = 0.0;
  for (const char* name : {"table1", "fig1"}) {
    auto d = preset(name);
    const auto base = validate(d);
    d.quadrature_u1 *= 2;
    d.quadrature_u2 *= 2;
    const auto fine = validate(d);
    for (double r_th : log_grid(4)) {
      worst_doubling = std::max(worst_doubling, std::abs(analytic::success_probability(r_th, base).total -
                                                         analytic::success_probability(r_th, fine).total));
    }
  }
  return {worst_2f1 <= kHyp2f1Rel && worst_zero <= kLaplaceAtZero && worst_doubling < kDoubling,
          fmt::format("2F1 rel {:.2e} (tol {}); |L(0) - 1| {:.2e} (tol {}); doubling {:.2e} (tol {})", worst_2f1,
                      kHyp2f1Rel, worst_zero, kLaplaceAtZero, worst_doubling, kDoubling)};
}

Outcome determinism() {
  auto spec = preset_spec("fig1");
  spec.values = log_grid(3);
  MonteCarloSettings mc = load_preset("fig1").montecarlo;
  mc.drops = 2000;
  mc.seed = 20261014;
  std::vector<std::string> outputs;
  for (int threads : {1, 1, 2, 3, 8}) {
    std::ostringstream s;
    report::write_csv(s, report::to_table(sweep::run_sweep(preset("fig1"), spec, mc, threads)));
    outputs.push_back(s.str());
  }
  const bool same = std::all_of(outputs.begin(), outputs.end(), [&](const auto& o) { return o == outputs[0]; });
  return {same, fmt::format("{} byte CSV identical across thread counts 1, 1, 2, 3, 8: {}", outputs[0].size(), same)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, Criterion>> criteria = {
      {"analytic vs Monte Carlo success", engine_agreement},
      {"interference-limited SIR/SINR gap", sir_sinr_gap},
      {"tier-2 Laplace transform vs 2-D integration", oracle_laplace},
      {"no-cache macro coverage", nocache_coverage},
      {"monotonicity in N2, M2, M1, P1", monotonicity},
      {"ASE interior maximum and argmax shift", ase_shape},
      {"73 GHz carrier has the largest peak ASE", carrier_comparison},
      {"special functions and quadrature", numerics},
      {"determinism across thread counts", determinism},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome out;
    try {
      out = criteria[k].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    failed += out.pass ? 0 : 1;
    std::printf("%s %zu %s: %s\n", out.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
