#pragma once

// System-level Monte Carlo of the two-tier network seen by a typical user at
// the origin. Each drop gets its own generator seeded from (seed, drop
// index), so estimates do not depend on how drops are spread over threads.

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string_view>
#include <vector>

#include "hetnet/netmodel.hpp"

namespace hetnet::mc {

using Rng = std::mt19937_64;

/// Identity of the per-drop stream construction, recorded in outputs.
inline constexpr std::string_view kGeneratorName = "mt19937_64/seed_seq(seed,drop)";

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

enum class Mode { association, server, blocked };

struct DropOutcome {
  int requested_rank = 0;
  Tier serving_tier = Tier::macro;
  double serving_distance = 0.0;
  Mode mode = Mode::association;
  double sinr = 0.0;
  double sir = 0.0;
  double rate = 0.0;
  bool success = false;
  bool success_sir = false;     // same drop with receiver noise removed
  Tier maxrp_tier = Tier::macro;  // Max-RP winner ignoring cache contents
};

struct McEstimate {
  double mean = 0.0;
  double half_width_95 = 0.0;
  std::int64_t n_drops = 0;
  std::uint64_t seed = 0;
  std::int64_t resampled_windows = 0;
};

struct GapEstimate {
  McEstimate with_noise;
  McEstimate without_noise;
  double gap() const { return without_noise.mean - with_noise.mean; }
};

struct SimOptions {
  /// Macro window radius in units of 1/sqrt(pi lambda_1).
  double window_factor = 10.0;
  /// 0 picks HETNET_THREADS or the hardware concurrency.
  int threads = 0;
};

Rng drop_stream(std::uint64_t seed, std::uint64_t drop_index);

/// Worker count used when SimOptions::threads is 0.
int default_thread_count();

std::vector<Point2> sample_ppp(double density, double radius, Rng& rng);

/// |h|^2: unit-mean exponential (macro) or Gamma(N, 1/N) (pico).
double sample_channel_power(Tier tier, const Scenario& scn, Rng& rng);

/// Array gain toward an interfering pico BS, omega ~ U[-d/lambda, d/lambda].
double sample_interferer_gain(const Scenario& scn, Rng& rng);

double macro_window_radius(const Scenario& scn, const SimOptions& options);

/// One request of the typical user. `resampled` counts empty macro windows.
DropOutcome simulate_drop(const Scenario& scn, double r_th, Rng& rng, const SimOptions& options = {},
                          std::int64_t* resampled = nullptr);

/// All drops for (seed, 0..n_drops-1), in drop order.
std::vector<DropOutcome> run_drops(const Scenario& scn, double r_th, std::int64_t n_drops,
                                   std::uint64_t seed, const SimOptions& options = {},
                                   std::int64_t* resampled = nullptr);

/// Mean and 1.96 * sqrt(sample variance / n) of per-drop values, using
/// pairwise summation in drop order.
McEstimate summarize(const std::vector<double>& values, std::uint64_t seed);

McEstimate estimate_success(const Scenario& scn, double r_th, std::int64_t n_drops, std::uint64_t seed,
                            const SimOptions& options = {});

/// Per-drop rate-weighted area spectral efficiency whose mean matches the
/// analytic ASE expression.
McEstimate estimate_ase(const Scenario& scn, double r_th, std::int64_t n_drops, std::uint64_t seed,
                        const SimOptions& options = {});

GapEstimate estimate_sir_sinr_gap(const Scenario& scn, double r_th, std::int64_t n_drops,
                                  std::uint64_t seed, const SimOptions& options = {});

/// Fraction of drops whose content-agnostic Max-RP winner is `tier`.
McEstimate estimate_association(const Scenario& scn, Tier tier, std::int64_t n_drops, std::uint64_t seed,
                                const SimOptions& options = {});

/// SIR coverage P[SIR > tau] of the nearest macro BS, caching ignored.
McEstimate estimate_nocache_coverage(const Scenario& scn, double tau, std::int64_t n_drops,
                                     std::uint64_t seed, const SimOptions& options = {});

/// Newline-delimited JSON records, one per drop.
void write_drop_trace(std::ostream& out, const std::vector<DropOutcome>& drops);

}  // namespace hetnet::mc
