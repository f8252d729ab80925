#pragma once

// Analytic success probability and area spectral efficiency under maximum
// average received power (Max-RP) association.
//
// Interference is normalized as in the coverage derivations: transmit power,
// intercept and array size are factored out, so the Laplace transforms take
// s = tau * r^alpha for a serving link at distance r.

#include <functional>
#include <map>
#include <optional>
#include <utility>

#include "hetnet/netmodel.hpp"

namespace hetnet::analytic {

struct CoverageResult {
  double value = 0.0;
  int quadrature_order_used = 0;  // 0 for adaptive radial integration
  Tier tier = Tier::macro;
  std::optional<int> rank;
  bool clamped = false;  // pico alternating sum left [0, 1] and was clamped
};

struct SuccessBreakdown {
  std::map<std::pair<int, Tier>, double> per_rank_per_tier;  // P_f * Theta_{i,f}
  double server_mode = 0.0;
  double total = 0.0;
  bool any_clamped = false;
};

struct RateOptimum {
  double r_th = 0.0;
  double value = 0.0;
};

/// Macro-tier interference transform, interferers outside radius r.
double laplace_tier1(double s, double r, const Scenario& scn);

/// n-th pico-tier interference transform for interferers in (r, R_L],
/// averaged over the random array gain with the Gauss-Chebyshev rule of
/// order u_1. Works for alpha_2 = 2 (closed-form antiderivative) and
/// alpha_2 > 2 (2F1 form).
double laplace_tier2(int n, double s, double r, const Scenario& scn);

/// SIR coverage of a nearest-macro link, 1 / 2F1(-2/a, 1; 1-2/a; -tau).
double coverage_nocache_tier1(double tau, const Scenario& scn);

/// Probability that tier `tier` wins Max-RP with every BS eligible.
double association_prob(Tier tier, const Scenario& scn);

/// Density of the serving distance to a tier-`tier` BS holding file `rank`.
double assoc_distance_pdf(Tier tier, int rank, double r, const Scenario& scn);

CoverageResult coverage_tier1_content(int rank, double tau, const Scenario& scn);

/// Uses the alternating binomial sum built on the Alzer constant eta_L
/// (see specfun::alzer_eta) and an order-u_2 Chebyshev rule over (0, R_L).
CoverageResult coverage_tier2_content(int rank, double tau, const Scenario& scn);

double server_success(double r_th, const Scenario& scn);
SuccessBreakdown success_probability(double r_th, const Scenario& scn);
double ase(double r_th, const Scenario& scn);

/// SINR threshold 2^(R/B) - 1 matching a rate requirement.
double rate_to_sinr_threshold(double r_th, double bandwidth);

/// Log-grid scan followed by golden-section refinement of a function that is
/// unimodal around its grid maximum. Returns lo with value 0 when f <= 0
/// everywhere on the grid. Throws std::domain_error unless 0 <= lo < hi.
RateOptimum maximize_log_unimodal(const std::function<double(double)>& f, double lo, double hi,
                                  int grid_points = 41);

RateOptimum optimal_rate_threshold(const Scenario& scn, double lo, double hi);

}  // namespace hetnet::analytic
