#include "hetnet/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "hetnet/specfun.hpp"

namespace hetnet::analytic {

namespace {

constexpr double kPi = std::numbers::pi;
// exp(-40) bounds the neglected tail mass of every radial density.
constexpr double kTailExponent = 40.0;
constexpr double kRadialRelTol = 1e-12;

double radial_integral(const std::function<double(double)>& f, double upper) {
  using Integrator = boost::math::quadrature::gauss_kronrod<double, 61>;
  return Integrator::integrate(f, 0.0, upper, 20, kRadialRelTol);
}

/// Exponent sum_j p_j lambda_j Phat_j^(2/alpha_j) r^(2 alpha_i / alpha_j)
/// of the Max-RP void probability seen from a tier-i serving BS at r.
double void_exponent(Tier serving, const std::array<int, 2>& placed, double r, const Scenario& scn) {
  const auto& si = scn.tier(serving);
  const double serving_gain = si.n_antennas * si.intercept * si.tx_power;
  double sum = 0.0;
  for (Tier j : {Tier::macro, Tier::pico}) {
    const auto& tj = scn.tier(j);
    const double weight = placed[tier_index(j)] * tj.density;
    if (weight == 0.0) continue;
    if (j == serving) {
      sum += weight * r * r;
      continue;
    }
    const double power_ratio = tj.n_antennas * tj.intercept * tj.tx_power / serving_gain;
    sum += weight * std::pow(power_ratio, 2.0 / tj.pathloss_exp) *
           std::pow(r, 2.0 * si.pathloss_exp / tj.pathloss_exp);
  }
  return kPi * sum;
}

std::array<int, 2> placement_pattern(int rank, const Scenario& scn) {
  return {placement_prob(Tier::macro, rank, scn.cache()), placement_prob(Tier::pico, rank, scn.cache())};
}

double distance_pdf(Tier serving, const std::array<int, 2>& placed, double r, const Scenario& scn) {
  const double own = placed[tier_index(serving)] * scn.tier(serving).density;
  if (own == 0.0 || r < 0.0) return 0.0;
  return 2.0 * kPi * own * r * std::exp(-void_exponent(serving, placed, r, scn));
}

// Normalized pico interference: u_1-node Chebyshev average over the array
// gain of 2 * int_r^{R_L} (1 - (1 + a v^-alpha)^-N) v dv, a = n s G(w) / N.
// The -pi lambda_2 (R_L^2 - r^2) term is folded into the quadrature so the
// transform is exactly 1 at s = 0 and the integrand vanishes at the array
// nulls on the ends of the gain interval.
// The angular average is split at the nulls k/N of the array pattern and the
// order-u1 rule is applied on each lobe, so every panel ends where the
// integrand vanishes. A single rule over [-d/lambda, d/lambda] undersamples
// the dips next to the nulls once s is large.
class PicoInterference {
 public:
  PicoInterference(const Scenario& scn, int order) {
    const auto& pico = scn.tier(Tier::pico);
    alpha_ = pico.pathloss_exp;
    delta_ = 2.0 / alpha_;
    order_ = pico.nakagami_order;
    elements_ = pico.n_antennas;
    density_ = pico.density;
    los_radius_ = scn.blockage().los_radius;
    spacing_ = scn.antenna_spacing_ratio();
    build_panels(specfun::chebyshev_rule(order));
  }

  double laplace(int n, double s, double r) const {
    if (s == 0.0 || density_ == 0.0 || r >= los_radius_) return 1.0;
    if (!std::isfinite(s)) return 0.0;
    double sum = 0.0;
    for (std::size_t k = 0; k < omega_.size(); ++k) sum += weight_[k] * merged(n, s, r, omega_[k]);
    return std::exp(-kPi * density_ / spacing_ * sum);
  }

 private:
  // Nodes and weights for the integral of D over omega in [0, d/lambda].
  void build_panels(const specfun::QuadratureRule& rule) {
    if (elements_ == 1) {  // flat pattern
      omega_.push_back(0.0);
      weight_.push_back(spacing_);
      return;
    }
    const double width = 1.0 / elements_;
    auto panel = [&](double lo, double hi, double scale, bool fold) {
      const double mid = 0.5 * (lo + hi);
      const double half = 0.5 * (hi - lo);
      for (int k = 0; k < rule.order; ++k) {
        const double omega = mid + half * rule.nodes[k];
        if (fold && omega < 0.0) continue;
        const double w = half * rule.weights[k] * scale * (fold && omega > 0.0 ? 2.0 : 1.0);
        omega_.push_back(omega);
        weight_.push_back(w);
      }
    };
    const double main_edge = std::min(spacing_, width);
    // Half of the symmetric main lobe, folded onto omega >= 0.
    panel(-main_edge, main_edge, 0.5, true);
    double lo = main_edge;
    for (int k = 2; lo < spacing_; ++k) {
      const double hi = std::min(spacing_, k * width);
      if (hi == spacing_ && spacing_ == 0.5 && hi < k * width) {
        // G is symmetric about 1/2, so the partial lobe [lo, 1/2] is half of
        // the full lobe [lo, 1 - lo], which again ends on nulls.
        panel(lo, 1.0 - lo, 0.5, false);
      } else {
        panel(lo, hi, 1.0, false);
      }
      lo = hi;
    }
  }

  double merged(int n, double s, double r, double omega) const {
    const double gain = specfun::array_gain(omega, elements_);
    const double a = n * s * gain / order_;
    if (a == 0.0) return 0.0;
    const double rl2 = los_radius_ * los_radius_;
    if (alpha_ == 2.0) {
      return a * (specfun::f_y_shifted(a / rl2, order_) - specfun::f_y_shifted(a / (r * r), order_));
    }
    const double near = specfun::gauss_2f1_minus_one(-delta_, order_, 1.0 - delta_, -a / std::pow(r, alpha_));
    const double far =
        specfun::gauss_2f1_minus_one(-delta_, order_, 1.0 - delta_, -a / std::pow(los_radius_, alpha_));
    return r * r * near - rl2 * far;
  }

  std::vector<double> omega_;
  std::vector<double> weight_;
  double alpha_ = 2.0;
  double delta_ = 1.0;
  int order_ = 1;
  int elements_ = 1;
  double density_ = 0.0;
  double los_radius_ = 0.0;
  double spacing_ = 0.5;
};

double binomial(int n, int k) {
  double c = 1.0;
  for (int j = 1; j <= k; ++j) c = c * (n - k + j) / j;
  return c;
}

double macro_2f1_minus_one(double tau, const Scenario& scn) {
  const double delta = 2.0 / scn.tier(Tier::macro).pathloss_exp;
  return specfun::gauss_2f1_minus_one(-delta, 1.0, 1.0 - delta, -tau);
}

}  // namespace

double rate_to_sinr_threshold(double r_th, double bandwidth) {
  return std::expm1(r_th / bandwidth * std::numbers::ln2);
}

double laplace_tier1(double s, double r, const Scenario& scn) {
  if (!(r > 0.0)) throw std::domain_error("laplace_tier1: r must be positive");
  if (!(s >= 0.0)) throw std::domain_error("laplace_tier1: s must be >= 0");
  const auto& macro = scn.tier(Tier::macro);
  if (s == 0.0 || macro.density == 0.0) return 1.0;
  if (!std::isfinite(s)) return 0.0;
  const double tau_like = s / std::pow(r, macro.pathloss_exp);
  return std::exp(-kPi * macro.density * r * r * macro_2f1_minus_one(tau_like, scn));
}

double laplace_tier2(int n, double s, double r, const Scenario& scn) {
  const auto& pico = scn.tier(Tier::pico);
  if (n < 1 || n > pico.nakagami_order) throw std::domain_error("laplace_tier2: n must lie in [1, N_2^p]");
  if (!(r > 0.0) || r > scn.blockage().los_radius) {
    throw std::domain_error("laplace_tier2: r must lie in (0, R_L]");
  }
  if (pico.pathloss_exp < 2.0) throw std::domain_error("laplace_tier2: alpha_2 must be >= 2");
  if (!(s >= 0.0)) throw std::domain_error("laplace_tier2: s must be >= 0");
  return PicoInterference(scn, scn.quadrature_u1()).laplace(n, s, r);
}

double coverage_nocache_tier1(double tau, const Scenario& scn) {
  if (!(tau >= 0.0)) throw std::domain_error("coverage_nocache_tier1: tau must be >= 0");
  if (!std::isfinite(tau)) return 0.0;
  return 1.0 / (1.0 + macro_2f1_minus_one(tau, scn));
}

double association_prob(Tier tier, const Scenario& scn) {
  const double density = scn.tier(tier).density;
  if (density == 0.0) return 0.0;
  const std::array<int, 2> all{1, 1};
  const double upper = std::sqrt(kTailExponent / (kPi * density));
  return radial_integral([&](double r) { return distance_pdf(tier, all, r, scn); }, upper);
}

double assoc_distance_pdf(Tier tier, int rank, double r, const Scenario& scn) {
  if (!(r >= 0.0)) throw std::domain_error("assoc_distance_pdf: r must be >= 0");
  return distance_pdf(tier, placement_pattern(rank, scn), r, scn);
}

CoverageResult coverage_tier1_content(int rank, double tau, const Scenario& scn) {
  if (!(tau >= 0.0)) throw std::domain_error("coverage_tier1_content: tau must be >= 0");
  CoverageResult result{0.0, 0, Tier::macro, rank, false};
  const auto placed = placement_pattern(rank, scn);
  const auto& macro = scn.tier(Tier::macro);
  if (placed[0] == 0 || macro.density == 0.0 || !std::isfinite(tau)) return result;

  // L_1(tau r^alpha) only depends on r through r^2 once the 2F1 argument
  // reduces to -tau, so its coefficient is computed once.
  const double f_minus_one = tau == 0.0 ? 0.0 : macro_2f1_minus_one(tau, scn);
  const double upper = std::sqrt(kTailExponent / (kPi * macro.density * (1.0 + f_minus_one)));
  result.value = radial_integral(
      [&](double r) {
        const double laplace = std::exp(-kPi * macro.density * r * r * f_minus_one);
        return laplace * distance_pdf(Tier::macro, placed, r, scn);
      },
      upper);
  return result;
}

CoverageResult coverage_tier2_content(int rank, double tau, const Scenario& scn) {
  if (!(tau >= 0.0)) throw std::domain_error("coverage_tier2_content: tau must be >= 0");
  CoverageResult result{0.0, scn.quadrature_u2(), Tier::pico, rank, false};
  const auto placed = placement_pattern(rank, scn);
  const auto& pico = scn.tier(Tier::pico);
  if (placed[1] == 0 || pico.density == 0.0 || !std::isfinite(tau)) return result;

  const PicoInterference interference(scn, scn.quadrature_u1());
  const auto radial_rule = specfun::chebyshev_rule(scn.quadrature_u2());
  const double los_radius = scn.blockage().los_radius;
  const int order = pico.nakagami_order;
  const double eta = scn.eta_l();
  const double g0 = scn.serving_gain();
  const double noise_scale =
      scn.noise_power(Tier::pico) / (pico.tx_power * pico.intercept * pico.n_antennas * g0);

  double sum = 0.0;
  for (int k = 0; k < radial_rule.order; ++k) {
    const double r = (radial_rule.nodes[k] + 1.0) * los_radius / 2.0;
    const double pdf = distance_pdf(Tier::pico, placed, r, scn);
    if (pdf == 0.0) continue;
    const double scaled = eta * std::pow(r, pico.pathloss_exp) * tau;
    double alternating = 0.0;
    for (int n = 1; n <= order; ++n) {
      const double sign = n % 2 == 1 ? 1.0 : -1.0;
      const double term = interference.laplace(n, scaled / g0, r) * std::exp(-n * scaled * noise_scale);
      alternating += sign * binomial(order, n) * term;
    }
    sum += radial_rule.weights[k] * alternating * pdf;
  }
  double value = 0.5 * los_radius * sum;
  if (value < 0.0 || value > 1.0) {
    result.clamped = true;
    value = std::clamp(value, 0.0, 1.0);
  }
  result.value = value;
  return result;
}

double server_success(double r_th, const Scenario& scn) {
  if (!(r_th >= 0.0)) throw std::domain_error("server_success: r_th must be >= 0");
  const auto& cache = scn.cache();
  if (r_th > cache.backhaul_capacity) return 0.0;
  double tail = 0.0;
  for (int f = cache.catalog_size; f > cache.macro_cache; --f) tail += zipf_pmf(f, scn.popularity());
  if (tail == 0.0) return 0.0;
  const double tau = rate_to_sinr_threshold(r_th, scn.tier(Tier::macro).bandwidth);
  return tail * coverage_nocache_tier1(tau, scn);
}

SuccessBreakdown success_probability(double r_th, const Scenario& scn) {
  if (!(r_th >= 0.0)) throw std::domain_error("success_probability: r_th must be >= 0");
  SuccessBreakdown out;
  const double tau1 = rate_to_sinr_threshold(r_th, scn.tier(Tier::macro).bandwidth);
  const double tau2 = rate_to_sinr_threshold(r_th, scn.tier(Tier::pico).bandwidth);

  // Theta_{i,f} depends on f only through the placement pattern, so each
  // distinct pattern is integrated once.
  std::map<std::array<int, 2>, std::pair<CoverageResult, CoverageResult>> by_pattern;
  for (int f = 1; f <= scn.cache().macro_cache; ++f) {
    const auto pattern = placement_pattern(f, scn);
    auto it = by_pattern.find(pattern);
    if (it == by_pattern.end()) {
      it = by_pattern.emplace(pattern, std::pair{coverage_tier1_content(f, tau1, scn),
                                                 coverage_tier2_content(f, tau2, scn)}).first;
    }
    const double pf = zipf_pmf(f, scn.popularity());
    out.per_rank_per_tier[{f, Tier::macro}] = pf * it->second.first.value;
    out.per_rank_per_tier[{f, Tier::pico}] = pf * it->second.second.value;
    out.any_clamped = out.any_clamped || it->second.second.clamped;
  }
  out.server_mode = server_success(r_th, scn);

  double total = out.server_mode;
  for (const auto& [key, mass] : out.per_rank_per_tier) total += mass;
  out.total = total;
  return out;
}

double ase(double r_th, const Scenario& scn) {
  if (!(r_th >= 0.0)) throw std::domain_error("ase: r_th must be >= 0");
  if (r_th == 0.0) return 0.0;
  const auto breakdown = success_probability(r_th, scn);
  double value = 0.0;
  for (const auto& [key, mass] : breakdown.per_rank_per_tier) {
    const auto& [rank, tier] = key;
    const auto& t = scn.tier(tier);
    value += placement_prob(tier, rank, scn.cache()) * t.density * r_th / t.bandwidth * mass;
  }
  const auto& macro = scn.tier(Tier::macro);
  value += macro.density * r_th / macro.bandwidth * breakdown.server_mode;
  return value;
}

RateOptimum maximize_log_unimodal(const std::function<double(double)>& f, double lo, double hi,
                                  int grid_points) {
  if (!(lo >= 0.0) || !(hi > lo) || !std::isfinite(hi)) {
    throw std::domain_error("maximize_log_unimodal: need 0 <= lo < hi");
  }
  grid_points = std::max(grid_points, 3);

  std::vector<double> grid;
  grid.reserve(grid_points);
  const double log_start = lo > 0.0 ? std::log(lo) : std::log(hi * 1e-6);
  const int log_points = lo > 0.0 ? grid_points : grid_points - 1;
  if (lo == 0.0) grid.push_back(0.0);
  for (int k = 0; k < log_points; ++k) {
    const double t = static_cast<double>(k) / (log_points - 1);
    grid.push_back(std::exp(log_start + t * (std::log(hi) - log_start)));
  }
  grid.front() = lo;
  grid.back() = hi;

  std::vector<double> values(grid.size());
  std::size_t best = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    values[k] = f(grid[k]);
    if (values[k] > values[best]) best = k;
  }
  RateOptimum optimum{grid[best], values[best]};
  if (best == 0 || best + 1 == grid.size()) return optimum;
  if (!(values[best] > values[best - 1] || values[best] > values[best + 1])) return optimum;

  // Golden-section search on log(r) inside the bracketing grid cells.
  const bool use_log = grid[best - 1] > 0.0;
  auto to_x = [&](double r) { return use_log ? std::log(r) : r; };
  auto from_x = [&](double x) { return use_log ? std::exp(x) : x; };
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = to_x(grid[best - 1]);
  double b = to_x(grid[best + 1]);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(from_x(c));
  double fd = f(from_x(d));
  for (int iter = 0; iter < 200 && (b - a) > 1e-12 * std::max(1.0, std::abs(b)); ++iter) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(from_x(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(from_x(d));
    }
  }
  const double x = fc > fd ? c : d;
  const double fx = std::max(fc, fd);
  if (fx > optimum.value) optimum = {from_x(x), fx};
  return optimum;
}

RateOptimum optimal_rate_threshold(const Scenario& scn, double lo, double hi) {
  return maximize_log_unimodal([&](double r) { return ase(r, scn); }, lo, hi);
}

}  // namespace hetnet::analytic
