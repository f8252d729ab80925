#include "hetnet/netmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hetnet/specfun.hpp"

namespace hetnet {

namespace {

std::string join_issues(const std::vector<ValidationIssue>& issues) {
  std::ostringstream out;
  out << "invalid scenario:";
  for (const auto& issue : issues) out << "\n  " << issue.field << ": " << issue.message;
  return out.str();
}

class IssueCollector {
 public:
  void require(bool ok, std::string field, std::string message) {
    if (!ok) issues_.push_back({std::move(field), std::move(message)});
  }
  void throw_if_any() const {
    if (!issues_.empty()) throw ValidationError(issues_);
  }

 private:
  std::vector<ValidationIssue> issues_;
};

}  // namespace

PopularityModel::PopularityModel(double skew, int catalog_size) : skew_(skew) {
  if (catalog_size < 1) throw std::domain_error("PopularityModel: catalog_size must be >= 1");
  if (!(skew >= 0.0)) throw std::domain_error("PopularityModel: skew must be >= 0");
  pmf_.resize(catalog_size);
  // Sum smallest terms first.
  double norm = 0.0;
  for (int n = catalog_size; n >= 1; --n) norm += std::pow(static_cast<double>(n), -skew);
  for (int f = 1; f <= catalog_size; ++f) pmf_[f - 1] = std::pow(static_cast<double>(f), -skew) / norm;
  cdf_.resize(catalog_size);
  double running = 0.0;
  for (int f = 0; f < catalog_size; ++f) {
    running += pmf_[f];
    cdf_[f] = running;
  }
  cdf_.back() = 1.0;
}

int PopularityModel::rank_for_quantile(double u) const {
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const auto idx = std::min<std::ptrdiff_t>(it - cdf_.begin(), static_cast<std::ptrdiff_t>(cdf_.size()) - 1);
  return static_cast<int>(idx) + 1;
}

ValidationError::ValidationError(std::vector<ValidationIssue> issues)
    : std::invalid_argument(join_issues(issues)), issues_(std::move(issues)) {}

bool ValidationError::mentions(const std::string& field_prefix) const {
  return std::any_of(issues_.begin(), issues_.end(), [&](const ValidationIssue& issue) {
    return issue.field.rfind(field_prefix, 0) == 0;
  });
}

double zipf_pmf(int rank, const PopularityModel& pop) {
  if (rank < 1 || rank > pop.catalog_size()) throw std::domain_error("zipf_pmf: rank out of range");
  return pop.pmf()[rank - 1];
}

int placement_prob(Tier tier, int rank, const CacheParams& cache) {
  const int capacity = tier == Tier::macro ? cache.macro_cache : cache.pico_cache;
  return rank >= 1 && rank <= capacity ? 1 : 0;
}

double intercept_from_frequency(double carrier_freq) {
  if (!(carrier_freq > 0.0)) throw std::domain_error("intercept_from_frequency: frequency must be positive");
  const double ratio = constants::speed_of_light / (4.0 * std::numbers::pi * carrier_freq);
  return ratio * ratio;
}

double thermal_noise_power(double bandwidth, double noise_figure_db) {
  return constants::boltzmann * constants::reference_temperature * bandwidth *
         std::pow(10.0, noise_figure_db / 10.0);
}

double density_per_disc(double count, double radius) {
  return count / (radius * radius * std::numbers::pi);
}

Scenario validate(const ScenarioDescription& raw) {
  IssueCollector check;

  for (int i = 0; i < 2; ++i) {
    const auto& t = raw.tiers[i];
    const std::string prefix = "TierParams[tier" + std::to_string(i + 1) + "].";
    check.require(t.density >= 0.0 && std::isfinite(t.density), prefix + "density", "must be finite and >= 0");
    check.require(t.tx_power > 0.0 && std::isfinite(t.tx_power), prefix + "tx_power", "must be > 0");
    if (i == 0) {
      // c = 1 - 2/alpha has to stay positive for the macro-tier 2F1 terms.
      check.require(t.pathloss_exp > 2.0, prefix + "pathloss_exp", "macro tier requires alpha > 2");
    } else {
      check.require(t.pathloss_exp >= 2.0, prefix + "pathloss_exp", "must be >= 2");
    }
    check.require(t.n_antennas >= 1, prefix + "n_antennas", "must be >= 1");
    check.require(t.bandwidth > 0.0 && std::isfinite(t.bandwidth), prefix + "bandwidth", "must be > 0");
    check.require(t.nakagami_order >= 1, prefix + "nakagami_order", "must be >= 1");
    check.require(!std::isnan(t.noise_figure_db) && t.noise_figure_db != INFINITY,
                  prefix + "noise_figure_db", "must be finite (or -inf for a noiseless receiver)");
    if (t.intercept) {
      check.require(*t.intercept > 0.0 && *t.intercept <= 1.0, prefix + "intercept", "must lie in (0, 1]");
    } else {
      const bool freq_ok = t.carrier_freq > 0.0 && std::isfinite(t.carrier_freq);
      check.require(freq_ok, prefix + "carrier_freq", "must be > 0 to derive the intercept");
      if (freq_ok) {
        const double c = intercept_from_frequency(t.carrier_freq);
        check.require(c <= 1.0, prefix + "intercept", "derived intercept exceeds 1 (carrier below c/(4 pi))");
      }
    }
  }
  check.require(raw.tiers[0].n_antennas == 1, "TierParams[tier1].n_antennas", "macro tier is omnidirectional (N_1 = 1)");
  check.require(raw.tiers[0].nakagami_order == 1, "TierParams[tier1].nakagami_order", "macro tier is Rayleigh (order 1)");

  check.require(raw.los_radius > 0.0 && std::isfinite(raw.los_radius), "BlockageParams.los_radius", "must be > 0");

  check.require(raw.catalog_size >= 1, "CacheParams.catalog_size", "must be >= 1");
  check.require(raw.pico_cache >= 0, "CacheParams.pico_cache", "must be >= 0");
  check.require(raw.pico_cache <= raw.macro_cache, "CacheParams.pico_cache", "must not exceed macro_cache (M_2 <= M_1)");
  check.require(raw.macro_cache <= raw.catalog_size, "CacheParams.macro_cache", "must not exceed catalog_size (M_1 <= N_c)");
  check.require(raw.backhaul_capacity >= 0.0, "CacheParams.backhaul_capacity", "must be >= 0");

  check.require(raw.skew >= 0.0 && std::isfinite(raw.skew), "PopularityModel.skew", "must be finite and >= 0");

  check.require(raw.antenna_spacing_ratio > 0.0 && raw.antenna_spacing_ratio <= 1.0,
                "Scenario.antenna_spacing_ratio", "must lie in (0, 1]");
  check.require(raw.quadrature_u1 >= 1, "Scenario.quadrature_u1", "must be >= 1");
  check.require(raw.quadrature_u2 >= 1, "Scenario.quadrature_u2", "must be >= 1");
  check.throw_if_any();

  Scenario s;
  for (int i = 0; i < 2; ++i) {
    const auto& t = raw.tiers[i];
    auto& out = s.tiers_[i];
    out.density = t.density;
    out.tx_power = t.tx_power;
    out.pathloss_exp = t.pathloss_exp;
    out.intercept = t.intercept ? *t.intercept : intercept_from_frequency(t.carrier_freq);
    out.n_antennas = t.n_antennas;
    out.bandwidth = t.bandwidth;
    out.nakagami_order = t.nakagami_order;
    out.carrier_freq = t.carrier_freq;
    s.noise_figure_db_[i] = t.noise_figure_db;
    s.noise_power_[i] = thermal_noise_power(t.bandwidth, t.noise_figure_db);
  }
  s.blockage_.los_radius = raw.los_radius;
  s.cache_ = {raw.catalog_size, raw.macro_cache, raw.pico_cache, raw.backhaul_capacity};
  s.popularity_ = PopularityModel(raw.skew, raw.catalog_size);
  s.antenna_spacing_ratio_ = raw.antenna_spacing_ratio;
  s.quadrature_ = {raw.quadrature_u1, raw.quadrature_u2};
  s.eta_l_ = specfun::alzer_eta(raw.tiers[1].nakagami_order);
  s.user_tx_power_ = raw.user_tx_power;
  s.description_ = raw;
  return s;
}

Scenario validate(const Scenario& scenario) { return validate(scenario.description()); }

}  // namespace hetnet
