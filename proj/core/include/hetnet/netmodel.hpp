#pragma once

// Two-tier network description: macro (sub-6 GHz) tier 1 overlaid by a
// millimeter-wave pico tier 2, both caching the most popular files of a
// Zipf-distributed catalog.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hetnet {

enum class Tier { macro = 1, pico = 2 };

constexpr int tier_index(Tier t) { return t == Tier::macro ? 0 : 1; }
constexpr int tier_number(Tier t) { return t == Tier::macro ? 1 : 2; }
constexpr Tier other_tier(Tier t) { return t == Tier::macro ? Tier::pico : Tier::macro; }

namespace constants {
inline constexpr double boltzmann = 1.380649e-23;       // J/K
inline constexpr double reference_temperature = 290.0;  // K
inline constexpr double speed_of_light = 299'792'458.0; // m/s
}  // namespace constants

struct TierParams {
  double density = 0.0;        // BS per m^2
  double tx_power = 0.0;       // W
  double pathloss_exp = 0.0;
  double intercept = 0.0;      // linear path gain at 1 m
  int n_antennas = 1;
  double bandwidth = 0.0;      // Hz
  int nakagami_order = 1;
  double carrier_freq = 0.0;   // Hz

  bool operator==(const TierParams&) const = default;
};

struct BlockageParams {
  double los_radius = 0.0;  // m
  bool operator==(const BlockageParams&) const = default;
};

struct CacheParams {
  int catalog_size = 1;
  int macro_cache = 0;
  int pico_cache = 0;
  double backhaul_capacity = 0.0;  // bit/s
  bool operator==(const CacheParams&) const = default;
};

/// Zipf request distribution over ranks 1..catalog_size.
class PopularityModel {
 public:
  PopularityModel() = default;
  PopularityModel(double skew, int catalog_size);

  double skew() const { return skew_; }
  int catalog_size() const { return static_cast<int>(pmf_.size()); }
  const std::vector<double>& pmf() const { return pmf_; }
  const std::vector<double>& cdf() const { return cdf_; }

  /// Smallest rank whose cumulative mass reaches u in [0, 1).
  int rank_for_quantile(double u) const;

  bool operator==(const PopularityModel&) const = default;

 private:
  double skew_ = 0.0;
  std::vector<double> pmf_;
  std::vector<double> cdf_;
};

/// Unvalidated network description as read from a config file or a preset.
struct ScenarioDescription {
  struct TierEntry {
    double density = 0.0;
    double tx_power = 0.0;
    double pathloss_exp = 0.0;
    std::optional<double> intercept;  // derived from carrier_freq when empty
    int n_antennas = 1;
    double bandwidth = 0.0;
    int nakagami_order = 1;
    double carrier_freq = 0.0;
    double noise_figure_db = 10.0;
    bool operator==(const TierEntry&) const = default;
  };

  std::array<TierEntry, 2> tiers;
  double los_radius = 0.0;
  double antenna_spacing_ratio = 0.5;
  int catalog_size = 1;
  int macro_cache = 0;
  int pico_cache = 0;
  double backhaul_capacity = 0.0;
  double skew = 0.0;
  int quadrature_u1 = 128;
  int quadrature_u2 = 128;
  // Carried for completeness; the downlink analysis never reads it.
  double user_tx_power = 1.0;

  bool operator==(const ScenarioDescription&) const = default;
};

struct ValidationIssue {
  std::string field;
  std::string message;
};

class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(std::vector<ValidationIssue> issues);
  const std::vector<ValidationIssue>& issues() const { return issues_; }
  bool mentions(const std::string& field_prefix) const;

 private:
  std::vector<ValidationIssue> issues_;
};

/// Validated, immutable network. Construct through validate().
class Scenario {
 public:
  const TierParams& tier(Tier t) const { return tiers_[tier_index(t)]; }
  const BlockageParams& blockage() const { return blockage_; }
  const CacheParams& cache() const { return cache_; }
  const PopularityModel& popularity() const { return popularity_; }
  double noise_figure_db(Tier t) const { return noise_figure_db_[tier_index(t)]; }
  double noise_power(Tier t) const { return noise_power_[tier_index(t)]; }
  double antenna_spacing_ratio() const { return antenna_spacing_ratio_; }
  int quadrature_u1() const { return quadrature_[0]; }
  int quadrature_u2() const { return quadrature_[1]; }
  /// Alzer constant of the pico-tier Nakagami order.
  double eta_l() const { return eta_l_; }
  double serving_gain() const { return 1.0; }
  double user_tx_power() const { return user_tx_power_; }

  const ScenarioDescription& description() const { return description_; }

  bool operator==(const Scenario&) const = default;

 private:
  friend Scenario validate(const ScenarioDescription&);
  Scenario() = default;

  std::array<TierParams, 2> tiers_;
  BlockageParams blockage_;
  CacheParams cache_;
  PopularityModel popularity_;
  std::array<double, 2> noise_figure_db_{};
  std::array<double, 2> noise_power_{};
  double antenna_spacing_ratio_ = 0.5;
  std::array<int, 2> quadrature_{128, 128};
  double eta_l_ = 1.0;
  double user_tx_power_ = 1.0;
  ScenarioDescription description_;
};

/// Checks every invariant and derives noise powers, intercepts and eta_L.
/// Throws ValidationError listing each violated field.
Scenario validate(const ScenarioDescription& raw);

/// Re-validates the description an existing Scenario was built from.
Scenario validate(const Scenario& scenario);

double zipf_pmf(int rank, const PopularityModel& pop);

/// Most-popular placement: 1 when rank <= cache size of the tier, else 0.
int placement_prob(Tier tier, int rank, const CacheParams& cache);

/// Free-space path gain at 1 m, (c / (4 pi f))^2.
double intercept_from_frequency(double carrier_freq);

/// k_B T0 B 10^(NF/10).
double thermal_noise_power(double bandwidth, double noise_figure_db);

/// Density that places `count` base stations on average in a disc of `radius`.
double density_per_disc(double count, double radius);

}  // namespace hetnet
