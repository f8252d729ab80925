#pragma once

// Key-value scenario files: flat INI sections ([network], [tier1], [tier2],
// [cache], [montecarlo], [sweep]) with SI values and optional unit suffixes
// (dBm/W/mW, Hz/kHz/MHz/GHz, bps/kbps/Mbps/Gbps, m/km).

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hetnet/netmodel.hpp"

namespace hetnet {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Quantity { dimensionless, integer, power, frequency, rate, length };

/// Parses "30dBm", "500 Mbps", "28GHz", "1e-3" ... into SI linear units.
double parse_quantity(std::string_view text, Quantity kind);

struct MonteCarloSettings {
  double window_factor = 10.0;  // tier-1 window radius in units of 1/sqrt(pi lambda_1)
  std::int64_t drops = 20'000;
  std::uint64_t seed = 1;
  bool operator==(const MonteCarloSettings&) const = default;
};

struct ConfigBundle {
  ScenarioDescription scenario;
  MonteCarloSettings montecarlo;
  // [sweep] entries in file order, interpreted by the sweep layer.
  std::vector<std::pair<std::string, std::string>> sweep;
};

/// Keys a file leaves out keep their table1 values.
ConfigBundle parse_config(std::string_view text);
ConfigBundle load_config_file(const std::string& path);
ConfigBundle load_preset(std::string_view name);

std::optional<std::string_view> preset_text(std::string_view name);
std::vector<std::string_view> preset_names();

/// Canonical serialized form of the scenario sections (SI units, fixed key
/// order, shortest round-trip number formatting).
std::string canonical_ini(const ScenarioDescription& desc);

/// FNV-1a 64 of canonical_ini().
std::uint64_t scenario_hash(const ScenarioDescription& desc);
std::string format_hash(std::uint64_t hash);

/// Sweep/series parameter names that map onto scenario fields.
bool is_scenario_parameter(std::string_view name);
Quantity parameter_quantity(std::string_view name);
void apply_parameter(ScenarioDescription& desc, std::string_view name, double value);

}  // namespace hetnet
