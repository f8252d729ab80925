#include "hetnet/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

namespace hetnet {

namespace pt = boost::property_tree;

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

struct UnitScale {
  std::string_view suffix;
  double scale;
};

constexpr std::array kFrequencyUnits{UnitScale{"", 1.0}, UnitScale{"Hz", 1.0}, UnitScale{"kHz", 1e3},
                                     UnitScale{"MHz", 1e6}, UnitScale{"GHz", 1e9}};
constexpr std::array kRateUnits{UnitScale{"", 1.0}, UnitScale{"bps", 1.0}, UnitScale{"kbps", 1e3},
                                UnitScale{"Mbps", 1e6}, UnitScale{"Gbps", 1e9}};
constexpr std::array kLengthUnits{UnitScale{"", 1.0}, UnitScale{"m", 1.0}, UnitScale{"km", 1e3}};

template <std::size_t N>
double scaled(double number, std::string_view suffix, const std::array<UnitScale, N>& table,
              std::string_view text) {
  for (const auto& unit : table) {
    if (unit.suffix == suffix) return number * unit.scale;
  }
  throw ConfigError(fmt::format("unknown unit '{}' in '{}'", suffix, text));
}

std::string fmt_number(double v) { return fmt::format("{}", v); }

// Section/key schema; anything else in a file is rejected by name.
const std::set<std::string>& keys_for(const std::string& section) {
  static const std::set<std::string> network{"los_radius", "antenna_spacing_ratio", "user_tx_power",
                                             "quadrature_u1", "quadrature_u2"};
  static const std::set<std::string> tier{"density", "tx_power", "pathloss_exp", "intercept",
                                          "n_antennas", "bandwidth", "nakagami_order", "carrier_freq",
                                          "noise_figure_db"};
  static const std::set<std::string> cache{"catalog_size", "macro_cache", "pico_cache",
                                           "backhaul_capacity", "skew"};
  static const std::set<std::string> montecarlo{"window_factor", "drops", "seed"};
  static const std::set<std::string> none;
  if (section == "network") return network;
  if (section == "tier1" || section == "tier2") return tier;
  if (section == "cache") return cache;
  if (section == "montecarlo") return montecarlo;
  return none;
}

class SectionReader {
 public:
  SectionReader(const pt::ptree& root, std::string name) : name_(std::move(name)) {
    if (auto child = root.get_child_optional(name_)) node_ = &*child;
  }

  bool present() const { return node_ != nullptr; }

  std::optional<std::string> raw(const std::string& key) const {
    if (!node_) return std::nullopt;
    if (auto v = node_->get_optional<std::string>(key)) return std::string(trim(*v));
    return std::nullopt;
  }

  template <class T>
  void read(const std::string& key, Quantity kind, T& out) const {
    if (auto text = raw(key)) {
      try {
        const double v = parse_quantity(*text, kind);
        out = static_cast<T>(v);
      } catch (const ConfigError& e) {
        throw ConfigError(fmt::format("[{}] {}: {}", name_, key, e.what()));
      }
    }
  }

 private:
  std::string name_;
  const pt::ptree* node_ = nullptr;
};

void read_tier(const SectionReader& section, ScenarioDescription::TierEntry& tier) {
  section.read("density", Quantity::dimensionless, tier.density);
  section.read("tx_power", Quantity::power, tier.tx_power);
  section.read("pathloss_exp", Quantity::dimensionless, tier.pathloss_exp);
  if (auto text = section.raw("intercept")) {
    if (*text == "auto") {
      tier.intercept.reset();
    } else {
      double v = 0.0;
      section.read("intercept", Quantity::dimensionless, v);
      tier.intercept = v;
    }
  }
  section.read("n_antennas", Quantity::integer, tier.n_antennas);
  section.read("bandwidth", Quantity::frequency, tier.bandwidth);
  section.read("nakagami_order", Quantity::integer, tier.nakagami_order);
  section.read("carrier_freq", Quantity::frequency, tier.carrier_freq);
  section.read("noise_figure_db", Quantity::dimensionless, tier.noise_figure_db);
}

}  // namespace

double parse_quantity(std::string_view text, Quantity kind) {
  const std::string_view s = trim(text);
  double number = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), number);
  if (ec != std::errc{}) throw ConfigError(fmt::format("expected a number, got '{}'", s));
  const std::string_view suffix = trim(std::string_view(ptr, static_cast<std::size_t>(s.data() + s.size() - ptr)));

  switch (kind) {
    case Quantity::dimensionless:
      if (!suffix.empty()) throw ConfigError(fmt::format("unexpected unit '{}' in '{}'", suffix, s));
      return number;
    case Quantity::integer:
      if (!suffix.empty() || number != std::floor(number) || std::abs(number) > 2e9) {
        throw ConfigError(fmt::format("expected an integer, got '{}'", s));
      }
      return number;
    case Quantity::power:
      if (suffix == "W") return number;
      if (suffix == "mW") return number * 1e-3;
      if (suffix == "dBm") return std::pow(10.0, (number - 30.0) / 10.0);
      if (suffix == "dBW") return std::pow(10.0, number / 10.0);
      if (suffix.empty()) throw ConfigError(fmt::format("power '{}' needs a unit (W, mW, dBm, dBW)", s));
      throw ConfigError(fmt::format("unknown power unit '{}' in '{}'", suffix, s));
    case Quantity::frequency:
      return scaled(number, suffix, kFrequencyUnits, s);
    case Quantity::rate:
      return scaled(number, suffix, kRateUnits, s);
    case Quantity::length:
      return scaled(number, suffix, kLengthUnits, s);
  }
  return number;
}

namespace {

ConfigBundle parse_onto(ConfigBundle bundle, std::string_view text) {
  pt::ptree root;
  try {
    std::istringstream in{std::string(text)};
    pt::read_ini(in, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }

  for (const auto& [section, node] : root) {
    if (node.empty() && !node.data().empty()) {
      throw ConfigError(fmt::format("key '{}' outside of any section", section));
    }
    if (section == "sweep") continue;
    const auto& allowed = keys_for(section);
    if (allowed.empty()) throw ConfigError(fmt::format("unknown section [{}]", section));
    for (const auto& entry : node) {
      if (!allowed.contains(entry.first)) {
        throw ConfigError(fmt::format("unknown key '{}' in section [{}]", entry.first, section));
      }
    }
  }

  auto& desc = bundle.scenario;

  const SectionReader network(root, "network");
  network.read("los_radius", Quantity::length, desc.los_radius);
  network.read("antenna_spacing_ratio", Quantity::dimensionless, desc.antenna_spacing_ratio);
  network.read("user_tx_power", Quantity::power, desc.user_tx_power);
  network.read("quadrature_u1", Quantity::integer, desc.quadrature_u1);
  network.read("quadrature_u2", Quantity::integer, desc.quadrature_u2);

  read_tier(SectionReader(root, "tier1"), desc.tiers[0]);
  read_tier(SectionReader(root, "tier2"), desc.tiers[1]);

  const SectionReader cache(root, "cache");
  cache.read("catalog_size", Quantity::integer, desc.catalog_size);
  cache.read("macro_cache", Quantity::integer, desc.macro_cache);
  cache.read("pico_cache", Quantity::integer, desc.pico_cache);
  cache.read("backhaul_capacity", Quantity::rate, desc.backhaul_capacity);
  cache.read("skew", Quantity::dimensionless, desc.skew);

  const SectionReader mc(root, "montecarlo");
  mc.read("window_factor", Quantity::dimensionless, bundle.montecarlo.window_factor);
  mc.read("drops", Quantity::integer, bundle.montecarlo.drops);
  if (auto seed = mc.raw("seed")) {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(seed->data(), seed->data() + seed->size(), value);
    if (ec != std::errc{} || ptr != seed->data() + seed->size()) {
      throw ConfigError("[montecarlo] seed: expected an unsigned 64-bit integer");
    }
    bundle.montecarlo.seed = value;
  }

  if (auto sweep = root.get_child_optional("sweep")) {
    for (const auto& [key, node] : *sweep) {
      bundle.sweep.emplace_back(key, std::string(trim(node.data())));
    }
  }
  return bundle;
}

const ConfigBundle& table1_defaults() {
  static const ConfigBundle defaults = [] {
    auto bundle = parse_onto({}, *preset_text("table1"));
    bundle.sweep.clear();
    return bundle;
  }();
  return defaults;
}

}  // namespace

ConfigBundle parse_config(std::string_view text) { return parse_onto(table1_defaults(), text); }

ConfigBundle load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

ConfigBundle load_preset(std::string_view name) {
  const auto text = preset_text(name);
  if (!text) {
    std::string known;
    for (auto n : preset_names()) known += (known.empty() ? "" : ", ") + std::string(n);
    throw ConfigError(fmt::format("unknown preset '{}' (known: {})", name, known));
  }
  return parse_config(*text);
}

std::string canonical_ini(const ScenarioDescription& d) {
  std::string out;
  auto line = [&](std::string_view key, const std::string& value) {
    out += fmt::format("{} = {}\n", key, value);
  };
  out += "[network]\n";
  line("los_radius", fmt_number(d.los_radius));
  line("antenna_spacing_ratio", fmt_number(d.antenna_spacing_ratio));
  line("user_tx_power", fmt_number(d.user_tx_power) + "W");
  line("quadrature_u1", std::to_string(d.quadrature_u1));
  line("quadrature_u2", std::to_string(d.quadrature_u2));
  for (int i = 0; i < 2; ++i) {
    const auto& t = d.tiers[i];
    out += fmt::format("\n[tier{}]\n", i + 1);
    line("density", fmt_number(t.density));
    line("tx_power", fmt_number(t.tx_power) + "W");
    line("pathloss_exp", fmt_number(t.pathloss_exp));
    line("intercept", t.intercept ? fmt_number(*t.intercept) : std::string("auto"));
    line("n_antennas", std::to_string(t.n_antennas));
    line("bandwidth", fmt_number(t.bandwidth));
    line("nakagami_order", std::to_string(t.nakagami_order));
    line("carrier_freq", fmt_number(t.carrier_freq));
    line("noise_figure_db", fmt_number(t.noise_figure_db));
  }
  out += "\n[cache]\n";
  line("catalog_size", std::to_string(d.catalog_size));
  line("macro_cache", std::to_string(d.macro_cache));
  line("pico_cache", std::to_string(d.pico_cache));
  line("backhaul_capacity", fmt_number(d.backhaul_capacity));
  line("skew", fmt_number(d.skew));
  return out;
}

std::uint64_t scenario_hash(const ScenarioDescription& desc) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_ini(desc)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string format_hash(std::uint64_t hash) { return fmt::format("{:016x}", hash); }

namespace {
struct ParameterInfo {
  std::string_view name;
  Quantity kind;
};
constexpr std::array kParameters{
    ParameterInfo{"m1", Quantity::integer},         ParameterInfo{"m2", Quantity::integer},
    ParameterInfo{"n2", Quantity::integer},         ParameterInfo{"p1", Quantity::power},
    ParameterInfo{"lambda2", Quantity::dimensionless}, ParameterInfo{"carrier_freq", Quantity::frequency},
    ParameterInfo{"alpha2", Quantity::dimensionless}, ParameterInfo{"b1", Quantity::frequency},
};
}  // namespace

bool is_scenario_parameter(std::string_view name) {
  for (const auto& p : kParameters) {
    if (p.name == name) return true;
  }
  return false;
}

Quantity parameter_quantity(std::string_view name) {
  for (const auto& p : kParameters) {
    if (p.name == name) return p.kind;
  }
  throw ConfigError(fmt::format("unknown scenario parameter '{}'", name));
}

void apply_parameter(ScenarioDescription& d, std::string_view name, double value) {
  if (name == "m1") {
    d.macro_cache = static_cast<int>(value);
  } else if (name == "m2") {
    d.pico_cache = static_cast<int>(value);
  } else if (name == "n2") {
    d.tiers[1].n_antennas = static_cast<int>(value);
  } else if (name == "p1") {
    d.tiers[0].tx_power = value;
  } else if (name == "lambda2") {
    d.tiers[1].density = value;
  } else if (name == "carrier_freq") {
    d.tiers[1].carrier_freq = value;
  } else if (name == "alpha2") {
    d.tiers[1].pathloss_exp = value;
  } else if (name == "b1") {
    d.tiers[0].bandwidth = value;
  } else {
    throw ConfigError(fmt::format("unknown scenario parameter '{}'", name));
  }
}

}  // namespace hetnet
