#include "hetnet/report.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "hetnet/config.hpp"
#include "hetnet/montecarlo.hpp"

namespace hetnet::report {

namespace {

std::string number(double v) { return fmt::format("{}", v); }

std::string optional_number(const std::optional<double>& v) { return v ? number(*v) : std::string(); }

void write_field(std::ostream& out, const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) {
    out << field;
    return;
  }
  out << '"';
  for (char c : field) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

// RFC 4180 record; returns false at end of input.
bool read_record(std::istream& in, std::vector<std::string>& fields) {
  fields.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  std::string field;
  bool quoted = false;
  char c;
  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          field += '"';
          in.get();
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (quoted) throw UsageError("CSV: unterminated quoted field");
  fields.push_back(std::move(field));
  return true;
}

double to_double(const std::string& s, std::string_view what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError(fmt::format("CSV: column '{}' has non-numeric value '{}'", what, s));
  }
}

void add_unique(std::vector<std::string>& v, const std::string& s) {
  if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
}

}  // namespace

std::optional<std::size_t> Table::column(std::string_view name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) return std::nullopt;
  return static_cast<std::size_t>(it - header.begin());
}

Table to_table(const sweep::SweepResult& result) {
  Table t;
  t.header = {"series", "axis", "axis_value", "r_th", "engine"};
  for (auto m : result.spec.metrics) {
    const std::string name(sweep::metric_name(m));
    t.header.insert(t.header.end(), {name, name + "_hw95", name + "_absdiff"});
  }
  t.header.insert(t.header.end(), {"n_drops", "seed", "generator", "u1", "u2", "scenario_hash"});

  for (const auto& rec : result.records) {
    for (bool mc_row : {false, true}) {
      if (mc_row ? !sweep::uses_montecarlo(result.spec.engines) : !sweep::uses_analytic(result.spec.engines)) {
        continue;
      }
      std::vector<std::string> row{rec.series, rec.axis, number(rec.axis_value), number(rec.r_th),
                                   mc_row ? "mc" : "analytic"};
      for (auto m : result.spec.metrics) {
        const auto slot = std::find_if(rec.metrics.begin(), rec.metrics.end(),
                                       [&](const sweep::MetricRecord& r) { return r.metric == m; });
        const auto& v = mc_row ? slot->montecarlo : slot->analytic;
        row.push_back(v ? number(v->value) : "");
        row.push_back(v ? optional_number(v->half_width_95) : "");
        row.push_back(optional_number(slot->abs_diff));
      }
      row.push_back(mc_row ? fmt::format("{}", rec.n_drops) : "0");
      row.push_back(fmt::format("{}", rec.seed));
      row.push_back(mc_row ? std::string(mc::kGeneratorName) : "");
      row.push_back(fmt::format("{}", rec.quadrature_u1));
      row.push_back(fmt::format("{}", rec.quadrature_u2));
      row.push_back(rec.scenario_hash);
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

void write_csv(std::ostream& out, const Table& table) {
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t k = 0; k < fields.size(); ++k) {
      if (k) out << ',';
      write_field(out, fields[k]);
    }
    out << '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
}

Table read_csv(std::istream& in) {
  Table t;
  if (!read_record(in, t.header)) throw UsageError("CSV: empty input");
  std::vector<std::string> fields;
  while (read_record(in, fields)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != t.header.size()) {
      throw UsageError(fmt::format("CSV: row {} has {} fields, header has {}", t.rows.size() + 1, fields.size(),
                                   t.header.size()));
    }
    t.rows.push_back(fields);
  }
  return t;
}

void write_json(std::ostream& out, const sweep::SweepResult& result) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["generator"] = mc::kGeneratorName;
  doc["seed"] = result.montecarlo.seed;
  doc["n_drops"] = result.montecarlo.drops;
  doc["window_factor"] = result.montecarlo.window_factor;
  doc["scenario_hash"] = result.base_hash;
  doc["scenario"] = canonical_ini(result.base);
  doc["axis"] = result.spec.axis;
  doc["engines"] = sweep::engines_name(result.spec.engines);

  const Table t = to_table(result);
  ordered_json rows = ordered_json::array();
  for (const auto& row : t.rows) {
    ordered_json r;
    for (std::size_t k = 0; k < t.header.size(); ++k) {
      const auto& name = t.header[k];
      const bool text = name == "series" || name == "axis" || name == "engine" || name == "generator" ||
                        name == "scenario_hash";
      if (text) {
        r[name] = row[k];
      } else if (row[k].empty()) {
        r[name] = nullptr;
      } else {
        r[name] = ordered_json::parse(row[k]);
      }
    }
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);

  ordered_json summary = ordered_json::array();
  for (const auto& s : result.summaries) {
    ordered_json e;
    e["series"] = s.label;
    e["max_ase"] = s.max_ase ? ordered_json(*s.max_ase) : ordered_json();
    e["max_ase_at"] = s.max_ase_at ? ordered_json(*s.max_ase_at) : ordered_json();
    e["max_gap"] = s.max_gap ? ordered_json(*s.max_gap) : ordered_json();
    summary.push_back(std::move(e));
  }
  doc["summary"] = std::move(summary);
  out << doc.dump(2) << '\n';
}

Comparison compare_report(const Table& table) {
  const char* required[] = {"series", "axis_value", "r_th", "engine", "seed", "scenario_hash"};
  for (const char* name : required) {
    if (!table.column(name)) throw UsageError(fmt::format("compare: input lacks column '{}'", name));
  }
  const auto c_series = *table.column("series");
  const auto c_axis = *table.column("axis_value");
  const auto c_rth = *table.column("r_th");
  const auto c_engine = *table.column("engine");
  const auto c_seed = *table.column("seed");
  const auto c_hash = *table.column("scenario_hash");

  std::vector<std::string> metrics;
  for (const auto& h : table.header) {
    for (auto m : {sweep::Metric::success, sweep::Metric::ase, sweep::Metric::sir_sinr_gap,
                   sweep::Metric::association}) {
      if (h == sweep::metric_name(m)) metrics.push_back(h);
    }
  }

  using Key = std::tuple<std::string, std::string, std::string>;
  std::map<Key, const std::vector<std::string>*> analytic_rows;
  std::vector<const std::vector<std::string>*> mc_rows;
  for (const auto& row : table.rows) {
    if (row[c_engine] == "analytic") {
      analytic_rows[{row[c_series], row[c_axis], row[c_rth]}] = &row;
    } else if (row[c_engine] == "mc") {
      mc_rows.push_back(&row);
    } else {
      throw UsageError(fmt::format("compare: unknown engine '{}'", row[c_engine]));
    }
  }

  Comparison cmp;
  int inside = 0;
  for (const auto* mrow : mc_rows) {
    const auto it = analytic_rows.find({(*mrow)[c_series], (*mrow)[c_axis], (*mrow)[c_rth]});
    if (it == analytic_rows.end()) continue;
    const auto& arow = *it->second;
    for (const auto& m : metrics) {
      const auto c_value = *table.column(m);
      if (arow[c_value].empty() || (*mrow)[c_value].empty()) continue;
      PointGap g;
      g.series = (*mrow)[c_series];
      g.axis_value = (*mrow)[c_axis];
      g.metric = m;
      g.analytic = to_double(arow[c_value], m);
      g.montecarlo = to_double((*mrow)[c_value], m);
      if (const auto c_hw = table.column(m + "_hw95"); c_hw && !(*mrow)[*c_hw].empty()) {
        g.half_width_95 = to_double((*mrow)[*c_hw], m + "_hw95");
      }
      g.gap = std::abs(g.analytic - g.montecarlo);
      g.inside_ci = g.gap <= g.half_width_95;
      inside += g.inside_ci ? 1 : 0;
      cmp.max_gap = std::max(cmp.max_gap, g.gap);
      cmp.points.push_back(std::move(g));
    }
    add_unique(cmp.seeds, (*mrow)[c_seed]);
    add_unique(cmp.scenario_hashes, (*mrow)[c_hash]);
  }
  if (cmp.points.empty()) {
    throw UsageError("compare: input needs analytic and mc rows for the same points (run with engines=both)");
  }
  cmp.fraction_inside_ci = static_cast<double>(inside) / static_cast<double>(cmp.points.size());
  return cmp;
}

void write_comparison(std::ostream& out, const Comparison& cmp) {
  Table t;
  t.header = {"series", "axis_value", "metric", "analytic", "mc", "mc_hw95", "abs_gap", "inside_ci"};
  for (const auto& g : cmp.points) {
    t.rows.push_back({g.series, g.axis_value, g.metric, number(g.analytic), number(g.montecarlo),
                      number(g.half_width_95), number(g.gap), g.inside_ci ? "1" : "0"});
  }
  write_csv(out, t);
  auto joined = [](const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : " ") + x;
    return s;
  };
  out << "# max_gap " << number(cmp.max_gap) << '\n';
  out << "# fraction_inside_ci " << number(cmp.fraction_inside_ci) << '\n';
  out << "# seeds " << joined(cmp.seeds) << '\n';
  out << "# scenario_hashes " << joined(cmp.scenario_hashes) << '\n';
}

}  // namespace hetnet::report
