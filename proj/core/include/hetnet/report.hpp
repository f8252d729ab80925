#pragma once

// Tabular output of sweeps (one row per point per engine) and the
// analytic-vs-Monte-Carlo comparison built from such a table.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hetnet/sweep.hpp"

namespace hetnet::report {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::optional<std::size_t> column(std::string_view name) const;
};

/// Columns: series, axis, axis_value, r_th, engine, then <metric>,
/// <metric>_hw95 and <metric>_absdiff per metric, then n_drops, seed,
/// generator, u1, u2, scenario_hash. Missing values are empty cells.
Table to_table(const sweep::SweepResult& result);

void write_csv(std::ostream& out, const Table& table);
Table read_csv(std::istream& in);

/// Envelope with provenance, the canonical base scenario, rows and summary.
void write_json(std::ostream& out, const sweep::SweepResult& result);

struct PointGap {
  std::string series;
  std::string axis_value;
  std::string metric;
  double analytic = 0.0;
  double montecarlo = 0.0;
  double half_width_95 = 0.0;
  double gap = 0.0;
  bool inside_ci = false;
};

struct Comparison {
  std::vector<PointGap> points;
  double max_gap = 0.0;
  double fraction_inside_ci = 0.0;
  std::vector<std::string> seeds;
  std::vector<std::string> scenario_hashes;
};

/// Pairs analytic and Monte Carlo rows of the same series and axis value.
/// Throws UsageError unless the table holds both engines for some point.
Comparison compare_report(const Table& table);

void write_comparison(std::ostream& out, const Comparison& cmp);

}  // namespace hetnet::report
