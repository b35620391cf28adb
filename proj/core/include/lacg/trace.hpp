#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lacg/objective.hpp"

namespace lacg {

inline constexpr std::string_view kTraceHeader =
    "iter,elapsed_s,f,primal_gap,wolfe_gap,active_set_size,cset_size,step_type,restarted";

struct TraceRow {
  std::int64_t iter = 0;
  double elapsed_s = 0.0;
  double f = 0.0;
  std::optional<double> primal_gap;
  double wolfe_gap = 0.0;
  std::size_t active_set_size = 0;
  std::size_t cset_size = 0;
  std::string step_type;
  bool restarted = false;
};

enum class RunStatus { converged, budget_exhausted };

std::string_view to_string(RunStatus status);

struct RunTrace {
  std::string algorithm;
  std::string instance_id;
  std::uint64_t seed = 0;
  RunStatus status = RunStatus::budget_exhausted;
  bool numerical_flag = false;  // some hull subproblem hit its iteration cap
  int hull_failures = 0;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<TraceRow> rows;
  Vector solution;

  /// Sets primal_gap = f - f_star on every row.
  void fill_primal_gap(double f_star);
};

/// Header plus one line per row. Reals use round-trip precision except
/// elapsed_s (6 decimals); an unknown primal gap is an empty cell.
void write_csv(std::ostream& out, const RunTrace& trace);

/// Same columns behind a leading `algorithm` column, traces concatenated.
void write_long_csv(std::ostream& out, std::span<const RunTrace> traces);

/// Parses a single-run CSV; throws std::runtime_error on a wrong header or
/// malformed row.
std::vector<TraceRow> read_csv(std::istream& in);

/// Parses a long-format CSV into (algorithm, row) pairs.
std::vector<std::pair<std::string, TraceRow>> read_long_csv(std::istream& in);

/// {"algorithm", "instance", "seed", "status", "numerical_flag",
///  "hull_failures", "iterations", "config": {...}}
std::string metadata_json(const RunTrace& trace);

}  // namespace lacg
