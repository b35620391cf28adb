#include "lacg/trace.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace lacg {

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::converged:
      return "converged";
    case RunStatus::budget_exhausted:
      return "budget_exhausted";
  }
  return "?";
}

void RunTrace::fill_primal_gap(double f_star) {
  for (auto& row : rows) row.primal_gap = row.f - f_star;
}

namespace {

std::string real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void write_row(std::ostream& out, const TraceRow& r) {
  out << r.iter << ',' << fixed6(r.elapsed_s) << ',' << real(r.f) << ',';
  if (r.primal_gap) out << real(*r.primal_gap);
  out << ',' << real(r.wolfe_gap) << ',' << r.active_set_size << ',' << r.cset_size << ','
      << r.step_type << ',' << (r.restarted ? 1 : 0) << '\n';
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_real(const std::string& s, std::string_view column) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("trace: bad value '" + s + "' in column " + std::string(column));
  }
}

template <typename T>
T parse_int(const std::string& s, std::string_view column) {
  T v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::runtime_error("trace: bad integer '" + s + "' in column " + std::string(column));
  }
  return v;
}

TraceRow parse_row(const std::vector<std::string>& c, std::size_t offset) {
  if (c.size() != offset + 9) {
    throw std::runtime_error("trace: expected " + std::to_string(offset + 9) + " cells, got " +
                             std::to_string(c.size()));
  }
  TraceRow r;
  r.iter = parse_int<std::int64_t>(c[offset], "iter");
  r.elapsed_s = parse_real(c[offset + 1], "elapsed_s");
  r.f = parse_real(c[offset + 2], "f");
  if (!c[offset + 3].empty()) r.primal_gap = parse_real(c[offset + 3], "primal_gap");
  r.wolfe_gap = parse_real(c[offset + 4], "wolfe_gap");
  r.active_set_size = parse_int<std::size_t>(c[offset + 5], "active_set_size");
  r.cset_size = parse_int<std::size_t>(c[offset + 6], "cset_size");
  r.step_type = c[offset + 7];
  const int restarted = parse_int<int>(c[offset + 8], "restarted");
  if (restarted != 0 && restarted != 1) throw std::runtime_error("trace: restarted must be 0 or 1");
  r.restarted = restarted == 1;
  return r;
}

void expect_header(std::istream& in, const std::string& expected) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trace: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != expected) throw std::runtime_error("trace: unexpected header '" + line + "'");
}

}  // namespace

void write_csv(std::ostream& out, const RunTrace& trace) {
  out << kTraceHeader << '\n';
  for (const auto& row : trace.rows) write_row(out, row);
}

void write_long_csv(std::ostream& out, std::span<const RunTrace> traces) {
  out << "algorithm," << kTraceHeader << '\n';
  for (const auto& t : traces) {
    for (const auto& row : t.rows) {
      out << t.algorithm << ',';
      write_row(out, row);
    }
  }
}

std::vector<TraceRow> read_csv(std::istream& in) {
  expect_header(in, std::string(kTraceHeader));
  std::vector<TraceRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rows.push_back(parse_row(split(line), 0));
  }
  return rows;
}

std::vector<std::pair<std::string, TraceRow>> read_long_csv(std::istream& in) {
  expect_header(in, "algorithm," + std::string(kTraceHeader));
  std::vector<std::pair<std::string, TraceRow>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    rows.emplace_back(cells.empty() ? std::string() : cells.front(), parse_row(cells, 1));
  }
  return rows;
}

std::string metadata_json(const RunTrace& trace) {
  nlohmann::ordered_json j;
  j["algorithm"] = trace.algorithm;
  j["instance"] = trace.instance_id;
  j["seed"] = trace.seed;
  j["status"] = std::string(to_string(trace.status));
  j["numerical_flag"] = trace.numerical_flag;
  j["hull_failures"] = trace.hull_failures;
  j["iterations"] = trace.rows.empty() ? 0 : trace.rows.back().iter;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : trace.config) cfg[k] = v;
  j["config"] = cfg;
  return j.dump(2) + "\n";
}

}  // namespace lacg
