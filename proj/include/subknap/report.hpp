/**
 * @file report.hpp
 * @brief Per-run records and their CSV encoding.
 *
 * Column order is fixed:
 * instance,algorithm,solver,epsilon,h_eff,h_paper,seed,attempts,value,opt,
 * ratio,feasible,frac_before,frac_after,wall_ms,error
 */

#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

namespace subknap {

/// Shortest-stable float formatting shared by the CSV writer and the
/// instance serializer ("%.17g" round-trips doubles exactly).
inline std::string formatG17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct RunReport {
  std::string instance;
  std::string algorithm; // randomized | deterministic | bruteforce
  std::string solver;
  double epsilon = 0.0;
  long long hEff = 0;
  long long hPaper = 0;
  std::uint64_t seed = 0;
  int attempts = 1;
  double value = 0.0;
  std::optional<double> opt;
  std::optional<double> ratio; // present iff opt is present
  std::string feasibility = "Feasible";
  int fracBefore = -1; // deterministic path only; -1 leaves the cell empty
  int fracAfter = -1;
  long long wallMs = 0;
  std::string error;
};

inline std::string csvHeader() {
  return "instance,algorithm,solver,epsilon,h_eff,h_paper,seed,attempts,value,opt,ratio,feasible,"
         "frac_before,frac_after,wall_ms,error";
}

namespace detail {

/// Cell-safe text: the report format never quotes, so separators are replaced.
inline std::string csvSanitize(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

} // namespace detail

inline std::string csvRow(const RunReport& r, bool timing = true) {
  std::string row;
  row += detail::csvSanitize(r.instance);
  row += ',';
  row += r.algorithm;
  row += ',';
  row += r.solver;
  row += ',';
  row += formatG17(r.epsilon);
  row += ',';
  row += std::to_string(r.hEff);
  row += ',';
  row += std::to_string(r.hPaper);
  row += ',';
  row += std::to_string(r.seed);
  row += ',';
  row += std::to_string(r.attempts);
  row += ',';
  if (r.error.empty()) row += formatG17(r.value);
  row += ',';
  if (r.opt) row += formatG17(*r.opt);
  row += ',';
  if (r.ratio) row += formatG17(*r.ratio);
  row += ',';
  if (r.error.empty()) row += r.feasibility;
  row += ',';
  if (r.fracBefore >= 0) row += std::to_string(r.fracBefore);
  row += ',';
  if (r.fracAfter >= 0) row += std::to_string(r.fracAfter);
  row += ',';
  row += std::to_string(timing ? r.wallMs : 0);
  row += ',';
  row += detail::csvSanitize(r.error);
  return row;
}

} // namespace subknap
