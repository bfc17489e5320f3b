/*******************************************************************************
 * Copyright 2026 The sixbar Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *******************************************************************************/

#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "sixbar/criteria.hpp"
#include "sixbar/search.hpp"

namespace sixbar::io {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InfeasibleCycleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest text of at most 17 significant digits; always '.' as decimal
/// separator and round-trips through parse_double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw IoError("not a number: '" + std::string(s) + "'");
  return v;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ls(line);
  while (std::getline(ls, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline std::string trials_header() {
  std::string h = "index";
  for (int j = 1; j <= kParamCount; ++j) h += ",p" + std::to_string(j);
  for (int j = 1; j <= 5; ++j) h += ",x" + std::to_string(j);
  for (int j = 1; j <= 6; ++j) h += ",c" + std::to_string(j);
  return h + ",status";
}

inline void write_trials(std::ostream& os, const TrialTable& table) {
  os << trials_header() << '\n';
  for (const TrialRecord& r : table) {
    os << r.index;
    for (double v : r.params.to_vector()) os << ',' << format_double(v);
    for (int j = 0; j < 5; ++j) os << ',' << format_double(r.vars[j]);
    for (int j = 0; j < 6; ++j) os << ',' << format_double(r.criteria[j]);
    os << ',' << to_string(r.status) << '\n';
  }
}

inline TrialTable read_trials(std::istream& is, const std::string& source = "<csv>") {
  std::string line;
  if (!std::getline(is, line) || line != trials_header())
    throw IoError(source + ": missing or unexpected trial-table header");
  TrialTable table;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 1 + kParamCount + 5 + 6 + 1)
      throw IoError(source + ":" + std::to_string(lineno) + ": wrong column count");
    try {
      TrialRecord r;
      r.index = std::stoull(cells[0]);
      ParamVector p;
      for (int j = 0; j < kParamCount; ++j) p[j] = parse_double(cells[1 + j]);
      r.params = MechanismParams::from_vector(p);
      for (int j = 0; j < 5; ++j) r.vars[j] = parse_double(cells[1 + kParamCount + j]);
      for (int j = 0; j < 6; ++j) r.criteria[j] = parse_double(cells[1 + kParamCount + 5 + j]);
      const auto status = parse_status(cells.back());
      if (!status) throw IoError("unknown status '" + cells.back() + "'");
      r.status = *status;
      r.criteria.feasible = r.status == TrialStatus::Ok;
      r.criteria.h_max = std::numeric_limits<double>::quiet_NaN();
      table.push_back(r);
    } catch (const std::exception& e) {
      throw IoError(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return table;
}

/// Trial table as CSV, one row per trial in table order.
inline void export_trials(const TrialTable& table, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path);
  write_trials(os, table);
  if (!os) throw IoError("write failed: " + path);
}

inline TrialTable import_trials(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot read " + path);
  return read_trials(is, path);
}

namespace detail {

inline double wrap_deg(double deg) {
  double w = std::remainder(deg, 360.0);
  if (w <= -180.0) w += 360.0;
  return w;
}

/// "a..b, c..d" crank ranges [deg] of unassembled samples.
inline std::string failing_ranges(const CycleTrace& t) {
  std::string out;
  int j = 0;
  while (j < t.M) {
    if (t.samples[j].assembled) {
      ++j;
      continue;
    }
    int end = j;
    while (end + 1 < t.M && !t.samples[end + 1].assembled) ++end;
    if (!out.empty()) out += ", ";
    out += format_double(rad_to_deg(t.samples[j].phi)) + ".." +
           format_double(rad_to_deg(t.samples[end].phi));
    j = end + 1;
  }
  return out;
}

}  // namespace detail

inline void write_trace(std::ostream& os, const MechanismParams& params, const CycleTrace& t) {
  if (!t.feasible)
    throw InfeasibleCycleError("crank cannot fully rotate; fails for phi in [deg] " +
                               detail::failing_ranges(t));
  os << "phi_deg,xi_P,eta_P,theta_deg,mu_BCD,mu_EFG,assembled\n";
  for (int j = 0; j < t.M; ++j) {
    const PoseSample& s = t.samples[j];
    const auto [mu_bcd, mu_efg] = transmission_angles(s, params);
    os << format_double(rad_to_deg(s.phi)) << ',' << format_double(t.P_abs[j].xi) << ','
       << format_double(t.P_abs[j].eta) << ',' << format_double(detail::wrap_deg(rad_to_deg(s.theta)))
       << ',' << format_double(mu_bcd) << ',' << format_double(mu_efg) << ','
       << (s.assembled ? 1 : 0) << '\n';
  }
}

/// Full-cycle foot trajectory and transmission angles as CSV.
inline void export_trace(const MechanismParams& params, const DesignVars& vars,
                         const AssemblyConventions& conv, int M, const std::string& path) {
  const CycleTrace t = trace_cycle(params, conv, vars, M);
  std::ostringstream buf;
  write_trace(buf, params, t);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path);
  os << buf.str();
  if (!os) throw IoError("write failed: " + path);
}

}  // namespace sixbar::io
