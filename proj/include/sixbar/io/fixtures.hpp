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

#include <array>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sixbar/io/config.hpp"

#ifndef SIXBAR_DATA_DIR
#define SIXBAR_DATA_DIR "data"
#endif

namespace sixbar::io {

using CriteriaSubset = std::array<std::optional<double>, 6>;

/// Published mechanism with its reported design variables and criteria.
struct ReferenceFixture {
  std::string label;
  MechanismParams params;
  DesignVars expected_vars;
  CriteriaSubset expected_criteria;
  std::vector<std::string> source;
  std::string cleaning_notes;
};

struct FixtureManifest {
  AssemblyConventions conventions;
  VarsReport report = VarsReport::Realized;
  int N = 20;
  int calibrated_M = 360;
  double vars_relative_tol = 0.02;
  double c4_absolute_tol = 1e-3;
};

struct FixtureSet {
  FixtureManifest manifest;
  std::vector<ReferenceFixture> fixtures;

  const ReferenceFixture& at(const std::string& label) const {
    for (const auto& f : fixtures)
      if (f.label == label) return f;
    throw ConfigError("no fixture labelled " + label);
  }
};

/// One printed row of a criteria table.
struct TableRow {
  std::string label;
  CriteriaSubset criteria;
};

/// Root of the shipped data; SIXBAR_DATA_DIR in the environment wins.
inline std::string data_dir() {
  if (const char* env = std::getenv("SIXBAR_DATA_DIR"); env && *env) return env;
  return SIXBAR_DATA_DIR;
}

namespace detail {

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ":" + position_of(text, e.byte) + ": " + e.what());
  }
}

inline CriteriaSubset criteria_subset(const json& j) {
  CriteriaSubset out;
  for (int k = 0; k < 6; ++k) {
    const std::string key = "c" + std::to_string(k + 1);
    if (j.contains(key)) out[k] = j.at(key).get<double>();
  }
  return out;
}

}  // namespace detail

inline FixtureSet load_fixtures(const std::string& path) {
  const json j = detail::read_json_file(path);
  FixtureSet set;
  try {
    const json& m = j.at("manifest");
    const json& conv = m.at("conventions");
    set.manifest.conventions.branch_BCD = conv.at("branch_BCD").get<int>();
    set.manifest.conventions.branch_EFG = conv.at("branch_EFG").get<int>();
    set.manifest.conventions.theta_frame = parse_theta_frame(conv.at("theta_frame").get<std::string>());
    set.manifest.report = parse_report(m.at("report").get<std::string>());
    set.manifest.N = m.at("N").get<int>();
    set.manifest.calibrated_M = m.at("calibrated_M").get<int>();
    set.manifest.vars_relative_tol = m.at("tolerances").at("vars_relative").get<double>();
    set.manifest.c4_absolute_tol = m.at("tolerances").at("c4_absolute").get<double>();
    for (const json& f : j.at("fixtures")) {
      ReferenceFixture pf;
      pf.label = f.at("label").get<std::string>();
      pf.params = MechanismParams::from_vector(detail::param_array(f.at("params"), pf.label + ".params"));
      const auto x = f.at("expected_vars").get<std::vector<double>>();
      if (x.size() != 5) throw ConfigError(path + ": " + pf.label + ".expected_vars needs 5 values");
      pf.expected_vars = {x[0], x[1], x[2], x[3], x[4]};
      pf.expected_criteria = detail::criteria_subset(f.at("expected_criteria"));
      pf.source = f.at("source").get<std::vector<std::string>>();
      pf.cleaning_notes = f.at("cleaning_notes").get<std::string>();
      set.fixtures.push_back(std::move(pf));
    }
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return set;
}

inline FixtureSet load_fixtures() { return load_fixtures(data_dir() + "/fixtures/solutions.json"); }

/// Rows in printed order.
inline std::vector<TableRow> load_table(const std::string& path) {
  const json j = detail::read_json_file(path);
  std::vector<TableRow> rows;
  try {
    for (const json& r : j.at("rows")) rows.push_back({r.at("label").get<std::string>(), detail::criteria_subset(r)});
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return rows;
}

/// Wraps printed rows as ok trial records so they go through filter/sort.
inline TrialTable table_as_trials(const std::vector<TableRow>& rows) {
  TrialTable t;
  for (const auto& r : rows) {
    TrialRecord rec;
    rec.index = std::stoull(r.label);
    rec.status = TrialStatus::Ok;
    for (int k = 0; k < 6; ++k)
      if (r.criteria[k]) rec.criteria[k] = *r.criteria[k];
    rec.criteria.feasible = true;
    t.push_back(rec);
  }
  return t;
}

}  // namespace sixbar::io
