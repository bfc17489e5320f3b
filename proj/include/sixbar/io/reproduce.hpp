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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "sixbar/io/fixtures.hpp"

namespace sixbar::io {

struct ReproduceConfig {
  AssemblyConventions conventions;
  int N = 20;
  int M = 360;
  VarsReport report = VarsReport::Realized;

  bool operator==(const ReproduceConfig&) const = default;
};

inline ReproduceConfig manifest_config(const FixtureManifest& m) {
  return {m.conventions, m.N, m.calibrated_M, m.report};
}

inline std::string describe(const ReproduceConfig& c) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "branch_BCD=%+d branch_EFG=%+d theta=%s N=%d M=%d report=%s",
                c.conventions.branch_BCD, c.conventions.branch_EFG, to_string(c.conventions.theta_frame),
                c.N, c.M, to_string(c.report));
  return buf;
}

/// `relative`: tolerance is on |a-e|/|e|, else on |a-e|. Soft fields never fail the run.
struct FieldComparison {
  std::string field;
  double expected = 0.0;
  double actual = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;
  double tolerance = 0.0;
  bool relative = true;
  bool hard = false;
  bool pass = false;
};

struct FixtureReport {
  std::string label;
  TrialStatus status = TrialStatus::AssemblyFailed;
  std::vector<FieldComparison> fields;
  double max_vars_rel_error = std::numeric_limits<double>::infinity();
  bool hard_pass = false;
};

struct ReproductionReport {
  ReproduceConfig config;
  std::vector<FixtureReport> fixtures;
  double max_vars_rel_error = 0.0;
  bool hard_pass = true;
};

/// Tolerances for pipeline criteria against printed values; the tables give
/// 3 decimals (0.1 deg for c3) and c5/c6 depend on the cycle grid.
struct CriteriaTolerances {
  double c1_abs = 1e-3;
  double c2_abs = 1e-3;
  double c3_abs = 0.1;
  double c4_abs = 1e-3;
  double c5_rel = 0.02;
  double c6_rel = 0.02;
};

namespace detail {

inline FieldComparison compare(std::string field, double expected, double actual, double tol, bool relative,
                               bool hard) {
  FieldComparison f{std::move(field), expected, actual, std::abs(actual - expected), 0.0, tol, relative, hard, false};
  f.rel_error = expected != 0.0 ? f.abs_error / std::abs(expected) : f.abs_error;
  const double err = relative ? f.rel_error : f.abs_error;
  f.pass = std::isfinite(actual) && err <= tol;
  return f;
}

}  // namespace detail

inline FixtureReport reproduce_fixture(const ReferenceFixture& fx, const ReproduceConfig& cfg, double vars_tol,
                                       const CriteriaTolerances& tol = {}) {
  FixtureReport rep;
  rep.label = fx.label;
  EvalSettings es;
  es.N = cfg.N;
  es.M = cfg.M;
  es.conventions = cfg.conventions;
  es.report = cfg.report;
  const TrialRecord rec = evaluate_trial(fx.params, es);
  rep.status = rec.status;

  static const char* xnames[5] = {"x1", "x2", "x3", "x4", "x5"};
  rep.max_vars_rel_error = 0.0;
  for (int k = 0; k < 5; ++k) {
    auto f = detail::compare(xnames[k], fx.expected_vars[k], rec.vars[k], vars_tol, true, true);
    rep.max_vars_rel_error = std::max(rep.max_vars_rel_error, std::isfinite(f.rel_error) && std::isfinite(rec.vars[k])
                                                                  ? f.rel_error
                                                                  : std::numeric_limits<double>::infinity());
    rep.fields.push_back(f);
  }

  // c4 straight from the published variables, no synthesis involved
  if (fx.expected_criteria[3]) {
    const double c4 = foot_to_knee(fx.expected_vars.x_P, fx.expected_vars.y_P, fx.params.L_EF) / fx.params.L_FG;
    rep.fields.push_back(detail::compare("c4(published x)", *fx.expected_criteria[3], c4, tol.c4_abs, false, true));
  }

  const double ctol[6] = {tol.c1_abs, tol.c2_abs, tol.c3_abs, tol.c4_abs, tol.c5_rel, tol.c6_rel};
  const bool crel[6] = {false, false, false, false, true, true};
  for (int k = 0; k < 6; ++k) {
    if (!fx.expected_criteria[k]) continue;
    rep.fields.push_back(detail::compare("c" + std::to_string(k + 1), *fx.expected_criteria[k], rec.criteria[k],
                                         ctol[k], crel[k], false));
  }

  rep.hard_pass = rec.status == TrialStatus::Ok;
  for (const auto& f : rep.fields)
    if (f.hard && !f.pass) rep.hard_pass = false;
  return rep;
}

inline ReproductionReport reproduce_tables(const FixtureSet& set, const ReproduceConfig& cfg,
                                           const CriteriaTolerances& tol = {}) {
  ReproductionReport r;
  r.config = cfg;
  for (const auto& fx : set.fixtures) {
    r.fixtures.push_back(reproduce_fixture(fx, cfg, set.manifest.vars_relative_tol, tol));
    r.max_vars_rel_error = std::max(r.max_vars_rel_error, r.fixtures.back().max_vars_rel_error);
    r.hard_pass = r.hard_pass && r.fixtures.back().hard_pass;
  }
  return r;
}

inline ReproductionReport reproduce_tables(const FixtureSet& set) {
  return reproduce_tables(set, manifest_config(set.manifest));
}

struct SweepEntry {
  ReproduceConfig config;
  double max_vars_rel_error = 0.0;
  bool hard_pass = false;
};

struct SweepResult {
  std::vector<SweepEntry> entries;  // enumeration order
  std::size_t best = 0;             // smallest max_vars_rel_error, first on ties
  ReproductionReport best_report;
};

/// Branches x theta frame x N x report mode; M is held at `M`.
inline SweepResult convention_sweep(const FixtureSet& set, int M,
                                    const std::vector<int>& Ns = {20, 50, 100, 180}) {
  SweepResult out;
  double best_err = std::numeric_limits<double>::infinity();
  for (int bBCD : {+1, -1})
    for (int bEFG : {+1, -1})
      for (ThetaFrame tf : {ThetaFrame::CouplerEF, ThetaFrame::CrankFG})
        for (int N : Ns)
          for (VarsReport rep : {VarsReport::Realized, VarsReport::Fitted}) {
            ReproduceConfig c{{bBCD, bEFG, tf}, N, M, rep};
            ReproductionReport r = reproduce_tables(set, c);
            out.entries.push_back({c, r.max_vars_rel_error, r.hard_pass});
            if (r.max_vars_rel_error < best_err) {
              best_err = r.max_vars_rel_error;
              out.best = out.entries.size() - 1;
              out.best_report = std::move(r);
            }
          }
  return out;
}

struct CalibrationPoint {
  int M = 0;
  double score = 0.0;  // mean relative error of the printed c5/c6 values
};

/// Scans the cycle sample count against the printed c5/c6 of every fixture.
inline std::vector<CalibrationPoint> calibrate_M(const FixtureSet& set, const ReproduceConfig& base, int lo, int hi) {
  std::vector<CalibrationPoint> out;
  for (int M = lo; M <= hi; ++M) {
    ReproduceConfig c = base;
    c.M = M;
    double sum = 0.0;
    int n = 0;
    for (const auto& fx : set.fixtures) {
      EvalSettings es{c.N, c.M, c.conventions, c.report, false};
      const TrialRecord rec = evaluate_trial(fx.params, es);
      for (int k : {4, 5}) {
        if (!fx.expected_criteria[k]) continue;
        sum += std::abs(rec.criteria[k] - *fx.expected_criteria[k]) / std::abs(*fx.expected_criteria[k]);
        ++n;
      }
    }
    out.push_back({M, n ? sum / n : 0.0});
  }
  return out;
}

inline const CalibrationPoint& best_calibration(const std::vector<CalibrationPoint>& pts) {
  return *std::min_element(pts.begin(), pts.end(),
                           [](const auto& a, const auto& b) { return a.score < b.score; });
}

inline std::string format_report(const ReproductionReport& r) {
  std::string out = "config: " + describe(r.config) + "\n";
  char buf[200];
  for (const auto& fx : r.fixtures) {
    out += "fixture " + fx.label + " status=" + to_string(fx.status) + (fx.hard_pass ? " PASS" : " FAIL") + "\n";
    for (const auto& f : fx.fields) {
      std::snprintf(buf, sizeof buf, "  %-16s expected %12.6g  got %12.6g  rel %.3e  abs %.3e  tol %g%s  %s%s\n",
                    f.field.c_str(), f.expected, f.actual, f.rel_error, f.abs_error, f.tolerance,
                    f.relative ? "rel" : "abs", f.pass ? "ok" : "off", f.hard ? "" : " (soft)");
      out += buf;
    }
  }
  std::snprintf(buf, sizeof buf, "max x relative error %.3e -> %s\n", r.max_vars_rel_error,
                r.hard_pass ? "PASS" : "FAIL");
  out += buf;
  return out;
}

}  // namespace sixbar::io
