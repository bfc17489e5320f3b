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
#include <limits>
#include <stdexcept>
#include <utility>

#include "sixbar/kinematics.hpp"
#include "sixbar/synthesis.hpp"

namespace sixbar {

/// Design criteria of one synthesized mechanism. Lengths share the
/// stride-normalized scale, c3 is in degrees.
struct CriteriaVector {
  double c1 = 0.0;  // straight-line error over the support phase
  double c2 = 0.0;  // support line height, = x4
  double c3 = 0.0;  // worst acute transmission angle over the cycle [deg]
  double c4 = 0.0;  // L_FP / L_FG
  double c5 = 0.0;  // sum of dips below the support line over the cycle
  double c6 = 0.0;  // sum of heights above the support line over the cycle
  bool feasible = false;
  double h_max = 0.0;  // peak step height, informational

  double operator[](int j) const {
    switch (j) {
      case 0: return c1;
      case 1: return c2;
      case 2: return c3;
      case 3: return c4;
      case 4: return c5;
      default: return c6;
    }
  }
  double& operator[](int j) {
    switch (j) {
      case 0: return c1;
      case 1: return c2;
      case 2: return c3;
      case 3: return c4;
      case 4: return c5;
      default: return c6;
    }
  }

  /// Worst-case values that sort every infeasible record last.
  static CriteriaVector sentinel() {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {inf, -inf, 0.0, inf, inf, -inf, false, -inf};
  }
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

namespace detail {

inline double law_of_cosines_deg(double a, double b, double opposite) {
  constexpr double kTol = 1e-12;
  const double arg = (a * a + b * b - opposite * opposite) / (2.0 * a * b);
  if (!(std::abs(arg) <= 1.0 + kTol))
    throw DomainError("transmission angle: arccos argument out of range");
  return rad_to_deg(std::acos(std::clamp(arg, -1.0, 1.0)));
}

}  // namespace detail

/// Transmission angles at C and F (degrees, law-of-cosines form).
inline std::pair<double, double> transmission_angles(const PoseSample& pose,
                                                     const MechanismParams& p) {
  if (!pose.assembled) throw UndefinedPoseError("transmission_angles: pose is not assembled");
  return {detail::law_of_cosines_deg(p.L_BC, p.L_CD, pose.dist_BD),
          detail::law_of_cosines_deg(p.L_EF, p.L_FG, pose.dist_EG)};
}

/// Deviation-from-collinear form of a transmission angle: 90 is ideal,
/// 0 binds whether the links fold or stretch.
constexpr double acute_angle(double mu_deg) { return std::min(mu_deg, 180.0 - mu_deg); }

/// Distance from F to P; with the foot frame on EF, F sits at (L_EF, 0).
inline double foot_to_knee(double x_P, double y_P, double L_EF) {
  return std::hypot(x_P - L_EF, y_P);
}

inline CriteriaVector evaluate_criteria(const MechanismParams& p, const DesignVars& v,
                                        const SupportGrid& support, const CycleTrace& cycle) {
  CriteriaVector c = CriteriaVector::sentinel();
  const double eta0 = v.eta_0;

  c.c1 = 0.0;
  for (int i = 0; i < support.N; ++i) {
    const Vec2 P = support.E_abs[i] + rotate(support.theta[i], {v.x_P, v.y_P});
    c.c1 = std::max(c.c1, std::abs(eta0 - P.eta));
  }
  c.c2 = v.eta_0;
  c.c4 = foot_to_knee(v.x_P, v.y_P, p.L_EF) / p.L_FG;
  if (!cycle.feasible) return c;

  double worst = 180.0;
  CompensatedSum dips, heights;
  double peak = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < cycle.M; ++j) {
    const auto [mu_bcd, mu_efg] = transmission_angles(cycle.samples[j], p);
    worst = std::min({worst, acute_angle(mu_bcd), acute_angle(mu_efg)});
    const double h = cycle.P_abs[j].eta - eta0;
    dips += std::max(-h, 0.0);
    heights += h;
    peak = std::max(peak, h);
  }
  c.c3 = worst;
  c.c5 = dips.value();
  c.c6 = heights.value();
  c.h_max = peak;
  c.feasible = true;
  return c;
}

}  // namespace sixbar
