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
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sixbar/design_vars.hpp"
#include "sixbar/geometry.hpp"

namespace sixbar {

inline constexpr int kParamCount = 13;
using ParamVector = std::array<double, kParamCount>;

/// Index of the two angular entries (degrees) in the p1..p13 ordering.
inline constexpr int kPhi0Index = 5;
inline constexpr int kDeltaPhiIndex = 6;

constexpr bool is_angle_param(int j) { return j == kPhi0Index || j == kDeltaPhiIndex; }

/// The 13 searched linkage parameters. Angles are kept in degrees, as they
/// appear in configuration files and tables; kinematics converts on use.
struct MechanismParams {
  Vec2 frame_D;          // p1, p2
  Vec2 frame_G;          // p3, p4
  double r_AB = 0.1;     // p5
  double phi_0 = 0.0;    // p6 [deg]
  double delta_Phi = 185.0;  // p7 [deg]
  double L_BC = 0.5;     // p8
  double L_CD = 0.5;     // p9
  Vec2 E_local;          // p10, p11 in the B-frame whose x axis runs along BC
  double L_EF = 0.3;     // p12
  double L_FG = 0.7;     // p13
  Vec2 frame_A{};        // fixed at the origin, not searched

  static MechanismParams from_vector(const ParamVector& p) {
    MechanismParams m;
    m.frame_D = {p[0], p[1]};
    m.frame_G = {p[2], p[3]};
    m.r_AB = p[4];
    m.phi_0 = p[5];
    m.delta_Phi = p[6];
    m.L_BC = p[7];
    m.L_CD = p[8];
    m.E_local = {p[9], p[10]};
    m.L_EF = p[11];
    m.L_FG = p[12];
    return m;
  }

  ParamVector to_vector() const {
    return {frame_D.xi, frame_D.eta, frame_G.xi, frame_G.eta, r_AB, phi_0, delta_Phi,
            L_BC,       L_CD,        E_local.xi, E_local.eta, L_EF, L_FG};
  }

  /// Empty string when valid, otherwise the violated invariant.
  std::string validate() const {
    for (double v : to_vector())
      if (!std::isfinite(v)) return "all parameters must be finite";
    if (!(r_AB > 0.0 && L_BC > 0.0 && L_CD > 0.0 && L_EF > 0.0 && L_FG > 0.0))
      return "link lengths must be positive";
    if (!(delta_Phi >= 180.0)) return "delta_Phi must be at least 180 deg";
    return {};
  }

  bool operator==(const MechanismParams&) const = default;
};

enum class ThetaFrame { CouplerEF, CrankFG };

/// Resolves the +-arccos branch of each dyad and which link orientation
/// carries the foot frame.
struct AssemblyConventions {
  int branch_BCD = +1;
  int branch_EFG = +1;
  ThetaFrame theta_frame = ThetaFrame::CouplerEF;

  bool operator==(const AssemblyConventions&) const = default;
};

struct PoseSample {
  double phi = 0.0;  // crank angle [rad]
  Vec2 B, C, E, F;
  double phi_BC = 0.0;
  double phi_EF = 0.0;
  double theta = 0.0;  // foot-frame orientation
  double dist_BD = 0.0;
  double dist_EG = 0.0;
  bool assembled = false;
};

struct DyadSolution {
  Vec2 joint;
  double link_angle = 0.0;
  bool assembled = false;
};

class AssemblyError : public std::runtime_error {
 public:
  AssemblyError(const std::string& what, int sample) : std::runtime_error(what), sample_(sample) {}
  int sample() const { return sample_; }

 private:
  int sample_;
};

class UndefinedPoseError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Closes the dyad moving_anchor -> joint -> fixed_anchor with link lengths
/// len_near (moving side) and len_far. link_angle is the absolute angle of
/// the near link.
inline DyadSolution solve_dyad(Vec2 moving_anchor, Vec2 fixed_anchor, double len_near,
                               double len_far, int branch) {
  constexpr double kClampTol = 1e-12;
  DyadSolution out;
  const double gap = distance(moving_anchor, fixed_anchor);
  if (!(gap > 0.0)) return out;
  const double cos_arg =
      (gap * gap + len_near * len_near - len_far * len_far) / (2.0 * len_near * gap);
  if (!(std::abs(cos_arg) <= 1.0 + kClampTol)) return out;
  const double spread = std::acos(std::clamp(cos_arg, -1.0, 1.0));
  out.link_angle = direction_angle(moving_anchor, fixed_anchor) + (branch >= 0 ? spread : -spread);
  out.joint = moving_anchor + rotate(out.link_angle, {len_near, 0.0});
  out.assembled = true;
  return out;
}

/// Dyad-by-dyad position analysis at crank angle phi [rad].
inline PoseSample pose_at(const MechanismParams& p, const AssemblyConventions& conv, double phi) {
  PoseSample s;
  s.phi = phi;
  s.B = p.frame_A + rotate(phi, {p.r_AB, 0.0});
  s.dist_BD = distance(s.B, p.frame_D);
  const DyadSolution bcd = solve_dyad(s.B, p.frame_D, p.L_BC, p.L_CD, conv.branch_BCD);
  if (!bcd.assembled) return s;
  s.C = bcd.joint;
  s.phi_BC = bcd.link_angle;
  s.E = s.B + rotate(s.phi_BC, p.E_local);
  s.dist_EG = distance(s.E, p.frame_G);
  const DyadSolution efg = solve_dyad(s.E, p.frame_G, p.L_EF, p.L_FG, conv.branch_EFG);
  if (!efg.assembled) return s;
  s.F = efg.joint;
  s.phi_EF = efg.link_angle;
  s.theta = conv.theta_frame == ThetaFrame::CouplerEF ? s.phi_EF
                                                      : direction_angle(p.frame_G, s.F);
  s.assembled = true;
  return s;
}

/// Absolute foot point: E + Gamma(theta) * (x_P, y_P).
inline Vec2 foot_position(const PoseSample& pose, double x_P, double y_P) {
  if (!pose.assembled) throw UndefinedPoseError("foot_position: pose is not assembled");
  return pose.E + rotate(pose.theta, {x_P, y_P});
}

/// Crank angles and coupler data sampled over the support phase.
struct SupportGrid {
  int N = 0;
  std::vector<double> phi;    // [rad]
  std::vector<double> theta;  // [rad]
  std::vector<Vec2> E_abs;

  /// (i-1)/(N-1) for the zero-based sample i.
  double fraction(int i) const { return static_cast<double>(i) / static_cast<double>(N - 1); }
};

inline double support_angle(const MechanismParams& p, int i, int N) {
  return deg_to_rad(p.phi_0) +
         deg_to_rad(p.delta_Phi) * (static_cast<double>(i) / static_cast<double>(N - 1));
}

/// Non-throwing support trace; on failure returns nullopt and stores the
/// zero-based index of the first unassembled sample in *failed_at.
inline std::optional<SupportGrid> try_trace_support(const MechanismParams& p,
                                                    const AssemblyConventions& conv, int N,
                                                    int* failed_at = nullptr) {
  if (N < 2) throw std::invalid_argument("trace_support: N must be at least 2");
  SupportGrid g;
  g.N = N;
  g.phi.reserve(N);
  g.theta.reserve(N);
  g.E_abs.reserve(N);
  for (int i = 0; i < N; ++i) {
    const PoseSample s = pose_at(p, conv, support_angle(p, i, N));
    if (!s.assembled) {
      if (failed_at) *failed_at = i;
      return std::nullopt;
    }
    g.phi.push_back(s.phi);
    g.theta.push_back(s.theta);
    g.E_abs.push_back(s.E);
  }
  return g;
}

inline SupportGrid trace_support(const MechanismParams& p, const AssemblyConventions& conv,
                                 int N) {
  int failed = -1;
  auto g = try_trace_support(p, conv, N, &failed);
  if (!g)
    throw AssemblyError("support phase fails to assemble at sample " + std::to_string(failed + 1),
                        failed);
  return *std::move(g);
}

/// Full crank revolution sampled uniformly on [0, 2pi).
struct CycleTrace {
  int M = 0;
  std::vector<PoseSample> samples;
  std::vector<Vec2> P_abs;  // NaN where the pose does not assemble
  bool feasible = false;    // every sample assembled, i.e. the crank fully rotates
};

inline double cycle_angle(int j, int M) { return 2.0 * kPi * static_cast<double>(j) / M; }

inline CycleTrace trace_cycle(const MechanismParams& p, const AssemblyConventions& conv,
                              const DesignVars& vars, int M) {
  if (M < 2) throw std::invalid_argument("trace_cycle: M must be at least 2");
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  CycleTrace t;
  t.M = M;
  t.samples.reserve(M);
  t.P_abs.reserve(M);
  t.feasible = true;
  for (int j = 0; j < M; ++j) {
    PoseSample s = pose_at(p, conv, cycle_angle(j, M));
    if (s.assembled) {
      t.P_abs.push_back(foot_position(s, vars.x_P, vars.y_P));
    } else {
      t.P_abs.push_back({nan, nan});
      t.feasible = false;
    }
    t.samples.push_back(s);
  }
  return t;
}

}  // namespace sixbar
