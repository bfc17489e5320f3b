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

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sixbar/io/fixtures.hpp"

using namespace sixbar;

namespace {

const io::FixtureSet& fixtures() {
  static const io::FixtureSet set = io::load_fixtures();
  return set;
}

AssemblyConventions conventions() { return fixtures().manifest.conventions; }

}  // namespace

TEST(SolveDyad, EquilateralTriangle) {
  const DyadSolution d = solve_dyad({0.0, 0.0}, {1.0, 0.0}, 1.0, 1.0, +1);
  ASSERT_TRUE(d.assembled);
  EXPECT_NEAR(d.joint.xi, 0.5, 1e-15);
  EXPECT_NEAR(d.joint.eta, std::sqrt(3.0) / 2.0, 1e-15);
  EXPECT_NEAR(d.link_angle, kPi / 3.0, 1e-15);
}

TEST(SolveDyad, CollinearStretchAssembles) {
  const DyadSolution d = solve_dyad({0.0, 0.0}, {2.0, 0.0}, 1.0, 1.0, +1);
  ASSERT_TRUE(d.assembled);
  EXPECT_NEAR(d.joint.xi, 1.0, 1e-15);
  EXPECT_NEAR(d.joint.eta, 0.0, 1e-15);
}

TEST(SolveDyad, UnreachableAndCoincident) {
  EXPECT_FALSE(solve_dyad({0.0, 0.0}, {3.0, 0.0}, 1.0, 1.0, +1).assembled);
  EXPECT_FALSE(solve_dyad({0.0, 0.0}, {0.1, 0.0}, 1.0, 0.5, +1).assembled);
  EXPECT_FALSE(solve_dyad({1.0, 1.0}, {1.0, 1.0}, 1.0, 1.0, +1).assembled);
}

TEST(SolveDyad, BranchFlipMirrorsAcrossAnchorLine) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2.0, 2.0), L(0.3, 2.0);
  int n = 0;
  while (n < 500) {
    const Vec2 a{u(rng), u(rng)}, b{u(rng), u(rng)};
    const double la = L(rng), lb = L(rng);
    const auto up = solve_dyad(a, b, la, lb, +1);
    const auto dn = solve_dyad(a, b, la, lb, -1);
    if (!up.assembled) continue;
    ASSERT_TRUE(dn.assembled);
    // mirror of up across line ab
    const Vec2 ab = b - a, ap = up.joint - a;
    const double t = (ap.xi * ab.xi + ap.eta * ab.eta) / (ab.xi * ab.xi + ab.eta * ab.eta);
    const Vec2 foot = a + ab * t;
    const Vec2 mirror = foot * 2.0 - up.joint;
    EXPECT_NEAR(dn.joint.xi, mirror.xi, 1e-12);
    EXPECT_NEAR(dn.joint.eta, mirror.eta, 1e-12);
    // positive branch sits to the left of a -> b
    const double cross = ab.xi * ap.eta - ab.eta * ap.xi;
    EXPECT_GE(cross, -1e-12);
    ++n;
  }
}

TEST(SolveDyad, AgreesWithNewtonOracle) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0), L(0.3, 2.0), nudge(-0.05, 0.05);
  int n = 0;
  while (n < 2000) {
    const Vec2 a{u(rng), u(rng)}, b{u(rng), u(rng)};
    const double la = L(rng), lb = L(rng);
    const int branch = rng() & 1 ? 1 : -1;
    const auto d = solve_dyad(a, b, la, lb, branch);
    if (!d.assembled) continue;
    // skip near-tangent configurations where the two roots merge
    const double gap = distance(a, b);
    if (gap > la + lb - 0.05 || gap < std::abs(la - lb) + 0.05) continue;
    const auto root = oracle::newton_dyad(a, b, la, lb, d.joint + Vec2{nudge(rng), nudge(rng)});
    ASSERT_TRUE(root);
    EXPECT_NEAR(root->xi, d.joint.xi, 1e-9);
    EXPECT_NEAR(root->eta, d.joint.eta, 1e-9);
    ++n;
  }
}

TEST(PoseAt, ZeroKneeOffsetPutsEOnB) {
  MechanismParams p = fixtures().at("7146").params;
  p.E_local = {0.0, 0.0};
  for (int j = 0; j < 36; ++j) {
    const PoseSample s = pose_at(p, conventions(), cycle_angle(j, 36));
    if (!s.assembled) continue;
    EXPECT_EQ(s.E.xi, s.B.xi);
    EXPECT_EQ(s.E.eta, s.B.eta);
  }
}

TEST(PoseAt, BarLengthsOfPublishedMechanism) {
  const MechanismParams& p = fixtures().at("19597").params;
  const PoseSample s = pose_at(p, conventions(), deg_to_rad(p.phi_0));
  ASSERT_TRUE(s.assembled);
  EXPECT_NEAR(distance(s.B, s.C) / p.L_BC, 1.0, 1e-12);
  EXPECT_NEAR(distance(s.C, p.frame_D) / p.L_CD, 1.0, 1e-12);
  EXPECT_NEAR(distance(s.E, s.F) / p.L_EF, 1.0, 1e-12);
  EXPECT_NEAR(distance(s.F, p.frame_G) / p.L_FG, 1.0, 1e-12);
  EXPECT_NEAR(distance(p.frame_A, s.B) / p.r_AB, 1.0, 1e-12);
}

// Joint positions from solving both vector loops by Newton iteration,
// seeded from a coarse continuation over the crank angle.
TEST(PoseAt, MatchesLoopClosureOracle) {
  for (const auto& fx : fixtures().fixtures) {
    const MechanismParams& p = fx.params;
    for (int j = 0; j < 90; ++j) {
      const double phi = cycle_angle(j, 90);
      const PoseSample s = pose_at(p, conventions(), phi);
      ASSERT_TRUE(s.assembled) << fx.label;
      const Vec2 B = rotate(phi, {p.r_AB, 0.0});
      const auto C = oracle::newton_dyad(B, p.frame_D, p.L_BC, p.L_CD, s.C + Vec2{0.02, -0.02});
      ASSERT_TRUE(C);
      const Vec2 E = B + rotate(std::atan2(C->eta - B.eta, C->xi - B.xi), p.E_local);
      const auto F = oracle::newton_dyad(E, p.frame_G, p.L_EF, p.L_FG, s.F + Vec2{-0.02, 0.02});
      ASSERT_TRUE(F);
      EXPECT_NEAR(C->xi, s.C.xi, 1e-9);
      EXPECT_NEAR(C->eta, s.C.eta, 1e-9);
      EXPECT_NEAR(E.xi, s.E.xi, 1e-9);
      EXPECT_NEAR(E.eta, s.E.eta, 1e-9);
      EXPECT_NEAR(F->xi, s.F.xi, 1e-9);
      EXPECT_NEAR(F->eta, s.F.eta, 1e-9);
    }
  }
}

TEST(PoseAt, ThetaFrames) {
  const MechanismParams& p = fixtures().at("8398").params;
  AssemblyConventions crank = conventions();
  crank.theta_frame = ThetaFrame::CrankFG;
  const PoseSample a = pose_at(p, conventions(), 1.0);
  const PoseSample b = pose_at(p, crank, 1.0);
  ASSERT_TRUE(a.assembled && b.assembled);
  EXPECT_DOUBLE_EQ(a.theta, a.phi_EF);
  EXPECT_NEAR(b.theta, std::atan2(b.F.eta - p.frame_G.eta, b.F.xi - p.frame_G.xi), 1e-15);
}

TEST(FootPosition, ZeroOffsetReturnsKnee) {
  const PoseSample s = pose_at(fixtures().at("7146").params, conventions(), 0.3);
  const Vec2 P = foot_position(s, 0.0, 0.0);
  EXPECT_EQ(P.xi, s.E.xi);
  EXPECT_EQ(P.eta, s.E.eta);
}

TEST(FootPosition, PureTranslation) {
  PoseSample s;
  s.assembled = true;
  s.E = {5.0, 5.0};
  s.theta = 0.0;
  const Vec2 P = foot_position(s, 1.0, 2.0);
  EXPECT_DOUBLE_EQ(P.xi, 6.0);
  EXPECT_DOUBLE_EQ(P.eta, 7.0);
}

TEST(FootPosition, UnassembledPoseThrows) {
  EXPECT_THROW(foot_position(PoseSample{}, 0.1, 0.1), UndefinedPoseError);
}

TEST(FootPosition, CouplerRigidOverCycle) {
  const auto& fx = fixtures().at("8398");
  const CycleTrace t = trace_cycle(fx.params, conventions(), fx.expected_vars, 720);
  ASSERT_TRUE(t.feasible);
  const double ref = distance(t.samples[0].F, t.P_abs[0]);
  for (int j = 0; j < t.M; ++j) EXPECT_NEAR(distance(t.samples[j].F, t.P_abs[j]), ref, 1e-10);
}

TEST(TraceSupport, EndpointsOnly) {
  MechanismParams p = fixtures().at("7146").params;
  const SupportGrid g = trace_support(p, conventions(), 2);
  ASSERT_EQ(g.N, 2);
  EXPECT_DOUBLE_EQ(g.phi[0], deg_to_rad(p.phi_0));
  EXPECT_DOUBLE_EQ(g.phi[1], deg_to_rad(p.phi_0 + p.delta_Phi));
}

TEST(TraceSupport, Midpoint) {
  MechanismParams p = fixtures().at("7146").params;
  p.phi_0 = 0.0;
  p.delta_Phi = 180.0;
  EXPECT_DOUBLE_EQ(support_angle(p, 0, 3), 0.0);
  EXPECT_DOUBLE_EQ(support_angle(p, 1, 3), kPi / 2.0);
  EXPECT_DOUBLE_EQ(support_angle(p, 2, 3), kPi);
}

TEST(TraceSupport, PublishedMechanismAssemblesAtHundredSamples) {
  const SupportGrid g = trace_support(fixtures().at("7146").params, conventions(), 100);
  EXPECT_EQ(g.N, 100);
  EXPECT_EQ(g.theta.size(), 100u);
}

TEST(TraceSupport, ReportsFirstFailingSample) {
  MechanismParams p = fixtures().at("7146").params;
  p.L_CD = 0.01;  // BCD can no longer close
  try {
    trace_support(p, conventions(), 10);
    FAIL() << "expected AssemblyError";
  } catch (const AssemblyError& e) {
    EXPECT_EQ(e.sample(), 0);
  }
  int at = -1;
  EXPECT_FALSE(try_trace_support(p, conventions(), 10, &at));
  EXPECT_EQ(at, 0);
}

TEST(TraceCycle, FirstSampleMatchesStandalonePose) {
  const auto& fx = fixtures().at("7146");
  const CycleTrace t = trace_cycle(fx.params, conventions(), fx.expected_vars, 360);
  const Vec2 P = foot_position(pose_at(fx.params, conventions(), 0.0), fx.expected_vars.x_P, fx.expected_vars.y_P);
  EXPECT_EQ(t.P_abs[0].xi, P.xi);
  EXPECT_EQ(t.P_abs[0].eta, P.eta);
}

TEST(TraceCycle, PublishedMechanismRotatesFully) {
  const auto& fx = fixtures().at("8398");
  const CycleTrace t = trace_cycle(fx.params, conventions(), fx.expected_vars, 360);
  EXPECT_TRUE(t.feasible);
  for (const auto& s : t.samples) EXPECT_TRUE(s.assembled);
}

TEST(TraceCycle, StepShrinksWithRefinement) {
  const auto& fx = fixtures().at("8398");
  auto max_step = [&](int M) {
    const CycleTrace t = trace_cycle(fx.params, conventions(), fx.expected_vars, M);
    double worst = 0.0;
    for (int j = 0; j < M; ++j) worst = std::max(worst, distance(t.P_abs[j], t.P_abs[(j + 1) % M]));
    return worst;
  };
  for (int M : {360, 720, 1440}) {
    const double ratio = max_step(M) / max_step(2 * M);
    EXPECT_NEAR(ratio, 2.0, 0.2) << "M = " << M;
  }
}

TEST(TraceCycle, MarksUnassembledSamples) {
  const auto& fx = fixtures().at("8398");
  MechanismParams p = fx.params;
  p.L_FG *= 0.6;
  const CycleTrace t = trace_cycle(p, conventions(), fx.expected_vars, 360);
  EXPECT_FALSE(t.feasible);
  bool saw_nan = false;
  for (int j = 0; j < t.M; ++j)
    if (!t.samples[j].assembled) saw_nan = saw_nan || std::isnan(t.P_abs[j].xi);
  EXPECT_TRUE(saw_nan);
}

TEST(MechanismParams, VectorRoundTripAndValidation) {
  const MechanismParams& p = fixtures().at("19597").params;
  EXPECT_EQ(MechanismParams::from_vector(p.to_vector()), p);
  EXPECT_TRUE(p.validate().empty());
  MechanismParams bad = p;
  bad.L_BC = -0.1;
  EXPECT_FALSE(bad.validate().empty());
  bad = p;
  bad.delta_Phi = 170.0;
  EXPECT_FALSE(bad.validate().empty());
  bad = p;
  bad.r_AB = std::nan("");
  EXPECT_FALSE(bad.validate().empty());
}
