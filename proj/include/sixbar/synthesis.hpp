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
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "sixbar/design_vars.hpp"
#include "sixbar/kinematics.hpp"

namespace sixbar {

using Vector5 = Eigen::Matrix<double, 5, 1>;
using Matrix5 = Eigen::Matrix<double, 5, 5>;

/// Relative threshold below which the normal system counts as singular.
inline constexpr double kSingularityTol = 1e-9;

class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  CompensatedSum& operator+=(double v) {
    add(v);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Constant sums of the synthesis equations. b1..b4 carry the stride when it
/// is given (4-parameter mode) and coincide with b5..b8 otherwise; b5..b8
/// and k_mu come from the E-trace only.
struct SynthesisSums {
  int N = 0;
  std::optional<double> L;
  double k = 0.0;        // sum cos(theta_i)
  double m = 0.0;        // sum sin(theta_i)
  double k_alpha = 0.0;  // sum s_i cos(theta_i)
  double k_beta = 0.0;   // sum s_i sin(theta_i)
  double k_mu = 0.0;     // sum s_i xi_E_i
  double s1 = 0.0;       // sum s_i      = N/2
  double s2 = 0.0;       // sum s_i^2    = N(2N-1)/(6(N-1))
  double b1 = 0.0, b2 = 0.0, b3 = 0.0, b4 = 0.0;
  double b5 = 0.0, b6 = 0.0, b7 = 0.0, b8 = 0.0;
};

inline SynthesisSums accumulate_sums(const SupportGrid& grid, std::optional<double> L = std::nullopt) {
  const int N = grid.N;
  CompensatedSum k, m, ka, kb, kmu, s1, s2;
  CompensatedSum xc, ys, xs, yc, sx, sy;  // xi cos, eta sin, xi sin, eta cos, xi, eta
  for (int i = 0; i < N; ++i) {
    const double s = grid.fraction(i);
    const double c = std::cos(grid.theta[i]);
    const double sn = std::sin(grid.theta[i]);
    const double xi = grid.E_abs[i].xi;
    const double eta = grid.E_abs[i].eta;
    k += c;
    m += sn;
    ka += s * c;
    kb += s * sn;
    kmu += s * xi;
    s1 += s;
    s2 += s * s;
    xc += xi * c;
    ys += eta * sn;
    xs += xi * sn;
    yc += eta * c;
    sx += xi;
    sy += eta;
  }
  SynthesisSums out;
  out.N = N;
  out.L = L;
  out.k = k.value();
  out.m = m.value();
  out.k_alpha = ka.value();
  out.k_beta = kb.value();
  out.k_mu = kmu.value();
  out.s1 = s1.value();
  out.s2 = s2.value();
  out.b5 = -xc.value() - ys.value();
  out.b6 = xs.value() - yc.value();
  out.b7 = -sx.value();
  out.b8 = -sy.value();
  const double stride = L.value_or(0.0);
  out.b1 = out.b5 + stride * out.k_alpha;
  out.b2 = out.b6 - stride * out.k_beta;
  out.b3 = out.b7 + stride * out.s1;
  out.b4 = out.b8;
  return out;
}

struct Residual {
  double xi = 0.0;
  double eta = 0.0;
};

/// Per-sample deviation of the foot point from the target line.
inline std::vector<Residual> residuals(const SupportGrid& grid, const DesignVars& v) {
  std::vector<Residual> out;
  out.reserve(grid.N);
  for (int i = 0; i < grid.N; ++i) {
    const double c = std::cos(grid.theta[i]);
    const double s = std::sin(grid.theta[i]);
    out.push_back({v.x_P * c - v.y_P * s - v.xi_0 + grid.E_abs[i].xi - v.stride * grid.fraction(i),
                   v.x_P * s + v.y_P * c - v.eta_0 + grid.E_abs[i].eta});
  }
  return out;
}

/// Least-squares objective S.
inline double objective(const SupportGrid& grid, const DesignVars& v) {
  CompensatedSum S;
  for (const Residual& r : residuals(grid, v)) S += r.xi * r.xi + r.eta * r.eta;
  return S.value();
}

/// Analytic dS/dx over (x1..x5).
inline Vector5 objective_gradient(const SupportGrid& grid, const DesignVars& v) {
  const auto res = residuals(grid, v);
  std::array<CompensatedSum, 5> g;
  for (int i = 0; i < grid.N; ++i) {
    const double c = std::cos(grid.theta[i]);
    const double s = std::sin(grid.theta[i]);
    g[0] += res[i].xi * c + res[i].eta * s;
    g[1] += -res[i].xi * s + res[i].eta * c;
    g[2] += -res[i].xi;
    g[3] += -res[i].eta;
    g[4] += -res[i].xi * grid.fraction(i);
  }
  Vector5 out;
  for (int j = 0; j < 5; ++j) out[j] = 2.0 * g[j].value();
  return out;
}

/// Normal equations H x = rhs of the 5-parameter problem; H is the Hessian
/// of S up to the factor 2 (H = H1^T H1).
struct NormalSystem {
  Matrix5 H = Matrix5::Zero();
  Vector5 rhs = Vector5::Zero();
  double min_eigenvalue = 0.0;
  bool singular = true;
};

inline NormalSystem normal_system(const SynthesisSums& q) {
  const double n = q.N;
  NormalSystem sys;
  // clang-format off
  sys.H <<        n,       0.0,  -q.k, -q.m, -q.k_alpha,
                0.0,         n,   q.m, -q.k,  q.k_beta,
               -q.k,       q.m,     n,  0.0,  q.s1,
               -q.m,      -q.k,   0.0,    n,  0.0,
         -q.k_alpha,  q.k_beta,  q.s1,  0.0,  q.s2;
  // clang-format on
  sys.rhs << q.b5, q.b6, -q.b7, -q.b8, q.k_mu;
  const Eigen::SelfAdjointEigenSolver<Matrix5> eig(sys.H, Eigen::EigenvaluesOnly);
  sys.min_eigenvalue = eig.eigenvalues()[0];
  sys.singular = !(sys.min_eigenvalue > kSingularityTol * sys.H.trace() / 5.0);
  return sys;
}

inline NormalSystem normal_system(const SupportGrid& grid) {
  return normal_system(accumulate_sums(grid));
}

/// Closed-form leading principal minors of the 4-parameter Hessian.
inline std::array<double, 4> corner_minors(double N, double k, double m) {
  const double r2 = k * k + m * m;
  return {N, N * N, N * (N * N - r2), (r2 - N * N) * (r2 - N * N)};
}

struct SynthesisResult {
  DesignVars vars;
  double S = 0.0;
  SynthesisSums sums;
  /// 5-parameter only: closed-form route and its max relative deviation
  /// from the normal-equation solve.
  DesignVars closed_form;
  double route_discrepancy = 0.0;
  double min_eigenvalue = 0.0;
};

/// 4-parameter synthesis with given stride L.
inline SynthesisResult synth4(const SupportGrid& grid, double L = 1.0) {
  const SynthesisSums q = accumulate_sums(grid, L);
  const double n = q.N;
  const double det = q.k * q.k + q.m * q.m - n * n;
  if (!(std::abs(det) > kSingularityTol * n * n))
    throw SingularSystemError("synth4: k^2 + m^2 = N^2, all orientations coincide");
  SynthesisResult r;
  r.sums = q;
  r.vars.x_P = (-n * q.b1 + q.k * q.b3 + q.m * q.b4) / det;
  r.vars.y_P = (-n * q.b2 - q.m * q.b3 + q.k * q.b4) / det;
  r.vars.xi_0 = (n * q.b3 - q.k * q.b1 + q.m * q.b2) / det;
  r.vars.eta_0 = (n * q.b4 - q.m * q.b1 - q.k * q.b2) / det;
  r.vars.stride = L;
  r.S = objective(grid, r.vars);
  r.closed_form = r.vars;
  return r;
}

namespace detail {

/// x1..x4 in closed form as affine functions of x5, then x5 from the
/// stride row of the normal equations.
inline DesignVars synth5_closed_form(const SynthesisSums& q) {
  const double n = q.N;
  const double k = q.k, m = q.m, ka = q.k_alpha, kb = q.k_beta;
  const double det = k * k + m * m - n * n;
  // x3 = a3 + c3 x5, x4 = a4 + c4 x5
  const double a3 = (n * q.b7 - k * q.b5 + m * q.b6) / det;
  const double c3 = (n * n / 2.0 - k * ka - m * kb) / det;
  const double a4 = (n * q.b8 - m * q.b5 - k * q.b6) / det;
  const double c4 = (k * kb - m * ka) / det;
  // x1 = (b5 + k x3 + m x4 + ka x5)/N, x2 = (b6 - m x3 + k x4 - kb x5)/N
  const double a1 = (q.b5 + k * a3 + m * a4) / n;
  const double c1 = (k * c3 + m * c4 + ka) / n;
  const double a2 = (q.b6 - m * a3 + k * a4) / n;
  const double c2 = (-m * c3 + k * c4 - kb) / n;
  // -ka x1 + kb x2 + s1 x3 + s2 x5 = k_mu
  const double x5 = (q.k_mu - (-ka * a1 + kb * a2 + q.s1 * a3)) /
                    (-ka * c1 + kb * c2 + q.s1 * c3 + q.s2);
  return {a1 + c1 * x5, a2 + c2 * x5, a3 + c3 * x5, a4 + c4 * x5, x5};
}

inline double max_relative_gap(const DesignVars& a, const DesignVars& b) {
  double worst = 0.0;
  for (int j = 0; j < 5; ++j)
    worst = std::max(worst, std::abs(a[j] - b[j]) / std::max(1.0, std::abs(a[j])));
  return worst;
}

}  // namespace detail

/// 5-parameter synthesis (stride free) by the normal equations, with the
/// closed-form route evaluated alongside as a cross-check.
inline SynthesisResult synth5(const SupportGrid& grid) {
  SynthesisResult r;
  r.sums = accumulate_sums(grid);
  const NormalSystem sys = normal_system(r.sums);
  r.min_eigenvalue = sys.min_eigenvalue;
  if (sys.singular) throw SingularSystemError("synth5: normal system is singular");
  const Vector5 x = sys.H.ldlt().solve(sys.rhs);
  for (int j = 0; j < 5; ++j) r.vars[j] = x[j];
  r.closed_form = detail::synth5_closed_form(r.sums);
  r.route_discrepancy = detail::max_relative_gap(r.vars, r.closed_form);
  r.S = objective(grid, r.vars);
  return r;
}

struct MinimumDiagnosis {
  double gradient_norm = 0.0;     // analytic
  double fd_gradient_norm = 0.0;  // central differences
  double fd_mismatch = 0.0;       // |analytic - fd| / (1 + S)
  double min_eigenvalue = 0.0;
  bool psd = false;
  bool singular = true;
};

inline MinimumDiagnosis check_minimum(const NormalSystem& sys, const DesignVars& v,
                                      const SupportGrid& grid) {
  MinimumDiagnosis d;
  const double S = objective(grid, v);
  const Vector5 g = objective_gradient(grid, v);
  Vector5 fd;
  for (int j = 0; j < 5; ++j) {
    const double h = 1e-6 * std::max(1.0, std::abs(v[j]));
    DesignVars up = v, dn = v;
    up[j] += h;
    dn[j] -= h;
    fd[j] = (objective(grid, up) - objective(grid, dn)) / (2.0 * h);
  }
  d.gradient_norm = g.norm();
  d.fd_gradient_norm = fd.norm();
  d.fd_mismatch = (g - fd).norm() / (1.0 + S);
  d.min_eigenvalue = sys.min_eigenvalue;
  d.psd = sys.min_eigenvalue >= -1e-9 * std::max(1.0, sys.H.trace() / 5.0);
  d.singular = sys.singular;
  return d;
}

/// How synthesized variables are reported.
enum class VarsReport {
  Fitted,    // least-squares optimum as solved
  Realized,  // start point, line height and stride as actually traced
};

/// Replaces x3..x5 with what the foot point realizes over the support grid:
/// x3 = xi_P at the first sample, x4 = midrange of eta_P, x5 = xi_P(last) -
/// xi_P(first). x1, x2 are kept.
inline DesignVars realize_support(const SupportGrid& grid, const DesignVars& v) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double first = 0.0, last = 0.0;
  for (int i = 0; i < grid.N; ++i) {
    const Vec2 P = grid.E_abs[i] + rotate(grid.theta[i], {v.x_P, v.y_P});
    lo = std::min(lo, P.eta);
    hi = std::max(hi, P.eta);
    if (i == 0) first = P.xi;
    if (i == grid.N - 1) last = P.xi;
  }
  return {v.x_P, v.y_P, first, 0.5 * (lo + hi), last - first};
}

inline DesignVars report_vars(const SupportGrid& grid, const DesignVars& fitted, VarsReport mode) {
  return mode == VarsReport::Realized ? realize_support(grid, fitted) : fitted;
}

}  // namespace sixbar
