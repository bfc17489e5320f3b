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

// Independent reference computations for the test suite. Nothing here calls
// into the library's solvers or closed forms.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "sixbar/kinematics.hpp"

namespace oracle {

using Mat = std::vector<std::vector<long double>>;
using Vec = std::vector<long double>;

/// Gaussian elimination with partial pivoting in long double.
inline Vec gauss_solve(Mat A, Vec b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(A[r][c]) > std::fabs(A[piv][c])) piv = r;
    if (A[piv][c] == 0.0L) throw std::runtime_error("oracle: singular matrix");
    std::swap(A[c], A[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const long double f = A[r][c] / A[c][c];
      for (std::size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
      b[r] -= f * b[c];
    }
  }
  Vec x(n);
  for (std::size_t i = n; i-- > 0;) {
    long double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= A[i][k] * x[k];
    x[i] = s / A[i][i];
  }
  return x;
}

inline long double determinant(Mat A) {
  const std::size_t n = A.size();
  long double det = 1.0L;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(A[r][c]) > std::fabs(A[piv][c])) piv = r;
    if (A[piv][c] == 0.0L) return 0.0L;
    if (piv != c) {
      std::swap(A[c], A[piv]);
      det = -det;
    }
    det *= A[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const long double f = A[r][c] / A[c][c];
      for (std::size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
    }
  }
  return det;
}

/// Linear least squares for the foot-point fit built straight from the
/// residual definition: rows of J x + r0, solved through J^T J x = -J^T r0.
/// With a fixed stride the fifth column moves into r0.
inline std::vector<double> least_squares(const sixbar::SupportGrid& g, std::optional<double> L = {}) {
  const std::size_t n = L ? 4 : 5;
  Mat JtJ(n, Vec(n, 0.0L));
  Vec Jtr(n, 0.0L);
  auto add_row = [&](const Vec& row, long double r0) {
    for (std::size_t a = 0; a < n; ++a) {
      Jtr[a] -= row[a] * r0;
      for (std::size_t b = 0; b < n; ++b) JtJ[a][b] += row[a] * row[b];
    }
  };
  for (int i = 0; i < g.N; ++i) {
    const long double c = std::cos(static_cast<long double>(g.theta[i]));
    const long double s = std::sin(static_cast<long double>(g.theta[i]));
    const long double t = static_cast<long double>(i) / (g.N - 1);
    Vec rx{c, -s, -1.0L, 0.0L, -t}, ry{s, c, 0.0L, -1.0L, 0.0L};
    long double x0 = g.E_abs[i].xi, y0 = g.E_abs[i].eta;
    if (L) {
      x0 -= *L * t;
      rx.pop_back();
      ry.pop_back();
    }
    add_row(rx, x0);
    add_row(ry, y0);
  }
  const Vec x = gauss_solve(JtJ, Jtr);
  return {x.begin(), x.end()};
}

/// Hessian of the 4-parameter fit (J^T J), for minor checks.
inline Mat gram4(const sixbar::SupportGrid& g) {
  Mat H(4, Vec(4, 0.0L));
  for (int i = 0; i < g.N; ++i) {
    const long double c = std::cos(static_cast<long double>(g.theta[i]));
    const long double s = std::sin(static_cast<long double>(g.theta[i]));
    const Vec rx{c, -s, -1.0L, 0.0L}, ry{s, c, 0.0L, -1.0L};
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) H[a][b] += rx[a] * rx[b] + ry[a] * ry[b];
  }
  return H;
}

inline Mat leading(const Mat& A, std::size_t k) {
  Mat out(k, Vec(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) out[i][j] = A[i][j];
  return out;
}

/// Dyad joint by Newton iteration on the two circle constraints.
inline std::optional<sixbar::Vec2> newton_dyad(sixbar::Vec2 a, sixbar::Vec2 b, double la, double lb,
                                              sixbar::Vec2 guess) {
  long double x = guess.xi, y = guess.eta;
  for (int it = 0; it < 100; ++it) {
    const long double f1 = (x - a.xi) * (x - a.xi) + (y - a.eta) * (y - a.eta) - (long double)la * la;
    const long double f2 = (x - b.xi) * (x - b.xi) + (y - b.eta) * (y - b.eta) - (long double)lb * lb;
    const long double j11 = 2 * (x - a.xi), j12 = 2 * (y - a.eta);
    const long double j21 = 2 * (x - b.xi), j22 = 2 * (y - b.eta);
    const long double det = j11 * j22 - j12 * j21;
    if (det == 0.0L) return std::nullopt;
    const long double dx = (f1 * j22 - f2 * j12) / det;
    const long double dy = (j11 * f2 - j21 * f1) / det;
    x -= dx;
    y -= dy;
    if (std::fabs(dx) + std::fabs(dy) < 1e-18L) break;
  }
  return sixbar::Vec2{static_cast<double>(x), static_cast<double>(y)};
}

/// Grid with arbitrary orientations and knee positions.
inline sixbar::SupportGrid random_grid(std::mt19937_64& rng, int N) {
  std::uniform_real_distribution<double> ang(-sixbar::kPi, sixbar::kPi), pos(-2.0, 2.0);
  sixbar::SupportGrid g;
  g.N = N;
  for (int i = 0; i < N; ++i) {
    g.phi.push_back(0.0);
    g.theta.push_back(ang(rng));
    g.E_abs.push_back({pos(rng), pos(rng)});
  }
  return g;
}

/// Grid whose foot point lies exactly on the target line for x.
inline sixbar::SupportGrid planted_grid(std::mt19937_64& rng, int N, const std::vector<double>& x) {
  sixbar::SupportGrid g = random_grid(rng, N);
  for (int i = 0; i < N; ++i) {
    const double t = g.fraction(i);
    const sixbar::Vec2 P{x[2] + x[4] * t, x[3]};
    g.E_abs[i] = P - sixbar::rotate(g.theta[i], {x[0], x[1]});
  }
  return g;
}

inline double max_rel(const std::vector<double>& a, const std::vector<double>& b) {
  double scale = 0.0, diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    scale = std::max(scale, std::abs(b[i]));
    diff = std::max(diff, std::abs(a[i] - b[i]));
  }
  return diff / std::max(scale, 1e-300);
}

}  // namespace oracle
