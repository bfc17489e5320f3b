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

#include <cmath>
#include <numbers>

namespace sixbar {

inline constexpr double kPi = std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
constexpr double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

/// Planar point or vector in absolute (xi, eta) or local (x, y) coordinates.
/// Lengths are stride-normalized throughout.
struct Vec2 {
  double xi = 0.0;
  double eta = 0.0;

  constexpr Vec2 operator+(Vec2 o) const { return {xi + o.xi, eta + o.eta}; }
  constexpr Vec2 operator-(Vec2 o) const { return {xi - o.xi, eta - o.eta}; }
  constexpr Vec2 operator*(double s) const { return {xi * s, eta * s}; }
  constexpr bool operator==(const Vec2&) const = default;

  double norm() const { return std::hypot(xi, eta); }
  bool finite() const { return std::isfinite(xi) && std::isfinite(eta); }
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }

inline double distance(Vec2 a, Vec2 b) { return (b - a).norm(); }

/// Angle of the direction from -> to, measured from the absolute xi axis.
inline double direction_angle(Vec2 from, Vec2 to) {
  return std::atan2(to.eta - from.eta, to.xi - from.xi);
}

/// Gamma(angle) * v.
inline Vec2 rotate(double angle, Vec2 v) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {v.xi * c - v.eta * s, v.xi * s + v.eta * c};
}

}  // namespace sixbar
