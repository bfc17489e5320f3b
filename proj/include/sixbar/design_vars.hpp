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

#include <limits>

namespace sixbar {

/// The five synthesized unknowns. In the 4-parameter problem the stride is
/// an input and x5 just echoes it.
struct DesignVars {
  double x_P = 0.0;     // x1
  double y_P = 0.0;     // x2
  double xi_0 = 0.0;    // x3, start of the support line
  double eta_0 = 0.0;   // x4, support line height
  double stride = 1.0;  // x5 = L

  constexpr double operator[](int j) const {
    switch (j) {
      case 0: return x_P;
      case 1: return y_P;
      case 2: return xi_0;
      case 3: return eta_0;
      default: return stride;
    }
  }
  constexpr double& operator[](int j) {
    switch (j) {
      case 0: return x_P;
      case 1: return y_P;
      case 2: return xi_0;
      case 3: return eta_0;
      default: return stride;
    }
  }

  static constexpr DesignVars undefined() {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan, nan, nan, nan};
  }

  constexpr bool operator==(const DesignVars&) const = default;
};

}  // namespace sixbar
