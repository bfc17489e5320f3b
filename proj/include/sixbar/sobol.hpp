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
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sixbar {

/// One row of a Joe-Kuo direction-number table: polynomial degree s,
/// interior coefficients a, initial m_1..m_s.
struct DirectionNumbers {
  int dim = 0;
  int s = 0;
  std::uint32_t a = 0;
  std::vector<std::uint32_t> m;

  bool operator==(const DirectionNumbers&) const = default;
};

// Joe & Kuo, new-joe-kuo-6.21201, dimensions 2..32. Same content as
// data/new-joe-kuo-6.32.txt.
inline const std::vector<DirectionNumbers>& joe_kuo_directions() {
  static const std::vector<DirectionNumbers> table = {
      {2, 1, 0, {1}},
      {3, 2, 1, {1, 3}},
      {4, 3, 1, {1, 3, 1}},
      {5, 3, 2, {1, 1, 1}},
      {6, 4, 1, {1, 1, 3, 3}},
      {7, 4, 4, {1, 3, 5, 13}},
      {8, 5, 2, {1, 1, 5, 5, 17}},
      {9, 5, 4, {1, 1, 5, 5, 5}},
      {10, 5, 7, {1, 1, 7, 11, 19}},
      {11, 5, 11, {1, 1, 5, 1, 1}},
      {12, 5, 13, {1, 1, 1, 3, 11}},
      {13, 5, 14, {1, 3, 5, 5, 31}},
      {14, 6, 1, {1, 3, 3, 9, 7, 49}},
      {15, 6, 13, {1, 1, 1, 15, 21, 21}},
      {16, 6, 16, {1, 3, 1, 13, 27, 49}},
      {17, 6, 19, {1, 1, 1, 15, 7, 5}},
      {18, 6, 22, {1, 3, 1, 15, 13, 25}},
      {19, 6, 25, {1, 1, 5, 5, 19, 61}},
      {20, 7, 1, {1, 3, 7, 11, 23, 15, 103}},
      {21, 7, 4, {1, 3, 7, 13, 13, 15, 69}},
      {22, 7, 7, {1, 1, 3, 13, 7, 35, 63}},
      {23, 7, 8, {1, 3, 5, 9, 1, 25, 53}},
      {24, 7, 14, {1, 3, 1, 13, 9, 35, 107}},
      {25, 7, 19, {1, 3, 1, 5, 27, 61, 31}},
      {26, 7, 21, {1, 1, 5, 11, 19, 41, 61}},
      {27, 7, 28, {1, 3, 5, 3, 3, 13, 69}},
      {28, 7, 31, {1, 1, 7, 13, 1, 19, 1}},
      {29, 7, 32, {1, 3, 7, 5, 13, 19, 59}},
      {30, 7, 37, {1, 1, 3, 9, 25, 29, 41}},
      {31, 7, 41, {1, 3, 5, 13, 23, 1, 55}},
      {32, 7, 42, {1, 3, 7, 3, 13, 59, 17}},
  };
  return table;
}

/// Parses a direction-number file in the Joe-Kuo text layout (header line,
/// then "d s a m_1 .. m_s" per row).
inline std::vector<DirectionNumbers> load_direction_numbers(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open direction numbers: " + path);
  std::vector<DirectionNumbers> rows;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    DirectionNumbers row;
    if (!(ls >> row.dim >> row.s >> row.a)) continue;
    row.m.resize(row.s);
    for (auto& v : row.m)
      if (!(ls >> v)) throw std::runtime_error("truncated direction-number row in " + path);
    rows.push_back(std::move(row));
  }
  return rows;
}

class DimensionError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Sobol low-discrepancy sequence in Gray-code order, addressed by index so
/// any point can be generated independently of the others.
class SobolSequence {
 public:
  static constexpr int kBits = 32;
  static constexpr int kMaxDim = 32;

  explicit SobolSequence(int dim) : dim_(dim) {
    if (dim < 1 || dim > kMaxDim)
      throw DimensionError("LP-tau: dimension " + std::to_string(dim) + " not in [1, " +
                           std::to_string(kMaxDim) + "]");
    directions_.resize(dim);
    for (int b = 0; b < kBits; ++b) directions_[0][b] = std::uint32_t{1} << (kBits - 1 - b);
    const auto& table = joe_kuo_directions();
    for (int d = 1; d < dim; ++d) {
      const DirectionNumbers& row = table[d - 1];
      auto& v = directions_[d];
      for (int b = 0; b < row.s && b < kBits; ++b) v[b] = row.m[b] << (kBits - 1 - b);
      for (int b = row.s; b < kBits; ++b) {
        v[b] = v[b - row.s] ^ (v[b - row.s] >> row.s);
        for (int j = 1; j < row.s; ++j)
          if ((row.a >> (row.s - 1 - j)) & 1u) v[b] ^= v[b - j];
      }
    }
  }

  int dim() const { return dim_; }

  /// Point number `index` (index 0 is the origin).
  std::vector<double> point(std::uint64_t index) const {
    if (index >> kBits) throw DimensionError("LP-tau: index exceeds 2^32 - 1");
    const std::uint64_t gray = index ^ (index >> 1);
    std::vector<double> out(dim_);
    for (int d = 0; d < dim_; ++d) {
      std::uint32_t x = 0;
      for (int b = 0; b < kBits; ++b)
        if ((gray >> b) & 1u) x ^= directions_[d][b];
      out[d] = std::ldexp(static_cast<double>(x), -kBits);
    }
    return out;
  }

 private:
  int dim_;
  std::vector<std::array<std::uint32_t, kBits>> directions_;
};

/// Unit-cube point for a 1-based trial index.
inline std::vector<double> lp_tau_point(std::uint64_t index, int dim = 13) {
  if (index < 1) throw std::invalid_argument("LP-tau: trial indices start at 1");
  return SobolSequence(dim).point(index);
}

}  // namespace sixbar
