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
#include <atomic>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "sixbar/criteria.hpp"
#include "sixbar/kinematics.hpp"
#include "sixbar/sobol.hpp"
#include "sixbar/synthesis.hpp"

namespace sixbar {

/// Axis-aligned bounds on p1..p13 (angles in degrees).
struct SearchBox {
  ParamVector lo{};
  ParamVector hi{};

  std::string validate() const {
    for (int j = 0; j < kParamCount; ++j) {
      if (!std::isfinite(lo[j]) || !std::isfinite(hi[j]))
        return "box bound p" + std::to_string(j + 1) + " is not finite";
      if (lo[j] > hi[j]) return "box lo > hi for p" + std::to_string(j + 1);
    }
    return {};
  }

  bool contains(const ParamVector& p) const {
    for (int j = 0; j < kParamCount; ++j)
      if (p[j] < lo[j] || p[j] > hi[j]) return false;
    return true;
  }

  bool operator==(const SearchBox&) const = default;
};

inline MechanismParams scale_to_box(const std::vector<double>& u, const SearchBox& box) {
  if (u.size() != kParamCount) throw std::invalid_argument("scale_to_box: need 13 coordinates");
  ParamVector p;
  for (int j = 0; j < kParamCount; ++j) p[j] = box.lo[j] + u[j] * (box.hi[j] - box.lo[j]);
  return MechanismParams::from_vector(p);
}

enum class TrialStatus { Ok, AssemblyFailed, Singular, NonRotating };

inline const char* to_string(TrialStatus s) {
  switch (s) {
    case TrialStatus::Ok: return "ok";
    case TrialStatus::AssemblyFailed: return "assembly_failed";
    case TrialStatus::Singular: return "singular";
    case TrialStatus::NonRotating: return "nonrotating";
  }
  return "?";
}

inline std::optional<TrialStatus> parse_status(const std::string& s) {
  for (auto st : {TrialStatus::Ok, TrialStatus::AssemblyFailed, TrialStatus::Singular,
                  TrialStatus::NonRotating})
    if (s == to_string(st)) return st;
  return std::nullopt;
}

struct TrialRecord {
  std::uint64_t index = 0;
  MechanismParams params;
  DesignVars vars = DesignVars::undefined();
  CriteriaVector criteria = CriteriaVector::sentinel();
  TrialStatus status = TrialStatus::AssemblyFailed;
};

using TrialTable = std::vector<TrialRecord>;

/// Similarity scaling of every length parameter about the origin (frame A).
inline MechanismParams scale_lengths(const MechanismParams& p, double factor) {
  ParamVector v = p.to_vector();
  for (int j = 0; j < kParamCount; ++j)
    if (!is_angle_param(j)) v[j] *= factor;
  MechanismParams out = MechanismParams::from_vector(v);
  out.frame_A = p.frame_A * factor;
  return out;
}

/// Per-trial evaluation settings shared by every search mode.
struct EvalSettings {
  int N = 20;   // support samples
  int M = 360;  // cycle samples
  AssemblyConventions conventions;
  VarsReport report = VarsReport::Realized;
  /// Rescale each mechanism so its fitted stride is 1 before evaluation;
  /// a non-positive fitted stride then counts as singular.
  bool normalize_stride = false;

  bool operator==(const EvalSettings&) const = default;
};

struct SearchSettings {
  EvalSettings eval;
  std::uint64_t index_offset = 0;
  int threads = 0;  // 0 = hardware concurrency
};

/// Support trace, synthesis and criteria of one mechanism; cheapest checks
/// first, failures are recorded in the status.
inline TrialRecord evaluate_trial(const MechanismParams& params, const EvalSettings& s,
                                  std::uint64_t index = 0) {
  TrialRecord rec;
  rec.index = index;
  rec.params = params;
  const auto support = try_trace_support(params, s.conventions, s.N);
  if (!support) {
    rec.status = TrialStatus::AssemblyFailed;
    return rec;
  }
  SynthesisResult fit;
  try {
    fit = synth5(*support);
  } catch (const SingularSystemError&) {
    rec.status = TrialStatus::Singular;
    return rec;
  }
  if (s.normalize_stride) {
    if (!(fit.vars.stride > 0.0)) {
      rec.status = TrialStatus::Singular;
      return rec;
    }
    EvalSettings once = s;
    once.normalize_stride = false;
    return evaluate_trial(scale_lengths(params, 1.0 / fit.vars.stride), once, index);
  }
  rec.vars = report_vars(*support, fit.vars, s.report);
  const CycleTrace cycle = trace_cycle(params, s.conventions, rec.vars, s.M);
  rec.criteria = evaluate_criteria(params, rec.vars, *support, cycle);
  rec.status = cycle.feasible ? TrialStatus::Ok : TrialStatus::NonRotating;
  return rec;
}

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Evaluates trials index_offset+1 .. index_offset+count of the LP-tau
/// stream scaled into the box. Output is ordered by index and independent of
/// the worker count.
inline TrialTable run_global(const SearchBox& box, std::uint64_t count, const SearchSettings& s) {
  if (count < 1) throw std::invalid_argument("run_global: count must be at least 1");
  if (const auto err = box.validate(); !err.empty()) throw std::invalid_argument(err);
  const SobolSequence seq(kParamCount);
  TrialTable table(count);
  constexpr std::uint64_t kChunk = 64;
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::uint64_t begin = next.fetch_add(kChunk);
      if (begin >= count) return;
      const std::uint64_t end = std::min(count, begin + kChunk);
      for (std::uint64_t t = begin; t < end; ++t) {
        const std::uint64_t index = s.index_offset + t + 1;
        table[t] = evaluate_trial(scale_to_box(seq.point(index), box), s.eval, index);
      }
    }
  };
  const int workers = static_cast<int>(
      std::min<std::uint64_t>(static_cast<std::uint64_t>(resolve_threads(s.threads)), count));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  return table;
}

/// Box around a chosen solution: +-fraction*max(|p|, 0.1) for lengths and
/// coordinates, +-fraction*angle_scale for the two angles. Clipped so that
/// link lengths stay positive and the crank sweep stays >= 180 deg.
inline SearchBox local_box(const MechanismParams& center, double fraction = 0.20,
                           double angle_scale_deg = 30.0) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw std::invalid_argument("local_box: fraction must lie in (0, 1)");
  const ParamVector p = center.to_vector();
  SearchBox box;
  for (int j = 0; j < kParamCount; ++j) {
    const double half =
        fraction * (is_angle_param(j) ? angle_scale_deg : std::max(std::abs(p[j]), 0.1));
    box.lo[j] = p[j] - half;
    box.hi[j] = p[j] + half;
  }
  for (int j : {4, 7, 8, 11, 12})
    if (p[j] > 0.0) box.lo[j] = std::max(box.lo[j], p[j] * (1.0 - fraction));
  if (box.hi[kDeltaPhiIndex] >= 180.0)
    box.lo[kDeltaPhiIndex] = std::max(box.lo[kDeltaPhiIndex], 180.0);
  return box;
}

/// Optional per-criterion bounds.
struct FilterLimits {
  std::optional<double> c1_max;
  std::optional<double> c2_min, c2_max;
  std::optional<double> c3_min;
  std::optional<double> c4_min, c4_max;
  std::optional<double> c5_max;
  std::optional<double> c6_min;

  std::string validate() const {
    if (c2_min && c2_max && *c2_min > *c2_max) return "filters: c2_min > c2_max";
    if (c4_min && c4_max && *c4_min > *c4_max) return "filters: c4_min > c4_max";
    return {};
  }

  bool admits(const CriteriaVector& c) const {
    if (c1_max && !(c.c1 <= *c1_max)) return false;
    if (c2_min && !(c.c2 >= *c2_min)) return false;
    if (c2_max && !(c.c2 <= *c2_max)) return false;
    if (c3_min && !(c.c3 >= *c3_min)) return false;
    if (c4_min && !(c.c4 >= *c4_min)) return false;
    if (c4_max && !(c.c4 <= *c4_max)) return false;
    if (c5_max && !(c.c5 <= *c5_max)) return false;
    if (c6_min && !(c.c6 >= *c6_min)) return false;
    return true;
  }

  bool operator==(const FilterLimits&) const = default;
};

/// Keeps ok records admitted by every present bound, in input order.
inline TrialTable filter_table(const TrialTable& table, const FilterLimits& limits) {
  TrialTable out;
  for (const TrialRecord& r : table)
    if (r.status == TrialStatus::Ok && limits.admits(r.criteria)) out.push_back(r);
  return out;
}

enum class Criterion { C1 = 0, C2, C3, C4, C5, C6 };
enum class SortOrder { Ascending, Descending };

inline std::optional<Criterion> parse_criterion(const std::string& s) {
  if (s.size() == 2 && s[0] == 'c' && s[1] >= '1' && s[1] <= '6')
    return static_cast<Criterion>(s[1] - '1');
  return std::nullopt;
}

inline std::string to_string(Criterion c) { return "c" + std::to_string(static_cast<int>(c) + 1); }

/// Stable sort by one criterion; records that are not ok go last.
inline TrialTable sort_table(TrialTable table, Criterion key, SortOrder order) {
  const int j = static_cast<int>(key);
  std::stable_sort(table.begin(), table.end(), [&](const TrialRecord& a, const TrialRecord& b) {
    const bool a_ok = a.status == TrialStatus::Ok;
    const bool b_ok = b.status == TrialStatus::Ok;
    if (a_ok != b_ok) return a_ok;
    if (!a_ok) return false;
    return order == SortOrder::Ascending ? a.criteria[j] < b.criteria[j]
                                         : a.criteria[j] > b.criteria[j];
  });
  return table;
}

}  // namespace sixbar
