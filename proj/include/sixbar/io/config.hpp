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

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "sixbar/search.hpp"

namespace sixbar::io {

using nlohmann::json;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SortSpec {
  Criterion key = Criterion::C6;
  SortOrder order = SortOrder::Descending;

  bool operator==(const SortSpec&) const = default;
};

struct OutputPaths {
  std::string trials;
  std::string filtered;

  bool operator==(const OutputPaths&) const = default;
};

/// Everything a search run needs. Angles in degrees.
struct RunConfig {
  SearchBox box;
  std::uint64_t trials = 1;
  std::uint64_t offset = 0;
  int threads = 0;
  EvalSettings eval;
  FilterLimits filters;
  std::optional<SortSpec> sort;
  OutputPaths output;

  SearchSettings search_settings() const { return {eval, offset, threads}; }

  bool operator==(const RunConfig&) const = default;
};

namespace detail {

inline void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                           const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key))
      throw ConfigError("unknown key '" + (where.empty() ? key : where + "." + key) + "'");
}

template <typename T>
T field(const json& obj, const char* key, const std::string& where) {
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("field '" + where + key + "': " + e.what());
  }
}

inline ParamVector param_array(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != kParamCount)
    throw ConfigError("field '" + where + "': expected an array of 13 numbers");
  ParamVector out;
  for (int i = 0; i < kParamCount; ++i) {
    if (!j[i].is_number()) throw ConfigError("field '" + where + "': entries must be numbers");
    out[i] = j[i].get<double>();
  }
  return out;
}

inline std::string position_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

}  // namespace detail

inline ThetaFrame parse_theta_frame(const std::string& s) {
  if (s == "CouplerEF") return ThetaFrame::CouplerEF;
  if (s == "CrankFG") return ThetaFrame::CrankFG;
  throw ConfigError("theta_frame must be CouplerEF or CrankFG, got '" + s + "'");
}

inline const char* to_string(ThetaFrame f) {
  return f == ThetaFrame::CouplerEF ? "CouplerEF" : "CrankFG";
}

inline VarsReport parse_report(const std::string& s) {
  if (s == "fitted") return VarsReport::Fitted;
  if (s == "realized") return VarsReport::Realized;
  throw ConfigError("report must be fitted or realized, got '" + s + "'");
}

inline const char* to_string(VarsReport r) {
  return r == VarsReport::Fitted ? "fitted" : "realized";
}

/// Throws ConfigError naming the first violated invariant.
inline void validate(const RunConfig& c) {
  if (auto e = c.box.validate(); !e.empty()) throw ConfigError(e);
  if (auto e = c.filters.validate(); !e.empty()) throw ConfigError(e);
  if (c.trials < 1) throw ConfigError("trials must be at least 1");
  if (c.eval.N < 3) throw ConfigError("grid.N must be at least 3");
  if (c.eval.M < 2) throw ConfigError("grid.M must be at least 2");
  if (c.threads < 0) throw ConfigError("threads must be non-negative");
  for (int b : {c.eval.conventions.branch_BCD, c.eval.conventions.branch_EFG})
    if (b != 1 && b != -1) throw ConfigError("branch signs must be +1 or -1");
}

inline RunConfig config_from_json(const json& j) {
  using detail::field;
  detail::reject_unknown(j, {"box", "trials", "offset", "threads", "grid", "conventions", "report",
                             "normalize_stride", "filters", "sort", "output"},
                         "");
  RunConfig c;
  if (!j.contains("box")) throw ConfigError("missing required field 'box'");
  if (!j.contains("trials")) throw ConfigError("missing required field 'trials'");
  const json& box = j["box"];
  detail::reject_unknown(box, {"lo", "hi"}, "box");
  if (!box.contains("lo") || !box.contains("hi")) throw ConfigError("box needs 'lo' and 'hi'");
  c.box.lo = detail::param_array(box["lo"], "box.lo");
  c.box.hi = detail::param_array(box["hi"], "box.hi");
  c.trials = field<std::uint64_t>(j, "trials", "");
  if (j.contains("offset")) c.offset = field<std::uint64_t>(j, "offset", "");
  if (j.contains("threads")) c.threads = field<int>(j, "threads", "");
  if (j.contains("grid")) {
    const json& g = j["grid"];
    detail::reject_unknown(g, {"N", "M"}, "grid");
    if (g.contains("N")) c.eval.N = field<int>(g, "N", "grid.");
    if (g.contains("M")) c.eval.M = field<int>(g, "M", "grid.");
  }
  if (j.contains("conventions")) {
    const json& cv = j["conventions"];
    detail::reject_unknown(cv, {"branch_BCD", "branch_EFG", "theta_frame"}, "conventions");
    if (cv.contains("branch_BCD"))
      c.eval.conventions.branch_BCD = field<int>(cv, "branch_BCD", "conventions.");
    if (cv.contains("branch_EFG"))
      c.eval.conventions.branch_EFG = field<int>(cv, "branch_EFG", "conventions.");
    if (cv.contains("theta_frame"))
      c.eval.conventions.theta_frame =
          parse_theta_frame(field<std::string>(cv, "theta_frame", "conventions."));
  }
  if (j.contains("report")) c.eval.report = parse_report(field<std::string>(j, "report", ""));
  if (j.contains("normalize_stride"))
    c.eval.normalize_stride = field<bool>(j, "normalize_stride", "");
  if (j.contains("filters")) {
    const json& f = j["filters"];
    detail::reject_unknown(
        f, {"c1_max", "c2_min", "c2_max", "c3_min", "c4_min", "c4_max", "c5_max", "c6_min"},
        "filters");
    auto opt = [&](const char* key, std::optional<double>& dst) {
      if (f.contains(key)) dst = field<double>(f, key, "filters.");
    };
    opt("c1_max", c.filters.c1_max);
    opt("c2_min", c.filters.c2_min);
    opt("c2_max", c.filters.c2_max);
    opt("c3_min", c.filters.c3_min);
    opt("c4_min", c.filters.c4_min);
    opt("c4_max", c.filters.c4_max);
    opt("c5_max", c.filters.c5_max);
    opt("c6_min", c.filters.c6_min);
  }
  if (j.contains("sort")) {
    const json& s = j["sort"];
    detail::reject_unknown(s, {"key", "order"}, "sort");
    SortSpec spec;
    if (s.contains("key")) {
      const auto key = parse_criterion(field<std::string>(s, "key", "sort."));
      if (!key) throw ConfigError("sort.key must be one of c1..c6");
      spec.key = *key;
    }
    if (s.contains("order")) {
      const auto order = field<std::string>(s, "order", "sort.");
      if (order != "asc" && order != "desc") throw ConfigError("sort.order must be asc or desc");
      spec.order = order == "asc" ? SortOrder::Ascending : SortOrder::Descending;
    }
    c.sort = spec;
  }
  if (j.contains("output")) {
    const json& o = j["output"];
    detail::reject_unknown(o, {"trials", "filtered"}, "output");
    if (o.contains("trials")) c.output.trials = field<std::string>(o, "trials", "output.");
    if (o.contains("filtered")) c.output.filtered = field<std::string>(o, "filtered", "output.");
  }
  validate(c);
  return c;
}

inline RunConfig parse_config(const std::string& text, const std::string& source = "<config>") {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(source + ":" + detail::position_of(text, e.byte) + ": " + e.what());
  }
  return config_from_json(j);
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

inline json to_json(const RunConfig& c) {
  json j;
  j["box"] = {{"lo", c.box.lo}, {"hi", c.box.hi}};
  j["trials"] = c.trials;
  j["offset"] = c.offset;
  j["threads"] = c.threads;
  j["grid"] = {{"N", c.eval.N}, {"M", c.eval.M}};
  j["conventions"] = {{"branch_BCD", c.eval.conventions.branch_BCD},
                      {"branch_EFG", c.eval.conventions.branch_EFG},
                      {"theta_frame", to_string(c.eval.conventions.theta_frame)}};
  j["report"] = to_string(c.eval.report);
  j["normalize_stride"] = c.eval.normalize_stride;
  json f = json::object();
  auto put = [&](const char* key, const std::optional<double>& v) {
    if (v) f[key] = *v;
  };
  put("c1_max", c.filters.c1_max);
  put("c2_min", c.filters.c2_min);
  put("c2_max", c.filters.c2_max);
  put("c3_min", c.filters.c3_min);
  put("c4_min", c.filters.c4_min);
  put("c4_max", c.filters.c4_max);
  put("c5_max", c.filters.c5_max);
  put("c6_min", c.filters.c6_min);
  j["filters"] = f;
  if (c.sort)
    j["sort"] = {{"key", to_string(c.sort->key)},
                 {"order", c.sort->order == SortOrder::Ascending ? "asc" : "desc"}};
  j["output"] = {{"trials", c.output.trials}, {"filtered", c.output.filtered}};
  return j;
}

}  // namespace sixbar::io
