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
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "sixbar/io/csv.hpp"
#include "sixbar/kinematics.hpp"

namespace sixbar::io {

struct SvgOptions {
  int cycle_samples = 360;
  double width_px = 800.0;
  double margin = 0.10;  // fraction of the drawing extent added on each side
};

namespace detail {

inline std::string fixed3(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 3);
  return std::string(buf, res.ptr);
}

/// Model (xi, eta) -> pixel (x, y) with eta pointing up.
struct Viewport {
  double xi_min, eta_max, scale, width, height;

  std::string x(double xi) const { return fixed3((xi - xi_min) * scale); }
  std::string y(double eta) const { return fixed3((eta_max - eta) * scale); }
};

inline Viewport fit_viewport(const std::vector<Vec2>& pts, const SvgOptions& opt) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const Vec2& p : pts) {
    if (!p.finite()) continue;
    x0 = std::min(x0, p.xi);
    x1 = std::max(x1, p.xi);
    y0 = std::min(y0, p.eta);
    y1 = std::max(y1, p.eta);
  }
  const double extent = std::max({x1 - x0, y1 - y0, 1e-9});
  const double pad = opt.margin * extent;
  x0 -= pad;
  x1 += pad;
  y0 -= pad;
  y1 += pad;
  const double scale = opt.width_px / (x1 - x0);
  return {x0, y1, scale, opt.width_px, (y1 - y0) * scale};
}

}  // namespace detail

/// Mechanism drawing at crank angle phi [rad] with the full foot path and
/// the support line eta = x4.
inline void write_svg(std::ostream& os, const MechanismParams& p, const DesignVars& v,
                      const AssemblyConventions& conv, double phi, const SvgOptions& opt = {}) {
  const PoseSample pose = pose_at(p, conv, phi);
  if (!pose.assembled)
    throw InfeasibleCycleError("mechanism does not assemble at phi = " +
                               format_double(rad_to_deg(phi)) + " deg");
  const Vec2 P = foot_position(pose, v.x_P, v.y_P);
  const CycleTrace cycle = trace_cycle(p, conv, v, opt.cycle_samples);

  std::vector<Vec2> extent{p.frame_A, p.frame_D, p.frame_G, pose.B, pose.C, pose.E, pose.F, P};
  extent.insert(extent.end(), cycle.P_abs.begin(), cycle.P_abs.end());
  const detail::Viewport vp = detail::fit_viewport(extent, opt);
  const double stroke = 0.004 * vp.width;

  auto line = [&](const char* id, const char* cls, Vec2 a, Vec2 b) {
    os << "  <line id=\"" << id << "\" class=\"" << cls << "\" x1=\"" << vp.x(a.xi) << "\" y1=\""
       << vp.y(a.eta) << "\" x2=\"" << vp.x(b.xi) << "\" y2=\"" << vp.y(b.eta) << "\"/>\n";
  };
  auto polygon = [&](const char* id, std::initializer_list<Vec2> pts) {
    os << "  <polygon id=\"" << id << "\" class=\"body\" points=\"";
    bool first = true;
    for (const Vec2& q : pts) {
      os << (first ? "" : " ") << vp.x(q.xi) << ',' << vp.y(q.eta);
      first = false;
    }
    os << "\"/>\n";
  };
  auto joint = [&](const char* id, const char* cls, Vec2 q) {
    os << "  <circle id=\"" << id << "\" class=\"" << cls << "\" cx=\"" << vp.x(q.xi)
       << "\" cy=\"" << vp.y(q.eta) << "\" r=\"" << detail::fixed3(2.5 * stroke) << "\"/>\n";
  };
  auto ground = [&](const char* id, Vec2 q) {
    const double s = 5.0 * stroke;
    const double cx = (q.xi - vp.xi_min) * vp.scale;
    const double cy = (vp.eta_max - q.eta) * vp.scale;
    os << "  <path id=\"" << id << "\" class=\"ground\" d=\"M " << detail::fixed3(cx) << ' '
       << detail::fixed3(cy) << " L " << detail::fixed3(cx - s) << ' ' << detail::fixed3(cy + 1.6 * s)
       << " L " << detail::fixed3(cx + s) << ' ' << detail::fixed3(cy + 1.6 * s) << " Z\"/>\n";
  };

  os << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
     << detail::fixed3(vp.width) << "\" height=\"" << detail::fixed3(vp.height)
     << "\" viewBox=\"0 0 " << detail::fixed3(vp.width) << ' ' << detail::fixed3(vp.height)
     << "\">\n"
     << "  <style>\n"
     << "    .link { stroke: #303030; stroke-width: " << detail::fixed3(stroke) << "; }\n"
     << "    .body { fill: #c8d8e8; fill-opacity: 0.6; stroke: #303030; stroke-width: "
     << detail::fixed3(stroke) << "; }\n"
     << "    .joint { fill: #ffffff; stroke: #303030; stroke-width: " << detail::fixed3(0.5 * stroke)
     << "; }\n"
     << "    .frame { fill: #303030; }\n"
     << "    .ground { fill: none; stroke: #303030; stroke-width: " << detail::fixed3(0.5 * stroke)
     << "; }\n"
     << "    .path { fill: none; stroke: #c03030; stroke-width: " << detail::fixed3(0.6 * stroke)
     << "; }\n"
     << "    .target { stroke: #3060c0; stroke-width: " << detail::fixed3(0.5 * stroke)
     << "; stroke-dasharray: 8,4; }\n"
     << "  </style>\n"
     << "  <rect x=\"0\" y=\"0\" width=\"" << detail::fixed3(vp.width) << "\" height=\""
     << detail::fixed3(vp.height) << "\" fill=\"#ffffff\"/>\n";

  os << "  <line id=\"support-line\" class=\"target\" x1=\"0.000\" y1=\"" << vp.y(v.eta_0)
     << "\" x2=\"" << detail::fixed3(vp.width) << "\" y2=\"" << vp.y(v.eta_0) << "\"/>\n";

  os << "  <polyline id=\"foot-path\" class=\"path\" points=\"";
  bool first = true;
  for (const Vec2& q : cycle.P_abs) {
    if (!q.finite()) continue;
    os << (first ? "" : " ") << vp.x(q.xi) << ',' << vp.y(q.eta);
    first = false;
  }
  os << "\"/>\n";

  polygon("link-BCE", {pose.B, pose.C, pose.E});
  polygon("link-EFP", {pose.E, pose.F, P});
  line("link-AB", "link", p.frame_A, pose.B);
  line("link-CD", "link", pose.C, p.frame_D);
  line("link-FG", "link", pose.F, p.frame_G);

  ground("ground-A", p.frame_A);
  ground("ground-D", p.frame_D);
  ground("ground-G", p.frame_G);
  joint("joint-A", "frame", p.frame_A);
  joint("joint-D", "frame", p.frame_D);
  joint("joint-G", "frame", p.frame_G);
  joint("joint-B", "joint", pose.B);
  joint("joint-C", "joint", pose.C);
  joint("joint-E", "joint", pose.E);
  joint("joint-F", "joint", pose.F);
  joint("joint-P", "joint", P);
  os << "</svg>\n";
}

inline void render_svg(const MechanismParams& p, const DesignVars& v,
                       const AssemblyConventions& conv, double phi, const std::string& path,
                       const SvgOptions& opt = {}) {
  std::ostringstream buf;
  write_svg(buf, p, v, conv, phi, opt);
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write " + path);
  os << buf.str();
  if (!os) throw IoError("write failed: " + path);
}

}  // namespace sixbar::io
