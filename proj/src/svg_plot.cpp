/*
 Copyright 2026 The cgmres-precond Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "cgmres/svg_plot.hpp"

#include <fstream>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "cgmres/simulation.hpp"

namespace cgmres::svg {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

std::string escape(const std::string &s) {
  std::string out;
  for (char c : s) {
    switch (c) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    default: out += c;
    }
  }
  return out;
}

double nice_step(double span, int target_ticks) {
  const double raw = span / std::max(1, target_ticks);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  double nice = 10.0;
  if (norm <= 1.0) {
    nice = 1.0;
  } else if (norm <= 2.0) {
    nice = 2.0;
  } else if (norm <= 5.0) {
    nice = 5.0;
  }
  return nice * mag;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  void finish() {
    if (!(lo <= hi)) {
      lo = 0.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
};

} // namespace

std::string render(const Plot &plot, int width, int height) {
  const double left = 70.0, right = 20.0, top = 40.0, bottom = 55.0;
  double pw = width - left - right;
  double ph = height - top - bottom;

  Range xr, yr;
  for (const auto &s : plot.series) {
    for (double v : s.x) {
      xr.add(v);
    }
    for (double v : s.y) {
      yr.add(v);
    }
  }
  xr.finish();
  yr.finish();
  if (plot.equal_aspect) {
    const double sx = (xr.hi - xr.lo) / pw;
    const double sy = (yr.hi - yr.lo) / ph;
    const double s = std::max(sx, sy);
    const double cx = 0.5 * (xr.lo + xr.hi);
    const double cy = 0.5 * (yr.lo + yr.hi);
    xr.lo = cx - 0.5 * s * pw;
    xr.hi = cx + 0.5 * s * pw;
    yr.lo = cy - 0.5 * s * ph;
    yr.hi = cy + 0.5 * s * ph;
  }
  auto px = [&](double v) { return left + (v - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double v) {
    return top + ph - (v - yr.lo) / (yr.hi - yr.lo) * ph;
  };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
      << height << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << num(left + pw / 2) << "\" y=\"24\" "
      << "text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
      << escape(plot.title) << "</text>\n";

  // grid and ticks
  out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  const double xs = nice_step(xr.hi - xr.lo, 6);
  for (double v = std::ceil(xr.lo / xs) * xs; v <= xr.hi + 1e-12; v += xs) {
    out << "<line x1=\"" << num(px(v)) << "\" y1=\"" << num(top)
        << "\" x2=\"" << num(px(v)) << "\" y2=\"" << num(top + ph)
        << "\" stroke=\"#e5e5e5\"/>\n";
    out << "<text x=\"" << num(px(v)) << "\" y=\"" << num(top + ph + 16)
        << "\" text-anchor=\"middle\">" << tick_label(v) << "</text>\n";
  }
  const double ys = nice_step(yr.hi - yr.lo, 6);
  for (double v = std::ceil(yr.lo / ys) * ys; v <= yr.hi + 1e-12; v += ys) {
    out << "<line x1=\"" << num(left) << "\" y1=\"" << num(py(v))
        << "\" x2=\"" << num(left + pw) << "\" y2=\"" << num(py(v))
        << "\" stroke=\"#e5e5e5\"/>\n";
    out << "<text x=\"" << num(left - 6) << "\" y=\"" << num(py(v) + 4)
        << "\" text-anchor=\"end\">" << tick_label(v) << "</text>\n";
  }
  out << "</g>\n";
  out << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\""
      << num(pw) << "\" height=\"" << num(ph)
      << "\" fill=\"none\" stroke=\"#000\"/>\n";
  out << "<text x=\"" << num(left + pw / 2) << "\" y=\""
      << num(height - 12.0)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">"
      << escape(plot.x_label) << "</text>\n";
  out << "<text x=\"16\" y=\"" << num(top + ph / 2)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 16 "
      << num(top + ph / 2) << ")\">" << escape(plot.y_label) << "</text>\n";

  for (const auto &s : plot.series) {
    const std::size_t n = std::min(s.x.size(), s.y.size());
    if (n == 0) {
      continue;
    }
    out << "<polyline fill=\"none\" stroke=\"" << s.color
        << "\" stroke-width=\"" << num(s.width) << "\"";
    if (s.dashed) {
      out << " stroke-dasharray=\"6 4\"";
    }
    out << " points=\"";
    for (std::size_t k = 0; k < n; ++k) {
      out << (k ? " " : "") << num(px(s.x[k])) << ',' << num(py(s.y[k]));
    }
    out << "\"/>\n";
    if (s.markers || n == 1) {
      for (std::size_t k = 0; k < n; ++k) {
        out << "<circle cx=\"" << num(px(s.x[k])) << "\" cy=\""
            << num(py(s.y[k])) << "\" r=\"2.5\" fill=\"" << s.color
            << "\"/>\n";
      }
    }
  }

  // legend
  double ly = top + 14;
  for (const auto &s : plot.series) {
    if (s.label.empty()) {
      continue;
    }
    const double lx = left + pw - 150;
    out << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\""
        << num(lx + 24) << "\" y2=\"" << num(ly) << "\" stroke=\"" << s.color
        << "\" stroke-width=\"" << num(s.width) << "\""
        << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
    out << "<text x=\"" << num(lx + 30) << "\" y=\"" << num(ly + 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\">"
        << escape(s.label) << "</text>\n";
    ly += 16;
  }
  out << "</svg>\n";
  return out.str();
}

} // namespace cgmres::svg

namespace cgmres {

namespace {

void save(const std::filesystem::path &path, const std::string &text) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << text;
}

} // namespace

void emit_plots(const SimulationLog &log, const OcpModel &model,
                const std::filesystem::path &outdir) {
  std::filesystem::create_directories(outdir);
  const auto &rec = log.records;

  svg::Plot traj;
  traj.title = "Closed-loop trajectory";
  traj.equal_aspect = true;
  traj.x_label = log.state_names.size() > 0 ? log.state_names[0] : "x0";
  traj.y_label = log.state_names.size() > 1 ? log.state_names[1] : "x1";
  svg::Series path;
  for (const auto &r : rec) {
    if (r.state.size() >= 2) {
      path.x.push_back(r.state[0]);
      path.y.push_back(r.state[1]);
    }
  }
  traj.series.push_back(std::move(path));
  save(outdir / "trajectory.svg", svg::render(traj));

  svg::Plot ctrl;
  ctrl.title = "Applied control";
  ctrl.x_label = "t";
  ctrl.y_label = log.control_names.empty() ? "u0" : log.control_names[0];
  svg::Series u, lo, hi;
  u.label = ctrl.y_label;
  lo.label = "band";
  for (svg::Series *edge : {&lo, &hi}) {
    edge->color = "#d62728";
    edge->width = 1.0;
    edge->dashed = true;
  }
  for (const auto &r : rec) {
    if (r.control.size() == 0) {
      continue;
    }
    u.x.push_back(r.t);
    u.y.push_back(r.control[0]);
    const auto band = model.control_band(r.t, r.parameters);
    if (band && band->component == 0) {
      lo.x.push_back(r.t);
      lo.y.push_back(band->lower);
      hi.x.push_back(r.t);
      hi.y.push_back(band->upper);
    }
  }
  ctrl.series.push_back(std::move(u));
  if (!lo.x.empty()) {
    ctrl.series.push_back(std::move(lo));
    ctrl.series.push_back(std::move(hi));
  }
  save(outdir / "control.svg", svg::render(ctrl));

  svg::Plot iters;
  iters.title = "GMRES iterations per step";
  iters.x_label = "step";
  iters.y_label = "iterations";
  svg::Series it;
  for (const auto &r : rec) {
    it.x.push_back(static_cast<double>(r.step));
    it.y.push_back(r.gmres_iterations);
  }
  iters.series.push_back(std::move(it));
  save(outdir / "iterations.svg", svg::render(iters));
}

} // namespace cgmres
