// Copyright 2026 The wgqed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wgqed/io/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "wgqed/error.hpp"

namespace wgqed::io {

namespace {

constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                   "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!(lo <= hi)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-12 * std::max(1.0, std::abs(hi))) {
      const double pad = std::max(0.5, 0.05 * std::abs(hi));
      lo -= pad;
      hi += pad;
    }
  }
};

std::vector<double> nice_ticks(double lo, double hi) {
  const double raw = (hi - lo) / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step)
    ticks.push_back(t);
  return ticks;
}

}  // namespace

std::string render_svg(const PlotSpec& spec, std::span<const PlotSeries> series) {
  const double left = 70, right = 20, top = 36, bottom = 52;
  const double w = spec.width - left - right;
  const double h = spec.height - top - bottom;

  auto tx = [&](double x) {
    if (!spec.log_x) return x;
    if (!(x > 0.0)) throw InputError("log-scale axis requires positive x values");
    return std::log10(x);
  };
  Range xr, yr;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw InputError("plot series x/y length mismatch");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      xr.add(tx(s.x[i]));
      yr.add(s.y[i]);
    }
  }
  xr.finish();
  yr.finish();
  const double ypad = 0.05 * (yr.hi - yr.lo);
  yr.lo -= ypad;
  yr.hi += ypad;

  auto px = [&](double x) { return left + (tx(x) - xr.lo) / (xr.hi - xr.lo) * w; };
  auto py = [&](double y) { return top + (yr.hi - y) / (yr.hi - yr.lo) * h; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width
    << "\" height=\"" << spec.height << "\" viewBox=\"0 0 " << spec.width << ' '
    << spec.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << fmt(left + w / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
    << xml_escape(spec.title) << "</text>\n";
  o << "<rect x=\"" << fmt(left) << "\" y=\"" << fmt(top) << "\" width=\"" << fmt(w)
    << "\" height=\"" << fmt(h) << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (double t : nice_ticks(xr.lo, xr.hi)) {
    const double x = left + (t - xr.lo) / (xr.hi - xr.lo) * w;
    o << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(top + h) << "\" x2=\"" << fmt(x)
      << "\" y2=\"" << fmt(top + h + 5) << "\" stroke=\"black\"/>"
      << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(top + h + 18)
      << "\" text-anchor=\"middle\">" << tick_label(spec.log_x ? std::pow(10.0, t) : t)
      << "</text>\n";
  }
  for (double t : nice_ticks(yr.lo, yr.hi)) {
    const double y = py(t);
    o << "<line x1=\"" << fmt(left - 5) << "\" y1=\"" << fmt(y) << "\" x2=\"" << fmt(left)
      << "\" y2=\"" << fmt(y) << "\" stroke=\"black\"/>"
      << "<text x=\"" << fmt(left - 8) << "\" y=\"" << fmt(y + 4)
      << "\" text-anchor=\"end\">" << tick_label(t) << "</text>\n";
  }
  o << "<text x=\"" << fmt(left + w / 2) << "\" y=\"" << fmt(spec.height - 10.0)
    << "\" text-anchor=\"middle\">" << xml_escape(spec.x_label) << "</text>\n";
  o << "<text transform=\"translate(16," << fmt(top + h / 2)
    << ") rotate(-90)\" text-anchor=\"middle\">" << xml_escape(spec.y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* colour = palette[k % std::size(palette)];
    if (s.markers) {
      for (std::size_t i = 0; i < s.x.size(); ++i)
        if (std::isfinite(s.y[i]))
          o << "<circle cx=\"" << fmt(px(s.x[i])) << "\" cy=\"" << fmt(py(s.y[i]))
            << "\" r=\"2\" fill=\"" << colour << "\"/>\n";
    } else {
      o << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i)
        if (std::isfinite(s.y[i])) o << fmt(px(s.x[i])) << ',' << fmt(py(s.y[i])) << ' ';
      o << "\"/>\n";
    }
    const double ly = top + 14 + 16 * static_cast<double>(k);
    o << "<line x1=\"" << fmt(left + w - 130) << "\" y1=\"" << fmt(ly - 4) << "\" x2=\""
      << fmt(left + w - 110) << "\" y2=\"" << fmt(ly - 4) << "\" stroke=\"" << colour
      << "\" stroke-width=\"2\"/><text x=\"" << fmt(left + w - 105) << "\" y=\"" << fmt(ly)
      << "\">" << xml_escape(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void write_svg(const std::filesystem::path& path, const PlotSpec& spec,
               std::span<const PlotSeries> series) {
  const std::string text = render_svg(spec, series);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace wgqed::io
