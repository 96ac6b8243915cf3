// Copyright 2026 The congame authors.
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

#include "congame/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace congame {

namespace {

constexpr double kWidth = 800, kHeight = 500;
constexpr double kLeft = 70, kRight = 30, kTop = 40, kBottom = 50;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

void write_line_chart(std::ostream& os, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<LineSeries>& series, bool log_y) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  auto usable = [log_y](double y) { return std::isfinite(y) && (!log_y || y > 0.0); };
  for (const auto& s : series)
    for (std::size_t k = 0; k < s.xs.size() && k < s.ys.size(); ++k) {
      if (!std::isfinite(s.xs[k]) || !usable(s.ys[k])) continue;
      xmin = std::min(xmin, s.xs[k]);
      xmax = std::max(xmax, s.xs[k]);
      ymin = std::min(ymin, s.ys[k]);
      ymax = std::max(ymax, s.ys[k]);
    }
  const bool empty = !(xmin <= xmax);
  if (empty) {
    xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  }
  double ylo = log_y ? std::log10(ymin) : ymin;
  double yhi = log_y ? std::log10(ymax) : ymax;
  if (xmax - xmin < 1e-300) xmax = xmin + 1;
  if (yhi - ylo < 1e-12) yhi = ylo + 1;

  auto px = [&](double x) {
    return kLeft + (x - xmin) / (xmax - xmin) * (kWidth - kLeft - kRight);
  };
  auto py = [&](double y) {
    const double v = log_y ? std::log10(y) : y;
    return kHeight - kBottom - (v - ylo) / (yhi - ylo) * (kHeight - kTop - kBottom);
  };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
     << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  os << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
     << title << "</text>\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
     << kHeight - kBottom << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\""
     << kWidth - kRight << "\" y2=\"" << kHeight - kBottom << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
     << "\" text-anchor=\"middle\" font-size=\"12\">" << x_label << "</text>\n";
  os << "<text x=\"16\" y=\"" << kHeight / 2 << "\" text-anchor=\"middle\" font-size=\"12\" "
     << "transform=\"rotate(-90 16 " << kHeight / 2 << ")\">" << y_label
     << (log_y ? " (log scale)" : "") << "</text>\n";
  os << "<text x=\"" << kLeft << "\" y=\"" << kHeight - kBottom + 16
     << "\" font-size=\"10\">" << num(xmin) << "</text>\n";
  os << "<text x=\"" << kWidth - kRight << "\" y=\"" << kHeight - kBottom + 16
     << "\" text-anchor=\"end\" font-size=\"10\">" << num(xmax) << "</text>\n";
  os << "<text x=\"" << kLeft - 6 << "\" y=\"" << kHeight - kBottom
     << "\" text-anchor=\"end\" font-size=\"10\">" << num(ymin) << "</text>\n";
  os << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + 4
     << "\" text-anchor=\"end\" font-size=\"10\">" << num(ymax) << "</text>\n";

  if (!empty) {
    for (std::size_t si = 0; si < series.size(); ++si) {
      const auto& s = series[si];
      const char* color = kPalette[si % (sizeof(kPalette) / sizeof(kPalette[0]))];
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      bool first = true;
      for (std::size_t k = 0; k < s.xs.size() && k < s.ys.size(); ++k) {
        if (!std::isfinite(s.xs[k]) || !usable(s.ys[k])) continue;
        if (!first) os << " ";
        os << num(px(s.xs[k])) << "," << num(py(s.ys[k]));
        first = false;
      }
      os << "\"/>\n";
      os << "<text x=\"" << kWidth - kRight - 4 << "\" y=\"" << kTop + 16 + 14 * si
         << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << color << "\">" << s.label
         << "</text>\n";
    }
  }
  os << "</svg>\n";
}

}  // namespace congame
