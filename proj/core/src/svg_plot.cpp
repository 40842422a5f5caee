// Copyright (c) 2026 koopcert developers
// SPDX-License-Identifier: Apache-2.0

#include "koopcert/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "koopcert/errors.hpp"
#include "koopcert/text_io.hpp"

namespace koopcert {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

}  // namespace

void write_svg_plot(const std::filesystem::path& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series) {
  if (series.empty()) throw InvalidInputError("write_svg_plot: no series");
  for (const auto& s : series) {
    if (s.x.empty() || s.x.size() != s.y.size()) {
      throw InvalidInputError("write_svg_plot: empty or ragged series '" + s.label + "'");
    }
  }

  double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
  double y_min = x_min, y_max = -x_min;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      x_min = std::min(x_min, s.x[i]);
      x_max = std::max(x_max, s.x[i]);
      y_min = std::min(y_min, s.y[i]);
      y_max = std::max(y_max, s.y[i]);
    }
  }
  if (x_max <= x_min) x_max = x_min + 1.0;
  if (y_max <= y_min) {
    y_min -= 0.5;
    y_max += 0.5;
  }
  const double y_pad = 0.05 * (y_max - y_min);
  y_min -= y_pad;
  y_max += y_pad;

  const double width = 860.0, height = 480.0;
  const double ml = 70.0, mr = 160.0, mt = 40.0, mb = 55.0;
  const double pw = width - ml - mr, ph = height - mt - mb;
  const auto sx = [&](double x) { return ml + (x - x_min) / (x_max - x_min) * pw; };
  const auto sy = [&](double y) { return mt + ph - (y - y_min) / (y_max - y_min) * ph; };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(width) + "\" height=\"" +
         fmt(height) + "\" viewBox=\"0 0 " + fmt(width) + " " + fmt(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt(ml + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" +
         title + "</text>\n";

  // axes
  svg += "<line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(mt + ph) + "\" x2=\"" + fmt(ml + pw) +
         "\" y2=\"" + fmt(mt + ph) + "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(mt) + "\" x2=\"" + fmt(ml) + "\" y2=\"" +
         fmt(mt + ph) + "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = x_min + (x_max - x_min) * i / 5.0;
    const double yv = y_min + (y_max - y_min) * i / 5.0;
    svg += "<text x=\"" + fmt(sx(xv)) + "\" y=\"" + fmt(mt + ph + 18) +
           "\" text-anchor=\"middle\" font-size=\"11\">" + fmt(xv) + "</text>\n";
    svg += "<text x=\"" + fmt(ml - 8) + "\" y=\"" + fmt(sy(yv) + 4) +
           "\" text-anchor=\"end\" font-size=\"11\">" + fmt(yv) + "</text>\n";
    if (i > 0) {
      svg += "<line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(sy(yv)) + "\" x2=\"" + fmt(ml + pw) +
             "\" y2=\"" + fmt(sy(yv)) + "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
    }
  }
  svg += "<text x=\"" + fmt(ml + pw / 2) + "\" y=\"" + fmt(height - 12) +
         "\" text-anchor=\"middle\" font-size=\"13\">" + x_label + "</text>\n";
  svg += "<text x=\"18\" y=\"" + fmt(mt + ph / 2) +
         "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 18 " +
         fmt(mt + ph / 2) + ")\">" + y_label + "</text>\n";

  for (const auto& s : series) {
    svg += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (i > 0) svg += ' ';
      svg += fmt(sx(s.x[i])) + "," + fmt(sy(s.y[i]));
    }
    svg += "\"/>\n";
  }

  // legend
  double ly = mt + 10;
  for (const auto& s : series) {
    svg += "<line x1=\"" + fmt(ml + pw + 12) + "\" y1=\"" + fmt(ly) + "\" x2=\"" +
           fmt(ml + pw + 36) + "\" y2=\"" + fmt(ly) + "\" stroke=\"" + s.color +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fmt(ml + pw + 42) + "\" y=\"" + fmt(ly + 4) +
           "\" font-size=\"12\">" + s.label + "</text>\n";
    ly += 18;
  }
  svg += "</svg>\n";
  write_text_file(path, svg);
}

}  // namespace koopcert
