#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "clusterkit/exp/runner.hpp"

namespace clusterkit {

// Writes a single sweep curve (mean with stddev whiskers) as a standalone
// SVG. No scripts, no external assets; any browser or image viewer renders
// it as-is.
inline void emit_plot(const SweepResult& sw, const std::string& metric,
                      const std::string& path) {
  auto rows = summarize(sw, metric);
  if (rows.empty()) throw std::runtime_error("plot: empty sweep");

  const double width = 640, height = 420;
  const double ml = 70, mr = 20, mt = 40, mb = 50;
  const double pw = width - ml - mr, ph = height - mt - mb;

  double xmin = rows.front().value, xmax = rows.back().value;
  for (auto& r : rows) {
    xmin = std::min(xmin, r.value);
    xmax = std::max(xmax, r.value);
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  double ymin = rows[0].mean - rows[0].stddev;
  double ymax = rows[0].mean + rows[0].stddev;
  for (auto& r : rows) {
    ymin = std::min(ymin, r.mean - r.stddev);
    ymax = std::max(ymax, r.mean + r.stddev);
  }
  if (ymin > 0.0 && ymin < 0.25 * ymax) ymin = 0.0;
  if (ymax == ymin) ymax = ymin + 1.0;
  const double ypad = 0.05 * (ymax - ymin);
  ymax += ypad;
  if (ymin != 0.0) ymin -= ypad;

  auto sx = [&](double v) { return ml + (v - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double v) { return mt + ph - (v - ymin) / (ymax - ymin) * ph; };
  auto num = [](double v) { return detail::num_str(v); };

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write plot file: " + path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"15\">"
      << metric << " vs " << sw.axis << "</text>\n";

  // Axes with five ticks each.
  out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
      << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml
      << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    double xv = xmin + (xmax - xmin) * i / 4.0;
    double yv = ymin + (ymax - ymin) * i / 4.0;
    double gx = sx(xv), gy = sy(yv);
    out << "<line x1=\"" << gx << "\" y1=\"" << mt + ph << "\" x2=\"" << gx
        << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << gx << "\" y=\"" << mt + ph + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << num(std::round(xv * 100.0) / 100.0) << "</text>\n";
    out << "<line x1=\"" << ml - 5 << "\" y1=\"" << gy << "\" x2=\"" << ml
        << "\" y2=\"" << gy << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << ml - 8 << "\" y=\"" << gy + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << num(std::round(yv * 100.0) / 100.0) << "</text>\n";
  }
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\">"
      << sw.axis << "</text>\n";

  // Stddev whiskers under the mean polyline.
  for (auto& r : rows) {
    double gx = sx(r.value);
    out << "<line x1=\"" << gx << "\" y1=\"" << sy(r.mean - r.stddev)
        << "\" x2=\"" << gx << "\" y2=\"" << sy(r.mean + r.stddev)
        << "\" stroke=\"#1f77b4\" stroke-width=\"1\"/>\n";
    out << "<line x1=\"" << gx - 4 << "\" y1=\"" << sy(r.mean + r.stddev)
        << "\" x2=\"" << gx + 4 << "\" y2=\"" << sy(r.mean + r.stddev)
        << "\" stroke=\"#1f77b4\"/>\n";
    out << "<line x1=\"" << gx - 4 << "\" y1=\"" << sy(r.mean - r.stddev)
        << "\" x2=\"" << gx + 4 << "\" y2=\"" << sy(r.mean - r.stddev)
        << "\" stroke=\"#1f77b4\"/>\n";
  }
  out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" "
         "points=\"";
  for (auto& r : rows) out << sx(r.value) << "," << sy(r.mean) << " ";
  out << "\"/>\n";
  for (auto& r : rows) {
    out << "<circle cx=\"" << sx(r.value) << "\" cy=\"" << sy(r.mean)
        << "\" r=\"3\" fill=\"#1f77b4\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace clusterkit
