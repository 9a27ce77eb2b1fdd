#pragma once

// Plot-data columns and a minimal SVG line chart.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "oxisim/csv.hpp"

namespace oxisim::plot {

struct Series {
  std::string name;
  std::vector<double> y;
};

struct Chart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> x;
  std::vector<Series> series;
};

/// Whitespace separated, one series per column, '#' header naming columns.
inline void write_data(std::ostream& os, const Chart& c) {
  os << "# " << c.x_label;
  for (const auto& s : c.series) os << ' ' << s.name;
  os << '\n';
  for (std::size_t i = 0; i < c.x.size(); ++i) {
    os << csv::coord(c.x[i]);
    for (const auto& s : c.series) os << ' ' << csv::coord(s.y.at(i));
    os << '\n';
  }
}

namespace detail {

inline std::string px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace detail

inline void write_svg(std::ostream& os, const Chart& c) {
  constexpr double W = 720, H = 440, L = 80, R = 160, T = 40, B = 60;
  constexpr std::array<const char*, 8> palette{"#1f77b4", "#d62728", "#2ca02c",
                                               "#ff7f0e", "#9467bd", "#8c564b",
                                               "#e377c2", "#17becf"};
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (double v : c.x) {
    xmin = std::min(xmin, v);
    xmax = std::max(xmax, v);
  }
  for (const auto& s : c.series)
    for (double v : s.y) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  if (!(xmax > xmin)) {
    xmin = std::isfinite(xmin) ? xmin - 1 : 0;
    xmax = xmin + 2;
  }
  if (!(ymax > ymin)) {
    ymin = std::isfinite(ymin) ? ymin - 1 : 0;
    ymax = ymin + 2;
  }
  auto sx = [&](double v) { return L + (v - xmin) / (xmax - xmin) * (W - L - R); };
  auto sy = [&](double v) { return H - B - (v - ymin) / (ymax - ymin) * (H - T - B); };

  using detail::px;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << px(W)
     << "\" height=\"" << px(H) << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << px(W / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
     << detail::escape(c.title) << "</text>\n"
     << "<line x1=\"" << px(L) << "\" y1=\"" << px(H - B) << "\" x2=\"" << px(W - R)
     << "\" y2=\"" << px(H - B) << "\" stroke=\"black\"/>\n"
     << "<line x1=\"" << px(L) << "\" y1=\"" << px(T) << "\" x2=\"" << px(L)
     << "\" y2=\"" << px(H - B) << "\" stroke=\"black\"/>\n";

  constexpr int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double xv = xmin + (xmax - xmin) * i / ticks;
    const double yv = ymin + (ymax - ymin) * i / ticks;
    os << "<text x=\"" << px(sx(xv)) << "\" y=\"" << px(H - B + 18)
       << "\" text-anchor=\"middle\">" << csv::coord(std::round(xv * 1e4) / 1e4)
       << "</text>\n"
       << "<text x=\"" << px(L - 6) << "\" y=\"" << px(sy(yv) + 4)
       << "\" text-anchor=\"end\">" << csv::coord(std::round(yv * 1e4) / 1e4)
       << "</text>\n";
  }
  os << "<text x=\"" << px((L + W - R) / 2) << "\" y=\"" << px(H - 16)
     << "\" text-anchor=\"middle\">" << detail::escape(c.x_label) << "</text>\n"
     << "<text x=\"18\" y=\"" << px((T + H - B) / 2) << "\" text-anchor=\"middle\""
     << " transform=\"rotate(-90 18 " << px((T + H - B) / 2) << ")\">"
     << detail::escape(c.y_label) << "</text>\n";

  for (std::size_t k = 0; k < c.series.size(); ++k) {
    const auto& s = c.series[k];
    const char* color = palette[k % palette.size()];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < c.x.size(); ++i)
      os << (i ? " " : "") << px(sx(c.x[i])) << ',' << px(sy(s.y.at(i)));
    os << "\"/>\n";
    const double ly = T + 16.0 * static_cast<double>(k);
    os << "<line x1=\"" << px(W - R + 12) << "\" y1=\"" << px(ly) << "\" x2=\""
       << px(W - R + 32) << "\" y2=\"" << px(ly) << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>\n"
       << "<text x=\"" << px(W - R + 38) << "\" y=\"" << px(ly + 4) << "\">"
       << detail::escape(s.name) << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace oxisim::plot
