#include "svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "litstyle/csv.hpp"

namespace litstyle::cli {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 170.0;  // legend column
constexpr double kTop = 50.0;
constexpr double kBottom = 60.0;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string num(double v) { return format_fixed(v, 6); }

std::string escape(const std::string& s) {
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

std::pair<double, double> padded_range(double lo, double hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) return {0.0, 1.0};
  if (hi - lo < 1e-12) {
    const double pad = std::max(std::abs(lo) * 0.1, 0.5);
    return {lo - pad, hi + pad};
  }
  const double pad = (hi - lo) * 0.05;
  return {lo - pad, hi + pad};
}

}  // namespace

std::string render_svg(const Plot& plot) {
  double x_lo = std::numeric_limits<double>::infinity();
  double x_hi = -x_lo;
  double y_lo = x_lo;
  double y_hi = -x_lo;
  for (const auto& s : plot.series) {
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      x_lo = std::min(x_lo, x);
      x_hi = std::max(x_hi, x);
      y_lo = std::min(y_lo, y);
      y_hi = std::max(y_hi, y);
    }
  }
  if (!plot.x_ticks.empty()) {
    x_lo = std::min(x_lo, 0.0);
    x_hi = std::max(x_hi, static_cast<double>(plot.x_ticks.size() - 1));
  }
  auto xr = plot.x_range.first < plot.x_range.second ? plot.x_range : padded_range(x_lo, x_hi);
  auto yr = plot.y_range.first < plot.y_range.second ? plot.y_range : padded_range(y_lo, y_hi);
  if (!plot.x_ticks.empty() && !(plot.x_range.first < plot.x_range.second)) {
    xr = {-0.5, static_cast<double>(plot.x_ticks.size()) - 0.5};
  }
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xr.first) / (xr.second - xr.first) * pw; };
  auto sy = [&](double y) { return kTop + ph - (y - yr.first) / (yr.second - yr.first) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\""
    << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth) << " " << num(kHeight) << "\">\n";
  o << "<rect x=\"0\" y=\"0\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
    << "\" fill=\"white\"/>\n";
  o << "<text x=\"" << num(kWidth / 2) << "\" y=\"28.000000\" text-anchor=\"middle\" "
       "font-family=\"sans-serif\" font-size=\"16\">"
    << escape(plot.title) << "</text>\n";
  o << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw)
    << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

  // Ticks
  o << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  if (plot.x_ticks.empty()) {
    for (int i = 0; i <= 4; ++i) {
      const double v = xr.first + (xr.second - xr.first) * i / 4.0;
      o << "<line x1=\"" << num(sx(v)) << "\" y1=\"" << num(kTop + ph) << "\" x2=\"" << num(sx(v))
        << "\" y2=\"" << num(kTop + ph + 5) << "\" stroke=\"black\"/>";
      o << "<text x=\"" << num(sx(v)) << "\" y=\"" << num(kTop + ph + 18)
        << "\" text-anchor=\"middle\">" << format_fixed(v, 3) << "</text>\n";
    }
  } else {
    for (std::size_t i = 0; i < plot.x_ticks.size(); ++i) {
      const double v = static_cast<double>(i);
      o << "<text x=\"" << num(sx(v)) << "\" y=\"" << num(kTop + ph + 18)
        << "\" text-anchor=\"middle\">" << escape(plot.x_ticks[i]) << "</text>\n";
    }
  }
  for (int i = 0; i <= 4; ++i) {
    const double v = yr.first + (yr.second - yr.first) * i / 4.0;
    o << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(sy(v)) << "\" x2=\"" << num(kLeft)
      << "\" y2=\"" << num(sy(v)) << "\" stroke=\"black\"/>";
    o << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(sy(v) + 4)
      << "\" text-anchor=\"end\">" << format_fixed(v, 3) << "</text>\n";
  }
  o << "</g>\n";
  o << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 15)
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << escape(plot.x_label)
    << "</text>\n";
  o << "<text x=\"18.000000\" y=\"" << num(kTop + ph / 2)
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18.000000 "
    << num(kTop + ph / 2) << ")\">" << escape(plot.y_label) << "</text>\n";

  for (std::size_t si = 0; si < plot.series.size(); ++si) {
    const Series& s = plot.series[si];
    const char* color = kPalette[si % std::size(kPalette)];
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : s.points) {
      if (std::isfinite(p.first) && std::isfinite(p.second)) pts.push_back(p);
    }
    if (s.kind == SeriesKind::scatter) {
      for (std::size_t i = 0; i < pts.size(); ++i) {
        o << "<circle cx=\"" << num(sx(pts[i].first)) << "\" cy=\"" << num(sy(pts[i].second))
          << "\" r=\"4.000000\" fill=\"" << color << "\" fill-opacity=\"0.8\"/>\n";
        if (i < s.labels.size() && !s.labels[i].empty()) {
          o << "<text x=\"" << num(sx(pts[i].first) + 6) << "\" y=\"" << num(sy(pts[i].second) - 6)
            << "\" font-family=\"sans-serif\" font-size=\"10\">" << escape(s.labels[i]) << "</text>\n";
        }
      }
    } else if (!pts.empty()) {
      o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.500000\" points=\"";
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (s.kind == SeriesKind::step && i > 0) {
          o << num(sx(pts[i].first)) << "," << num(sy(pts[i - 1].second)) << " ";
        }
        o << num(sx(pts[i].first)) << "," << num(sy(pts[i].second)) << (i + 1 < pts.size() ? " " : "");
      }
      o << "\"/>\n";
    }
    const double ly = kTop + 10 + 18.0 * static_cast<double>(si);
    o << "<rect x=\"" << num(kWidth - kRight + 15) << "\" y=\"" << num(ly - 8)
      << "\" width=\"10.000000\" height=\"10.000000\" fill=\"" << color << "\"/>";
    o << "<text x=\"" << num(kWidth - kRight + 30) << "\" y=\"" << num(ly + 1)
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(s.name) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace litstyle::cli
