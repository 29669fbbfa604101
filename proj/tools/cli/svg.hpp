#pragma once

#include <string>
#include <utility>
#include <vector>

namespace litstyle::cli {

enum class SeriesKind { scatter, line, step };

struct Series {
  std::string name;
  SeriesKind kind = SeriesKind::scatter;
  std::vector<std::pair<double, double>> points;
  // Scatter points may carry their own labels (drawn next to the marker).
  std::vector<std::string> labels;
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  // Optional categorical x axis: tick i sits at x = i.
  std::vector<std::string> x_ticks;
  // Fixed axis ranges; derived from the data when lo == hi.
  std::pair<double, double> x_range{0.0, 0.0};
  std::pair<double, double> y_range{0.0, 0.0};
};

// Self-contained SVG document. Every coordinate is written with six decimals,
// so the same numbers always give the same bytes.
std::string render_svg(const Plot& plot);

}  // namespace litstyle::cli
