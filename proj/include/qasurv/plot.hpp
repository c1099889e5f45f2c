#pragma once

#include <optional>
#include <string>
#include <vector>

namespace qasurv {

// One plotted curve. When band_lower/band_upper are non-empty they must
// match x in length and are drawn as a translucent polygon behind the
// line. Exactly one <path> element is emitted per series.
struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> band_lower;
  std::vector<double> band_upper;
  bool step = false;     // right-continuous step curve
  std::string color;     // CSS color; empty picks from the palette
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;  // log10 time axis; requires positive x
  int width = 760;
  int height = 480;
  std::optional<double> y_min;
  std::optional<double> y_max;
  bool legend = true;
};

// Renders standalone SVG 1.1. Throws InvalidInputError on empty or
// inconsistent series data.
std::string render_svg(const std::vector<PlotSeries>& series,
                       const PlotOptions& options);

void write_svg_file(const std::string& path,
                    const std::vector<PlotSeries>& series,
                    const PlotOptions& options);

}  // namespace qasurv
