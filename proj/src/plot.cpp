#include "qasurv/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "qasurv/errors.hpp"

namespace qasurv {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c",
                                    "#9467bd", "#ff7f0e", "#8c564b",
                                    "#17becf", "#7f7f7f"};

std::string escape_xml(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (const char c : text) {
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
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
};

std::vector<double> linear_ticks(double lo, double hi, int target) {
  const double span = hi - lo;
  if (!(span > 0)) return {lo};
  double step = std::pow(10.0, std::floor(std::log10(span / target)));
  const double err = span / (target * step);
  if (err >= 7.5) {
    step *= 10;
  } else if (err >= 3.5) {
    step *= 5;
  } else if (err >= 1.5) {
    step *= 2;
  }
  std::vector<double> ticks;
  for (double v = std::ceil(lo / step) * step; v <= hi + step * 1e-9; v += step) {
    ticks.push_back(std::abs(v) < step * 1e-9 ? 0.0 : v);
  }
  return ticks;
}

std::vector<double> decade_ticks(double lo, double hi) {
  std::vector<double> ticks;
  const int first = static_cast<int>(std::ceil(lo - 1e-9));
  const int last = static_cast<int>(std::floor(hi + 1e-9));
  for (int e = first; e <= last; ++e) ticks.push_back(static_cast<double>(e));
  if (ticks.empty()) ticks.push_back(lo);
  return ticks;
}

}  // namespace

std::string render_svg(const std::vector<PlotSeries>& series,
                       const PlotOptions& options) {
  if (series.empty()) throw InvalidInputError("nothing to plot");

  Range xr, yr;
  for (const auto& s : series) {
    if (s.x.empty()) throw InvalidInputError("series '" + s.label + "' is empty");
    if (s.x.size() != s.y.size()) {
      throw InvalidInputError("series '" + s.label + "' x/y lengths differ");
    }
    const bool banded = !s.band_lower.empty() || !s.band_upper.empty();
    if (banded && (s.band_lower.size() != s.x.size() ||
                   s.band_upper.size() != s.x.size())) {
      throw InvalidInputError("series '" + s.label + "' band lengths differ");
    }
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      double xv = s.x[i];
      if (options.log_x) {
        if (!(xv > 0)) {
          throw InvalidInputError("log-scale x axis requires positive values");
        }
        xv = std::log10(xv);
      }
      xr.add(xv);
      yr.add(s.y[i]);
      if (banded) {
        yr.add(s.band_lower[i]);
        yr.add(s.band_upper[i]);
      }
    }
  }
  if (options.y_min) yr.lo = *options.y_min;
  if (options.y_max) yr.hi = *options.y_max;
  if (!(xr.hi > xr.lo)) xr.hi = xr.lo + 1.0;
  if (!(yr.hi > yr.lo)) yr.hi = yr.lo + 1.0;
  const double ypad = 0.04 * (yr.hi - yr.lo);
  if (!options.y_min) yr.lo -= ypad;
  if (!options.y_max) yr.hi += ypad;

  const double ml = 64, mr = 16, mt = options.title.empty() ? 16 : 40, mb = 48;
  const double pw = options.width - ml - mr;
  const double ph = options.height - mt - mb;
  const auto sx = [&](double v) {
    const double t = options.log_x ? std::log10(v) : v;
    return ml + (t - xr.lo) / (xr.hi - xr.lo) * pw;
  };
  const auto sy = [&](double v) {
    return mt + (yr.hi - v) / (yr.hi - yr.lo) * ph;
  };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         std::to_string(options.width) + "\" height=\"" +
         std::to_string(options.height) + "\" viewBox=\"0 0 " +
         std::to_string(options.width) + " " + std::to_string(options.height) +
         "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // Grid and ticks.
  const std::vector<double> xticks = options.log_x
                                         ? decade_ticks(xr.lo, xr.hi)
                                         : linear_ticks(xr.lo, xr.hi, 6);
  const std::vector<double> yticks = linear_ticks(yr.lo, yr.hi, 6);
  for (const double t : xticks) {
    const double raw = options.log_x ? std::pow(10.0, t) : t;
    const double px = ml + (t - xr.lo) / (xr.hi - xr.lo) * pw;
    svg += "<line x1=\"" + fmt(px) + "\" y1=\"" + fmt(mt) + "\" x2=\"" +
           fmt(px) + "\" y2=\"" + fmt(mt + ph) +
           "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + fmt(px) + "\" y=\"" + fmt(mt + ph + 18) +
           "\" font-size=\"11\" text-anchor=\"middle\" fill=\"#333333\">" +
           escape_xml(fmt_tick(raw)) + "</text>\n";
  }
  for (const double t : yticks) {
    const double py = sy(t);
    svg += "<line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(py) + "\" x2=\"" +
           fmt(ml + pw) + "\" y2=\"" + fmt(py) +
           "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    svg += "<text x=\"" + fmt(ml - 6) + "\" y=\"" + fmt(py + 4) +
           "\" font-size=\"11\" text-anchor=\"end\" fill=\"#333333\">" +
           escape_xml(fmt_tick(t)) + "</text>\n";
  }

  // Axes.
  svg += "<line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(mt + ph) + "\" x2=\"" +
         fmt(ml + pw) + "\" y2=\"" + fmt(mt + ph) +
         "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  svg += "<line x1=\"" + fmt(ml) + "\" y1=\"" + fmt(mt) + "\" x2=\"" + fmt(ml) +
         "\" y2=\"" + fmt(mt + ph) + "\" stroke=\"black\" stroke-width=\"1\"/>\n";

  // Confidence bands first, so every line stays visible on top.
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    if (s.band_lower.empty()) continue;
    const std::string color =
        s.color.empty() ? kPalette[si % std::size(kPalette)] : s.color;
    std::string points;
    const auto add_point = [&](double xv, double yv) {
      points += fmt(sx(xv)) + "," + fmt(sy(yv)) + " ";
    };
    if (s.step) {
      for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (i > 0) add_point(s.x[i], s.band_upper[i - 1]);
        add_point(s.x[i], s.band_upper[i]);
      }
      for (std::size_t i = s.x.size(); i-- > 0;) {
        add_point(s.x[i], s.band_lower[i]);
        if (i > 0) add_point(s.x[i], s.band_lower[i - 1]);
      }
    } else {
      for (std::size_t i = 0; i < s.x.size(); ++i) add_point(s.x[i], s.band_upper[i]);
      for (std::size_t i = s.x.size(); i-- > 0;) add_point(s.x[i], s.band_lower[i]);
    }
    if (!points.empty()) points.pop_back();
    svg += "<polygon points=\"" + points + "\" fill=\"" + color +
           "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
  }

  // One path per series.
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const std::string color =
        s.color.empty() ? kPalette[si % std::size(kPalette)] : s.color;
    std::string d = "M" + fmt(sx(s.x[0])) + " " + fmt(sy(s.y[0]));
    for (std::size_t i = 1; i < s.x.size(); ++i) {
      if (s.step) {
        d += " L" + fmt(sx(s.x[i])) + " " + fmt(sy(s.y[i - 1]));
      }
      d += " L" + fmt(sx(s.x[i])) + " " + fmt(sy(s.y[i]));
    }
    svg += "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"1.6\"/>\n";
  }

  // Legend, top right inside the plot area.
  if (options.legend) {
    double ly = mt + 10;
    for (std::size_t si = 0; si < series.size(); ++si) {
      const auto& s = series[si];
      const std::string color =
          s.color.empty() ? kPalette[si % std::size(kPalette)] : s.color;
      const double lx = ml + pw - 150;
      svg += "<rect x=\"" + fmt(lx) + "\" y=\"" + fmt(ly - 8) +
             "\" width=\"14\" height=\"4\" fill=\"" + color + "\"/>\n";
      svg += "<text x=\"" + fmt(lx + 20) + "\" y=\"" + fmt(ly - 2) +
             "\" font-size=\"11\" fill=\"#333333\">" + escape_xml(s.label) +
             "</text>\n";
      ly += 16;
    }
  }

  if (!options.title.empty()) {
    svg += "<text x=\"" + fmt(ml + pw / 2) + "\" y=\"22\" font-size=\"14\" "
           "text-anchor=\"middle\" fill=\"black\">" +
           escape_xml(options.title) + "</text>\n";
  }
  if (!options.x_label.empty()) {
    svg += "<text x=\"" + fmt(ml + pw / 2) + "\" y=\"" +
           fmt(mt + ph + 38) + "\" font-size=\"12\" text-anchor=\"middle\" "
           "fill=\"black\">" +
           escape_xml(options.x_label) + "</text>\n";
  }
  if (!options.y_label.empty()) {
    svg += "<text x=\"16\" y=\"" + fmt(mt + ph / 2) +
           "\" font-size=\"12\" text-anchor=\"middle\" fill=\"black\" "
           "transform=\"rotate(-90 16 " +
           fmt(mt + ph / 2) + ")\">" + escape_xml(options.y_label) +
           "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void write_svg_file(const std::string& path,
                    const std::vector<PlotSeries>& series,
                    const PlotOptions& options) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInputError("cannot write " + path);
  out << render_svg(series, options);
  out.flush();
  if (!out) throw InvalidInputError("failed writing " + path);
}

}  // namespace qasurv
