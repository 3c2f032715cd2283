#include "difftrio/bench/svg.hpp"

#include "difftrio/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace difftrio::bench {

namespace {

constexpr double width = 720.0;
constexpr double height = 440.0;
constexpr double left = 80.0;
constexpr double right = 170.0;
constexpr double top = 40.0;
constexpr double bottom = 60.0;
constexpr std::array<const char*, 8> palette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                             "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

struct Range {
  double lo{std::numeric_limits<double>::infinity()};
  double hi{-std::numeric_limits<double>::infinity()};

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!(lo <= hi)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-300) {
      const double pad = std::max(1.0, std::abs(lo)) * 0.05;
      lo -= pad;
      hi += pad;
    }
  }
};

double transform(double v, bool log) { return log ? std::log10(v) : v; }

void header(std::ostringstream& os, const PlotAxes& axes) {
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(axes.title)
     << "</text>\n"
     << "<text x=\"" << left + (width - left - right) / 2 << "\" y=\"" << height - 14
     << "\" text-anchor=\"middle\">" << escape(axes.x_label) << "</text>\n"
     << "<text transform=\"translate(18," << top + (height - top - bottom) / 2
     << ") rotate(-90)\" text-anchor=\"middle\">" << escape(axes.y_label) << "</text>\n";
}

void frame(std::ostringstream& os, const Range& xr, const Range& yr, const PlotAxes& axes, bool x_ticks) {
  const double pw = width - left - right;
  const double ph = height - top - bottom;
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double f = i / 4.0;
    const double yv = yr.lo + f * (yr.hi - yr.lo);
    const double py = top + ph * (1.0 - f);
    os << "<line x1=\"" << left << "\" x2=\"" << left + pw << "\" y1=\"" << py << "\" y2=\"" << py
       << "\" stroke=\"#ddd\"/>\n<text x=\"" << left - 6 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\">"
       << num(axes.log_y ? std::pow(10.0, yv) : yv) << "</text>\n";
    if (x_ticks) {
      const double xv = xr.lo + f * (xr.hi - xr.lo);
      const double px = left + pw * f;
      os << "<text x=\"" << px << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
         << num(axes.log_x ? std::pow(10.0, xv) : xv) << "</text>\n";
    }
  }
}

void legend(std::ostringstream& os, const std::vector<std::string>& labels) {
  for (std::size_t s = 0; s < labels.size(); ++s) {
    const double y = top + 14.0 + 18.0 * static_cast<double>(s);
    const double x = width - right + 12.0;
    os << "<rect x=\"" << x << "\" y=\"" << y - 9 << "\" width=\"14\" height=\"10\" fill=\""
       << palette[s % palette.size()] << "\"/>\n<text x=\"" << x + 20 << "\" y=\"" << y << "\">"
       << escape(labels[s]) << "</text>\n";
  }
}

}  // namespace

std::string line_plot_svg(const std::vector<PlotSeries>& series, const PlotAxes& axes) {
  Range xr;
  Range yr;
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw ContractError("plot series '" + s.label + "' has mismatched lengths");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if ((axes.log_x && !(s.x[i] > 0.0)) || (axes.log_y && !(s.y[i] > 0.0))) continue;
      xr.add(transform(s.x[i], axes.log_x));
      yr.add(transform(s.y[i], axes.log_y));
    }
  }
  xr.finish();
  yr.finish();
  const double pw = width - left - right;
  const double ph = height - top - bottom;
  std::ostringstream os;
  header(os, axes);
  frame(os, xr, yr, axes, true);
  std::vector<std::string> labels;
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    labels.push_back(s.label);
    os << "<polyline fill=\"none\" stroke-width=\"1.4\" stroke=\"" << palette[k % palette.size()] << "\" points=\"";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if ((axes.log_x && !(s.x[i] > 0.0)) || (axes.log_y && !(s.y[i] > 0.0))) continue;
      const double px = left + pw * (transform(s.x[i], axes.log_x) - xr.lo) / (xr.hi - xr.lo);
      const double py = top + ph * (1.0 - (transform(s.y[i], axes.log_y) - yr.lo) / (yr.hi - yr.lo));
      os << num(px) << ',' << num(py) << ' ';
    }
    os << "\"/>\n";
  }
  legend(os, labels);
  os << "</svg>\n";
  return os.str();
}

std::string bar_chart_svg(const std::vector<std::string>& groups, const std::vector<std::string>& series,
                          const std::vector<std::vector<double>>& values, const PlotAxes& axes) {
  if (values.size() != series.size()) throw ContractError("bar chart: one value row per series expected");
  Range yr;
  yr.add(0.0);
  for (const auto& row : values) {
    if (row.size() != groups.size()) throw ContractError("bar chart: one value per group expected");
    for (double v : row) yr.add(v);
  }
  yr.finish();
  const double pw = width - left - right;
  const double ph = height - top - bottom;
  std::ostringstream os;
  header(os, axes);
  frame(os, Range{0.0, 1.0}, yr, axes, false);
  const double group_w = pw / static_cast<double>(std::max<std::size_t>(groups.size(), 1));
  const double bar_w = 0.8 * group_w / static_cast<double>(std::max<std::size_t>(series.size(), 1));
  const double zero_y = top + ph * (1.0 - (0.0 - yr.lo) / (yr.hi - yr.lo));
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const double gx = left + group_w * static_cast<double>(g);
    if (groups.size() <= 40 || g % (groups.size() / 20 + 1) == 0)
      os << "<text x=\"" << gx + group_w / 2 << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
         << escape(groups[g]) << "</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
      const double v = values[s][g];
      if (!std::isfinite(v)) continue;
      const double py = top + ph * (1.0 - (v - yr.lo) / (yr.hi - yr.lo));
      os << "<rect x=\"" << num(gx + 0.1 * group_w + bar_w * static_cast<double>(s)) << "\" y=\""
         << num(std::min(py, zero_y)) << "\" width=\"" << num(bar_w) << "\" height=\"" << num(std::abs(zero_y - py))
         << "\" fill=\"" << palette[s % palette.size()] << "\"/>\n";
    }
  }
  legend(os, series);
  os << "</svg>\n";
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigurationError("cannot write " + path.string());
  out << text;
}

}  // namespace difftrio::bench
