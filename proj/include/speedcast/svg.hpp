#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "speedcast/layout.hpp"
#include "speedcast/time.hpp"

#include <Eigen/Dense>

namespace speedcast {
namespace svg {

// Fixed two-decimal formatting keeps the emitted markup byte-stable across
// runs and platforms.
inline std::string coord(double v) {
  char buf[48];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

inline std::string label_number(double v) {
  char buf[48];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed,
                           std::fabs(v) < 10.0 ? 1 : 0);
  return std::string(buf, res.ptr);
}

// Round tick spacing to a 1/2/5 ladder so axis labels land on clean values.
inline std::vector<double> nice_ticks(double lo, double hi, int target = 6) {
  if (!(hi > lo)) {
    return {lo};
  }
  const double raw = (hi - lo) / std::max(1, target);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * m >= raw) {
      step = mag * m;
      break;
    }
  }
  std::vector<double> ticks;
  double t = std::ceil(lo / step) * step;
  for (; t <= hi + step * 1e-9; t += step) {
    ticks.push_back(std::fabs(t) < step * 1e-9 ? 0.0 : t);
  }
  return ticks;
}

struct Frame {
  double width = 960.0;
  double height = 420.0;
  double left = 64.0;
  double right = 24.0;
  double top = 40.0;
  double bottom = 48.0;

  double plot_w() const { return width - left - right; }
  double plot_h() const { return height - top - bottom; }
};

inline void open_document(std::ostream& out, const Frame& f,
                          std::string_view title) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << coord(f.width)
      << "\" height=\"" << coord(f.height) << "\" viewBox=\"0 0 "
      << coord(f.width) << ' ' << coord(f.height) << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << coord(f.width / 2.0)
      << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"15\" fill=\"#222\">"
      << title << "</text>\n";
}

}  // namespace svg

// Actual-vs-predicted line chart over the evaluation window. Timestamps label
// the x axis as HH:MM; speeds label the y axis.
inline void write_forecast_svg(std::ostream& out,
                               const std::vector<std::int64_t>& timestamps,
                               const std::vector<double>& actual,
                               const std::vector<double>& predicted,
                               std::string_view title) {
  using svg::coord;
  svg::Frame f;
  svg::open_document(out, f, title);
  if (actual.empty() || actual.size() != predicted.size() ||
      actual.size() != timestamps.size()) {
    out << "</svg>\n";
    return;
  }

  double lo = actual[0];
  double hi = actual[0];
  for (const auto* v : {&actual, &predicted}) {
    for (double x : *v) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  if (hi - lo < 1.0) {
    hi = lo + 1.0;
  }
  const double pad = 0.06 * (hi - lo);
  lo -= pad;
  hi += pad;

  const double n = static_cast<double>(actual.size());
  auto px = [&](std::size_t i) {
    return f.left + f.plot_w() * (n > 1.0 ? static_cast<double>(i) / (n - 1.0)
                                          : 0.5);
  };
  auto py = [&](double v) {
    return f.top + f.plot_h() * (1.0 - (v - lo) / (hi - lo));
  };

  // axes and grid
  out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#444\">\n";
  for (double tick : svg::nice_ticks(lo, hi)) {
    const double y = py(tick);
    out << "<line x1=\"" << coord(f.left) << "\" y1=\"" << coord(y)
        << "\" x2=\"" << coord(f.width - f.right) << "\" y2=\"" << coord(y)
        << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << coord(f.left - 6.0) << "\" y=\"" << coord(y + 4.0)
        << "\" text-anchor=\"end\">" << svg::label_number(tick) << "</text>\n";
  }
  const std::size_t stride =
      std::max<std::size_t>(1, actual.size() / 8);
  for (std::size_t i = 0; i < actual.size(); i += stride) {
    const std::string ts = format_iso8601(timestamps[i]).substr(11, 5);
    out << "<text x=\"" << coord(px(i)) << "\" y=\""
        << coord(f.height - f.bottom + 18.0) << "\" text-anchor=\"middle\">"
        << ts << "</text>\n";
  }
  out << "</g>\n";
  out << "<rect x=\"" << coord(f.left) << "\" y=\"" << coord(f.top)
      << "\" width=\"" << coord(f.plot_w()) << "\" height=\""
      << coord(f.plot_h()) << "\" fill=\"none\" stroke=\"#999\"/>\n";

  auto polyline = [&](const std::vector<double>& values, const char* color,
                      const char* dash) {
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\"";
    if (dash[0]) {
      out << " stroke-dasharray=\"" << dash << '"';
    }
    out << " points=\"";
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i) {
        out << ' ';
      }
      out << coord(px(i)) << ',' << coord(py(values[i]));
    }
    out << "\"/>\n";
  };
  polyline(actual, "#1f77b4", "");
  polyline(predicted, "#d62728", "5,3");

  // legend
  out << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#222\">\n"
      << "<line x1=\"" << coord(f.left + 10.0) << "\" y1=\""
      << coord(f.top + 14.0) << "\" x2=\"" << coord(f.left + 38.0)
      << "\" y2=\"" << coord(f.top + 14.0)
      << "\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n"
      << "<text x=\"" << coord(f.left + 44.0) << "\" y=\""
      << coord(f.top + 18.0) << "\">actual</text>\n"
      << "<line x1=\"" << coord(f.left + 110.0) << "\" y1=\""
      << coord(f.top + 14.0) << "\" x2=\"" << coord(f.left + 138.0)
      << "\" y2=\"" << coord(f.top + 14.0)
      << "\" stroke=\"#d62728\" stroke-width=\"1.5\" "
         "stroke-dasharray=\"5,3\"/>\n"
      << "<text x=\"" << coord(f.left + 144.0) << "\" y=\""
      << coord(f.top + 18.0) << "\">predicted</text>\n</g>\n";
  out << "</svg>\n";
}

// Stem plot of one coefficient vector. Columns are grouped by series block;
// dashed separators mark block boundaries and each block is labeled with its
// sensor id below the axis.
inline void write_coefficient_svg(std::ostream& out,
                                  const Eigen::VectorXd& coefficients,
                                  const BlockLayout& layout,
                                  const std::vector<std::string>& sensor_ids,
                                  std::string_view title) {
  using svg::coord;
  svg::Frame f;
  f.bottom = 64.0;
  svg::open_document(out, f, title);
  const int n = static_cast<int>(coefficients.size());
  if (n == 0 || n != layout.total_cols) {
    out << "</svg>\n";
    return;
  }

  double lo = 0.0;
  double hi = 0.0;
  for (int i = 0; i < n; ++i) {
    lo = std::min(lo, coefficients(i));
    hi = std::max(hi, coefficients(i));
  }
  if (hi - lo < 1e-12) {
    hi = lo + 1.0;
  }
  const double pad = 0.08 * (hi - lo);
  lo -= pad;
  hi += pad;

  auto px = [&](double col) {  // col in [0, n)
    return f.left + f.plot_w() * (col + 0.5) / static_cast<double>(n);
  };
  auto py = [&](double v) {
    return f.top + f.plot_h() * (1.0 - (v - lo) / (hi - lo));
  };

  out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#444\">\n";
  for (double tick : svg::nice_ticks(lo, hi)) {
    const double y = py(tick);
    out << "<line x1=\"" << coord(f.left) << "\" y1=\"" << coord(y)
        << "\" x2=\"" << coord(f.width - f.right) << "\" y2=\"" << coord(y)
        << "\" stroke=\"#eee\"/>\n";
    out << "<text x=\"" << coord(f.left - 6.0) << "\" y=\"" << coord(y + 4.0)
        << "\" text-anchor=\"end\">" << svg::label_number(tick) << "</text>\n";
  }
  out << "</g>\n";

  const double zero = py(0.0);
  out << "<line x1=\"" << coord(f.left) << "\" y1=\"" << coord(zero)
      << "\" x2=\"" << coord(f.width - f.right) << "\" y2=\"" << coord(zero)
      << "\" stroke=\"#888\"/>\n";

  // block separators and labels
  out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  for (int p = 0; p < layout.block_count(); ++p) {
    const int begin = layout.block_begin(p);
    const int size = layout.block_size(p);
    if (p > 0) {
      const double x = f.left + f.plot_w() * begin / static_cast<double>(n);
      out << "<line x1=\"" << coord(x) << "\" y1=\"" << coord(f.top)
          << "\" x2=\"" << coord(x) << "\" y2=\""
          << coord(f.height - f.bottom)
          << "\" stroke=\"#bbb\" stroke-dasharray=\"4,4\"/>\n";
    }
    const double mid = px(begin + (size - 1) / 2.0);
    const std::string label = p < static_cast<int>(sensor_ids.size())
                                  ? sensor_ids[static_cast<std::size_t>(p)]
                                  : "block " + std::to_string(p);
    out << "<text x=\"" << coord(mid) << "\" y=\""
        << coord(f.height - f.bottom + 34.0) << "\" text-anchor=\"middle\">"
        << label << "</text>\n";
  }
  out << "</g>\n";

  for (int i = 0; i < n; ++i) {
    const double x = px(i);
    const double y = py(coefficients(i));
    out << "<line x1=\"" << coord(x) << "\" y1=\"" << coord(zero)
        << "\" x2=\"" << coord(x) << "\" y2=\"" << coord(y)
        << "\" stroke=\"#1f77b4\"/>\n";
    out << "<circle cx=\"" << coord(x) << "\" cy=\"" << coord(y)
        << "\" r=\"2.4\" fill=\"#1f77b4\"/>\n";
  }
  out << "<rect x=\"" << coord(f.left) << "\" y=\"" << coord(f.top)
      << "\" width=\"" << coord(f.plot_w()) << "\" height=\""
      << coord(f.plot_h()) << "\" fill=\"none\" stroke=\"#999\"/>\n";
  out << "</svg>\n";
}

}  // namespace speedcast
