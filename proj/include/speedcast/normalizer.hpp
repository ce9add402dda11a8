#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "speedcast/errors.hpp"
#include "speedcast/series.hpp"

namespace speedcast {

// Per-series min/max scaling to the unit interval. Statistics must come from
// the training window only; a constant series (max == min) maps to 0
// everywhere, which also keeps its inverse well defined.
struct Normalizer {
  std::vector<double> min;
  std::vector<double> max;

  std::size_t series_count() const { return min.size(); }
};

inline Normalizer fit_normalizer(const Dataset& data, IndexRange window) {
  if (window.empty()) {
    throw EmptyWindow("normalizer window is empty");
  }
  if (window.end > data.length()) {
    throw EmptyWindow("normalizer window [" + std::to_string(window.begin) +
                      ", " + std::to_string(window.end) +
                      ") exceeds dataset length " +
                      std::to_string(data.length()));
  }
  Normalizer out;
  out.min.reserve(data.series_count());
  out.max.reserve(data.series_count());
  for (const auto& s : data.series) {
    auto lo = s.values.begin() + static_cast<std::ptrdiff_t>(window.begin);
    auto hi = s.values.begin() + static_cast<std::ptrdiff_t>(window.end);
    auto [mn, mx] = std::minmax_element(lo, hi);
    out.min.push_back(*mn);
    out.max.push_back(*mx);
  }
  return out;
}

inline double normalize_value(const Normalizer& norm, std::size_t series_index,
                              double value) {
  if (series_index >= norm.series_count()) {
    throw IndexOutOfRange("series index " + std::to_string(series_index) +
                          " out of range for normalizer of size " +
                          std::to_string(norm.series_count()));
  }
  const double range = norm.max[series_index] - norm.min[series_index];
  if (range == 0.0) {
    return 0.0;
  }
  return (value - norm.min[series_index]) / range;
}

// Values outside the fitted range map outside [0, 1]; no clamping here.
// Only final speed forecasts are clamped (see forecast.hpp).
inline Dataset normalize(const Normalizer& norm, const Dataset& data) {
  if (norm.series_count() != data.series_count()) {
    throw SeriesCountMismatch(
        "normalizer fitted on " + std::to_string(norm.series_count()) +
        " series, dataset has " + std::to_string(data.series_count()));
  }
  Dataset out = data;
  for (std::size_t i = 0; i < out.series.size(); ++i) {
    for (double& v : out.series[i].values) {
      v = normalize_value(norm, i, v);
    }
  }
  return out;
}

inline double denormalize(const Normalizer& norm, std::size_t series_index,
                          double value) {
  if (series_index >= norm.series_count()) {
    throw IndexOutOfRange("series index " + std::to_string(series_index) +
                          " out of range for normalizer of size " +
                          std::to_string(norm.series_count()));
  }
  const double range = norm.max[series_index] - norm.min[series_index];
  return value * range + norm.min[series_index];
}

}  // namespace speedcast
