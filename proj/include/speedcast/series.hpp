#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "speedcast/errors.hpp"

namespace speedcast {

// What a sensor stream measures. Anything beyond speed and flow keeps its
// original label under kOther.
struct Variable {
  enum Kind { kSpeed, kFlow, kOther };

  Kind kind = kSpeed;
  std::string label;  // set when kind == kOther

  static Variable speed() { return {kSpeed, {}}; }
  static Variable flow() { return {kFlow, {}}; }
  static Variable other(std::string label) { return {kOther, std::move(label)}; }

  static Variable from_name(const std::string& name) {
    if (name.empty() || name == "speed" || name == "Speed" || name == "SPEED") {
      return speed();
    }
    if (name == "flow" || name == "Flow" || name == "FLOW") {
      return flow();
    }
    return other(name);
  }

  const std::string& name() const {
    static const std::string kSpeedName = "speed";
    static const std::string kFlowName = "flow";
    switch (kind) {
      case kSpeed:
        return kSpeedName;
      case kFlow:
        return kFlowName;
      default:
        return label;
    }
  }

  friend bool operator==(const Variable& a, const Variable& b) {
    return a.kind == b.kind && (a.kind != kOther || a.label == b.label);
  }
};

// One sensor/variable stream on a uniform grid: sample i carries timestamp
// start_time + i * step. Values are km/h for speed streams. Ingestion is
// responsible for leaving no NaN/inf behind; algorithms assume finite data.
struct MeasurementSeries {
  std::string sensor_id;
  Variable variable = Variable::speed();
  std::int64_t start_time = 0;  // epoch seconds, UTC
  std::int64_t step = 300;      // seconds between samples
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  std::int64_t timestamp_at(std::size_t i) const {
    return start_time + static_cast<std::int64_t>(i) * step;
  }
};

// Half-open index range [begin, end).
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end > begin ? end - begin : 0; }
  bool empty() const { return end <= begin; }
};

// P aligned series plus the index of the one being forecast.
struct Dataset {
  std::vector<MeasurementSeries> series;
  std::size_t target_index = 0;

  std::size_t series_count() const { return series.size(); }
  std::size_t length() const {
    return series.empty() ? 0 : series.front().size();
  }
  const MeasurementSeries& target() const { return series[target_index]; }

  // Checks the alignment invariants: at least one series, shared
  // start/step/length, a valid target index, and finite values.
  void validate() const {
    if (series.empty()) {
      throw InvalidSpec("dataset has no series");
    }
    if (target_index >= series.size()) {
      throw IndexOutOfRange("target index " + std::to_string(target_index) +
                            " out of range for " +
                            std::to_string(series.size()) + " series");
    }
    const auto& first = series.front();
    for (const auto& s : series) {
      if (s.start_time != first.start_time || s.step != first.step ||
          s.size() != first.size()) {
        throw SeriesCountMismatch("series " + s.sensor_id +
                                  " is not aligned with the dataset grid");
      }
      for (double v : s.values) {
        if (!std::isfinite(v)) {
          throw InvalidSpec("series " + s.sensor_id +
                            " contains a non-finite value");
        }
      }
    }
  }
};

// Copies the sample window [range.begin, range.end) of every series,
// shifting start_time accordingly.
inline Dataset slice(const Dataset& data, IndexRange range) {
  if (range.empty() || range.end > data.length()) {
    throw IndexOutOfRange("slice [" + std::to_string(range.begin) + ", " +
                          std::to_string(range.end) +
                          ") out of range for length " +
                          std::to_string(data.length()));
  }
  Dataset out;
  out.target_index = data.target_index;
  out.series.reserve(data.series.size());
  for (const auto& s : data.series) {
    MeasurementSeries w;
    w.sensor_id = s.sensor_id;
    w.variable = s.variable;
    w.step = s.step;
    w.start_time = s.timestamp_at(range.begin);
    w.values.assign(s.values.begin() + static_cast<std::ptrdiff_t>(range.begin),
                    s.values.begin() + static_cast<std::ptrdiff_t>(range.end));
    out.series.push_back(std::move(w));
  }
  return out;
}

// Keeps only the target series; used by the plain autoregressive baseline.
inline Dataset target_only(const Dataset& data) {
  Dataset out;
  out.series.push_back(data.series[data.target_index]);
  out.target_index = 0;
  return out;
}

}  // namespace speedcast
