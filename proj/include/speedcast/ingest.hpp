#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "speedcast/errors.hpp"
#include "speedcast/series.hpp"
#include "speedcast/time.hpp"

namespace speedcast {

inline constexpr double kMphToKmh = 1.609344;

// ---- CSV loading ----------------------------------------------------------

// Maps CSV header names to roles. The variable column is optional: when the
// header lacks it every row is treated as a speed measurement.
struct ColumnMap {
  std::string timestamp = "timestamp";
  std::string sensor_id = "sensor_id";
  std::string variable = "variable";
  std::string value = "value";
};

struct IngestOptions {
  ColumnMap columns;
  bool mph = false;             // convert values from mph to km/h
  std::int64_t step = 300;      // expected grid spacing, seconds
  double max_missing = 0.05;    // reject series with more gaps than this
};

namespace detail {

// Splits one CSV line; handles double-quoted fields with "" escapes.
inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) {
    return {};
  }
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_double(const std::string& s) {
  const std::string t = trim(s);
  double v;
  auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
    return std::nullopt;
  }
  return v;
}

inline std::string format_value(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

struct RawPoint {
  std::int64_t timestamp;
  double value;
};

}  // namespace detail

// Loads a long-format 5-minute CSV export into an aligned Dataset. Rows are
// grouped per (sensor, variable) series; the grid is verified against the
// configured step; isolated single-sample holes are filled with the mean of
// their neighbors; series missing more than max_missing, or with holes that
// cannot be interpolated, are rejected. target_index is left at 0 — callers
// pick the target afterwards.
inline Dataset load_csv(std::istream& in, const IngestOptions& options = {}) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError(1, "missing header row");
  }
  const auto header = detail::split_csv_line(line);
  auto find_column = [&](const std::string& name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (detail::trim(header[i]) == name) {
        return i;
      }
    }
    return std::nullopt;
  };
  const auto ts_col = find_column(options.columns.timestamp);
  const auto id_col = find_column(options.columns.sensor_id);
  const auto val_col = find_column(options.columns.value);
  const auto var_col = find_column(options.columns.variable);
  if (!ts_col) {
    throw ParseError(1, "no '" + options.columns.timestamp + "' column");
  }
  if (!id_col) {
    throw ParseError(1, "no '" + options.columns.sensor_id + "' column");
  }
  if (!val_col) {
    throw ParseError(1, "no '" + options.columns.value + "' column");
  }

  // Key is (sensor id, variable name); insertion order is kept so series
  // order in the Dataset matches first appearance in the file.
  std::vector<std::pair<std::string, Variable>> keys;
  std::map<std::pair<std::string, std::string>, std::size_t> key_index;
  std::vector<std::vector<detail::RawPoint>> points;

  enum class TsMode { kUnknown, kEpoch, kIso } ts_mode = TsMode::kUnknown;
  std::size_t line_no = 1;
  std::int64_t t_min = std::numeric_limits<std::int64_t>::max();
  std::int64_t t_max = std::numeric_limits<std::int64_t>::min();

  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) {
      continue;
    }
    const auto fields = detail::split_csv_line(line);
    const std::size_t needed =
        std::max({*ts_col, *id_col, *val_col, var_col.value_or(0)});
    if (fields.size() <= needed) {
      throw ParseError(line_no, "expected at least " +
                                    std::to_string(needed + 1) + " fields, got " +
                                    std::to_string(fields.size()));
    }

    const std::string ts_text = detail::trim(fields[*ts_col]);
    if (ts_mode == TsMode::kUnknown) {
      ts_mode = looks_like_integer(ts_text) ? TsMode::kEpoch : TsMode::kIso;
    }
    std::int64_t ts;
    if (ts_mode == TsMode::kEpoch) {
      if (!looks_like_integer(ts_text)) {
        throw ParseError(line_no, "expected epoch-seconds timestamp, got '" +
                                      ts_text + "'");
      }
      ts = std::stoll(ts_text);
    } else {
      auto parsed = parse_iso8601(ts_text);
      if (!parsed) {
        throw ParseError(line_no,
                         "unparseable ISO-8601 timestamp '" + ts_text + "'");
      }
      ts = *parsed;
    }

    auto value = detail::parse_double(fields[*val_col]);
    if (!value) {
      throw ParseError(line_no, "unparseable value '" +
                                    detail::trim(fields[*val_col]) + "'");
    }
    if (!std::isfinite(*value)) {
      throw ParseError(line_no, "non-finite value");
    }

    const std::string sensor = detail::trim(fields[*id_col]);
    if (sensor.empty()) {
      throw ParseError(line_no, "empty sensor id");
    }
    Variable variable = var_col
                            ? Variable::from_name(detail::trim(fields[*var_col]))
                            : Variable::speed();

    auto [it, inserted] = key_index.try_emplace({sensor, variable.name()},
                                                keys.size());
    if (inserted) {
      keys.emplace_back(sensor, variable);
      points.emplace_back();
    }
    const double scale =
        options.mph && variable.kind == Variable::kSpeed ? kMphToKmh : 1.0;
    points[it->second].push_back({ts, *value * scale});
    t_min = std::min(t_min, ts);
    t_max = std::max(t_max, ts);
  }

  if (keys.empty()) {
    throw ParseError(line_no, "file has no data rows");
  }

  const std::int64_t step = options.step;
  if ((t_max - t_min) % step != 0) {
    throw GridViolation(keys.front().first, t_max,
                        "span is not a multiple of the step");
  }
  const std::size_t length =
      static_cast<std::size_t>((t_max - t_min) / step) + 1;

  Dataset out;
  out.target_index = 0;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < keys.size(); ++k) {
    MeasurementSeries s;
    s.sensor_id = keys[k].first;
    s.variable = keys[k].second;
    s.start_time = t_min;
    s.step = step;
    s.values.assign(length, nan);

    for (const auto& p : points[k]) {
      if ((p.timestamp - t_min) % step != 0) {
        throw GridViolation(s.sensor_id, p.timestamp,
                            "timestamp is off the " + std::to_string(step) +
                                " s grid");
      }
      const auto idx = static_cast<std::size_t>((p.timestamp - t_min) / step);
      if (!std::isnan(s.values[idx])) {
        throw GridViolation(s.sensor_id, p.timestamp, "duplicate sample");
      }
      s.values[idx] = p.value;
    }

    // Gap policy: a single missing sample between two observations takes
    // their mean; anything wider (or touching the ends) is surfaced as an
    // error instead of silently imputed.
    std::size_t missing = 0;
    for (double v : s.values) {
      if (std::isnan(v)) {
        ++missing;
      }
    }
    const double fraction =
        static_cast<double>(missing) / static_cast<double>(length);
    if (fraction > options.max_missing) {
      throw TooSparse(s.sensor_id, fraction,
                      "above the " +
                          std::to_string(100.0 * options.max_missing) +
                          "% limit");
    }
    for (std::size_t i = 0; i < length; ++i) {
      if (!std::isnan(s.values[i])) {
        continue;
      }
      const bool isolated = i > 0 && i + 1 < length &&
                            !std::isnan(s.values[i - 1]) &&
                            !std::isnan(s.values[i + 1]);
      if (!isolated) {
        throw TooSparse(s.sensor_id, fraction,
                        "hole at " + format_iso8601(s.timestamp_at(i)) +
                            " is not an isolated single gap");
      }
      s.values[i] = 0.5 * (s.values[i - 1] + s.values[i + 1]);
    }

    out.series.push_back(std::move(s));
  }

  out.validate();
  return out;
}

inline Dataset load_csv(const std::string& path,
                        const IngestOptions& options = {}) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError(0, "cannot open '" + path + "'");
  }
  return load_csv(in, options);
}

// Writes the dataset back out in the long format load_csv reads, time-major,
// ISO-8601 timestamps, shortest-round-trip values.
inline void save_csv(std::ostream& out, const Dataset& data,
                     const ColumnMap& columns = {}) {
  out << columns.timestamp << ',' << columns.sensor_id << ','
      << columns.variable << ',' << columns.value << '\n';
  for (std::size_t t = 0; t < data.length(); ++t) {
    for (const auto& s : data.series) {
      out << format_iso8601(s.timestamp_at(t)) << ',' << s.sensor_id << ','
          << s.variable.name() << ',' << detail::format_value(s.values[t])
          << '\n';
    }
  }
}

inline void save_csv(const std::string& path, const Dataset& data,
                     const ColumnMap& columns = {}) {
  std::ofstream out(path);
  if (!out) {
    throw Error("cannot write '" + path + "'");
  }
  save_csv(out, data, columns);
}

// ---- synthetic datasets -----------------------------------------------

// One generated stream: a smooth daily-profile signal, white noise, or a
// delayed copy of another stream with additive noise.
struct SyntheticSeriesSpec {
  enum Kind { kSmooth, kWhiteNoise, kCopy };

  std::string sensor_id;
  Kind kind = kSmooth;
  double base = 60.0;       // km/h level
  double amplitude = 20.0;  // swing of the profile / noise scale
  double roughness = 0.1;   // wander strength for smooth signals

  std::string copy_of;      // source sensor id (kind == kCopy)
  int delay_steps = 0;      // shift applied to the source
  double noise_level = 0.0; // additive noise sd as a fraction of source sd
};

struct SyntheticSpec {
  std::size_t length = 288;
  std::int64_t start_time = make_utc(2016, 5, 10);
  std::int64_t step = 300;
  std::vector<SyntheticSeriesSpec> series;
  std::string target;  // sensor id; empty means the first series
};

struct DependencyEdge {
  std::string source;
  std::string target;
  int delay_steps = 0;
  double noise_level = 0.0;
};

struct SyntheticOutput {
  Dataset dataset;
  std::vector<DependencyEdge> dependencies;  // ground truth for copies
};

namespace detail {

inline double population_std(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) {
    mean += x;
  }
  mean /= static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) {
    var += (x - mean) * (x - mean);
  }
  return std::sqrt(var / static_cast<double>(v.size()));
}

}  // namespace detail

// Deterministic function of (spec, seed). Copy sources are resolved in
// dependency order; any cycle among copy edges is rejected.
inline SyntheticOutput generate_synthetic(const SyntheticSpec& spec,
                                          std::uint32_t seed) {
  if (spec.series.empty()) {
    throw InvalidSpec("synthetic spec has no series");
  }
  if (spec.length < 2) {
    throw InvalidSpec("synthetic spec length must be >= 2");
  }
  std::map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < spec.series.size(); ++i) {
    if (spec.series[i].sensor_id.empty()) {
      throw InvalidSpec("series " + std::to_string(i) + " has an empty id");
    }
    if (!by_id.emplace(spec.series[i].sensor_id, i).second) {
      throw InvalidSpec("duplicate sensor id '" + spec.series[i].sensor_id +
                        "'");
    }
  }

  // Resolve copy edges and order series so sources come first.
  std::vector<std::optional<std::size_t>> source(spec.series.size());
  for (std::size_t i = 0; i < spec.series.size(); ++i) {
    const auto& s = spec.series[i];
    if (s.kind != SyntheticSeriesSpec::kCopy) {
      continue;
    }
    auto it = by_id.find(s.copy_of);
    if (it == by_id.end()) {
      throw InvalidSpec("series '" + s.sensor_id + "' copies unknown id '" +
                        s.copy_of + "'");
    }
    source[i] = it->second;
  }
  std::vector<std::size_t> order;
  std::vector<int> state(spec.series.size(), 0);  // 0 new, 1 visiting, 2 done
  auto visit = [&](auto&& self, std::size_t i) -> void {
    if (state[i] == 2) {
      return;
    }
    if (state[i] == 1) {
      throw InvalidSpec("cyclic copy dependency involving '" +
                        spec.series[i].sensor_id + "'");
    }
    state[i] = 1;
    if (source[i]) {
      self(self, *source[i]);
    }
    state[i] = 2;
    order.push_back(i);
  };
  for (std::size_t i = 0; i < spec.series.size(); ++i) {
    visit(visit, i);
  }

  // One sub-seed per series, drawn up front so generation order does not
  // depend on the dependency order.
  std::mt19937 master(seed);
  std::vector<std::uint32_t> sub_seeds(spec.series.size());
  for (auto& s : sub_seeds) {
    s = master();
  }

  const std::size_t len = spec.length;
  const double samples_per_day =
      86400.0 / static_cast<double>(spec.step > 0 ? spec.step : 300);
  std::vector<std::vector<double>> values(spec.series.size());

  for (std::size_t i : order) {
    const auto& s = spec.series[i];
    std::mt19937 rng(sub_seeds[i]);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    auto& v = values[i];
    v.resize(len);

    switch (s.kind) {
      case SyntheticSeriesSpec::kSmooth: {
        const double phi1 = phase(rng);
        const double phi2 = phase(rng);
        double wander = 0.0;
        for (std::size_t t = 0; t < len; ++t) {
          wander = 0.95 * wander + gauss(rng) * s.roughness * s.amplitude;
          const double day = static_cast<double>(t) / samples_per_day;
          double x = s.base +
                     s.amplitude *
                         (0.55 * std::sin(2.0 * std::numbers::pi * day + phi1) +
                          0.30 * std::sin(6.0 * std::numbers::pi * day + phi2)) +
                     wander;
          v[t] = std::max(x, 1.0);
        }
        break;
      }
      case SyntheticSeriesSpec::kWhiteNoise: {
        for (std::size_t t = 0; t < len; ++t) {
          v[t] = std::max(s.base + s.amplitude * gauss(rng), 0.0);
        }
        break;
      }
      case SyntheticSeriesSpec::kCopy: {
        const auto& src = values[*source[i]];
        const double sd = s.noise_level > 0.0
                              ? s.noise_level * detail::population_std(src)
                              : 0.0;
        for (std::size_t t = 0; t < len; ++t) {
          std::ptrdiff_t j = static_cast<std::ptrdiff_t>(t) - s.delay_steps;
          j = std::clamp<std::ptrdiff_t>(j, 0,
                                         static_cast<std::ptrdiff_t>(len) - 1);
          v[t] = src[static_cast<std::size_t>(j)] +
                 (sd > 0.0 ? sd * gauss(rng) : 0.0);
        }
        break;
      }
    }
  }

  SyntheticOutput out;
  out.dataset.target_index = 0;
  for (std::size_t i = 0; i < spec.series.size(); ++i) {
    MeasurementSeries m;
    m.sensor_id = spec.series[i].sensor_id;
    m.variable = Variable::speed();
    m.start_time = spec.start_time;
    m.step = spec.step;
    m.values = std::move(values[i]);
    out.dataset.series.push_back(std::move(m));
    if (spec.series[i].kind == SyntheticSeriesSpec::kCopy) {
      out.dependencies.push_back({spec.series[i].copy_of,
                                  spec.series[i].sensor_id,
                                  spec.series[i].delay_steps,
                                  spec.series[i].noise_level});
    }
  }
  if (!spec.target.empty()) {
    auto it = by_id.find(spec.target);
    if (it == by_id.end()) {
      throw InvalidSpec("target '" + spec.target + "' is not a series id");
    }
    out.dataset.target_index = it->second;
  }
  out.dataset.validate();
  return out;
}

// ---- synthetic spec JSON ------------------------------------------------

// {
//   "length": 288, "step_seconds": 300, "start_time": "2016-05-10T00:00:00",
//   "target": "s1",
//   "series": [
//     {"id": "s0", "kind": "smooth", "base": 65, "amplitude": 20},
//     {"id": "s1", "copy_of": "s0", "delay": 2, "noise": 0.05},
//     {"id": "s2", "kind": "noise", "base": 60, "amplitude": 10}
//   ]
// }
inline SyntheticSpec parse_synthetic_spec_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidSpec(std::string("bad spec JSON: ") + e.what());
  }
  try {
    SyntheticSpec spec;
    spec.length = j.value("length", spec.length);
    spec.step = j.value("step_seconds", spec.step);
    if (j.contains("start_time")) {
      const auto& st = j.at("start_time");
      if (st.is_number_integer()) {
        spec.start_time = st.get<std::int64_t>();
      } else {
        auto parsed = parse_iso8601(st.get<std::string>());
        if (!parsed) {
          throw InvalidSpec("bad start_time '" + st.get<std::string>() + "'");
        }
        spec.start_time = *parsed;
      }
    }
    spec.target = j.value("target", std::string{});
    if (!j.contains("series") || !j.at("series").is_array()) {
      throw InvalidSpec("spec needs a 'series' array");
    }
    for (const auto& e : j.at("series")) {
      SyntheticSeriesSpec s;
      s.sensor_id = e.value("id", std::string{});
      s.base = e.value("base", s.base);
      s.amplitude = e.value("amplitude", s.amplitude);
      s.roughness = e.value("roughness", s.roughness);
      if (e.contains("copy_of")) {
        s.kind = SyntheticSeriesSpec::kCopy;
        s.copy_of = e.at("copy_of").get<std::string>();
        s.delay_steps = e.value("delay", 0);
        s.noise_level = e.value("noise", 0.0);
      } else {
        const std::string kind = e.value("kind", std::string{"smooth"});
        if (kind == "smooth") {
          s.kind = SyntheticSeriesSpec::kSmooth;
        } else if (kind == "noise") {
          s.kind = SyntheticSeriesSpec::kWhiteNoise;
        } else {
          throw InvalidSpec("unknown series kind '" + kind + "'");
        }
      }
      spec.series.push_back(std::move(s));
    }
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidSpec(std::string("bad spec JSON: ") + e.what());
  }
}

inline std::string dependencies_json(const SyntheticOutput& output) {
  nlohmann::json j;
  j["series"] = nlohmann::json::array();
  for (const auto& s : output.dataset.series) {
    j["series"].push_back(s.sensor_id);
  }
  j["target"] = output.dataset.series[output.dataset.target_index].sensor_id;
  j["dependencies"] = nlohmann::json::array();
  for (const auto& d : output.dependencies) {
    j["dependencies"].push_back({{"source", d.source},
                                 {"target", d.target},
                                 {"delay_steps", d.delay_steps},
                                 {"noise_level", d.noise_level}});
  }
  return j.dump(2) + "\n";
}

}  // namespace speedcast
