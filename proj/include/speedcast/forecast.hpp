#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <deque>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "speedcast/errors.hpp"
#include "speedcast/normalizer.hpp"
#include "speedcast/regression.hpp"
#include "speedcast/series.hpp"
#include "speedcast/solvers.hpp"
#include "speedcast/time.hpp"

namespace speedcast {

enum class Method {
  kAr,          // least squares on the target's own lags only
  kBlockSparse  // block-sparse recovery over every series' lags
};

inline const char* method_name(Method m) {
  return m == Method::kAr ? "ar" : "blocksparse";
}

// Settings for one forecast: horizon H in 5-minute steps (default 6 = 30
// minutes), M training rows (default 108 = 9 hours), per-series AR orders
// (empty = uniform default_order), and the solver knobs.
struct ForecastConfig {
  int horizon_steps = 6;
  int training_rows = 108;
  std::vector<int> orders;  // per-series lag counts; empty -> uniform
  int default_order = 12;   // one hour of 5-minute lags
  int n_max = 0;            // 0 -> max of orders
  Method method = Method::kBlockSparse;
  SolverConfig solver;
  bool refit_normalizer_each_window = false;

  BlockLayout resolve_layout(std::size_t series_count) const {
    std::vector<int> n = orders;
    if (n.empty()) {
      n.assign(series_count, default_order);
    } else if (n.size() != series_count) {
      throw InvalidOrders("got " + std::to_string(n.size()) +
                          " orders for " + std::to_string(series_count) +
                          " series");
    }
    return n_max > 0 ? BlockLayout::from_orders(std::move(n), n_max)
                     : BlockLayout::from_orders(std::move(n));
  }
};

struct ForecastResult {
  std::vector<double> predictions_kmh;         // denormalized, clamped >= 0
  std::vector<double> predictions_normalized;  // raw recursion values
  std::vector<int> active_blocks;              // support used for this window
  std::vector<std::string> active_sensor_ids;
  Eigen::VectorXd coefficients;
  BlockLayout layout;
};

namespace detail {

// Applies the fitted model to one lag-buffer state: Eq-of-motion of the
// multivariate AR model, sum over series p and lags i of
// buffer_p[end - i] * x_p[i].
inline double predict_one(const std::vector<std::deque<double>>& buffers,
                          const CoefficientVector& coef) {
  double y = 0.0;
  for (int p = 0; p < coef.layout.block_count(); ++p) {
    const auto& buf = buffers[static_cast<std::size_t>(p)];
    const int off = coef.layout.block_begin(p);
    for (int c = 0; c < coef.layout.block_size(p); ++c) {
      // column c is lag c+1
      y += coef.x(off + c) * buf[buf.size() - 1 - static_cast<std::size_t>(c)];
    }
  }
  return y;
}

}  // namespace detail

// Fits on the window of n_max + M samples ending at `at` (exclusive) and
// rolls the model forward `horizon_steps` predictions. Predicted target
// values feed the later steps; non-target series hold their last observed
// value for future lags. Pass `fixed` to reuse a normalizer fitted earlier
// instead of refitting on this window.
inline ForecastResult recursive_forecast(
    const Dataset& dataset, std::size_t at, const ForecastConfig& config,
    const std::optional<Normalizer>& fixed = std::nullopt) {
  const bool ar_only = config.method == Method::kAr;
  const Dataset& data = dataset;  // full view; AR reduces below

  BlockLayout full_layout = config.resolve_layout(data.series_count());
  const std::size_t need = static_cast<std::size_t>(full_layout.n_max) +
                           static_cast<std::size_t>(config.training_rows);
  if (at < need || at > data.length()) {
    throw InsufficientHistory("forecast at sample " + std::to_string(at) +
                              " needs " + std::to_string(need) +
                              " preceding samples");
  }
  if (config.horizon_steps < 1) {
    throw InvalidConfig("horizon must be >= 1");
  }

  Dataset window = slice(data, {at - need, at});
  Normalizer norm =
      fixed ? *fixed : fit_normalizer(window, {0, window.length()});
  Dataset normalized = normalize(norm, window);

  // The plain AR baseline sees only the target series.
  BlockLayout layout = full_layout;
  std::size_t target = normalized.target_index;
  std::vector<std::size_t> model_series;  // indices into the full dataset
  if (ar_only) {
    normalized = target_only(normalized);
    layout = BlockLayout::from_orders(
        {full_layout.orders[target]},
        full_layout.n_max);  // keep row anchoring identical to the full model
    model_series = {target};
    target = 0;
  } else {
    model_series.resize(data.series_count());
    for (std::size_t i = 0; i < model_series.size(); ++i) {
      model_series[i] = i;
    }
  }

  RegressionProblem problem =
      build_block_problem(normalized, layout, config.training_rows);
  CoefficientVector coef = ar_only
                               ? solve_least_squares(problem)
                               : solve_block_sparse(problem, config.solver);

  // Lag buffers: the last n_max normalized samples of every modeled series.
  std::vector<std::deque<double>> buffers(normalized.series_count());
  for (std::size_t p = 0; p < normalized.series_count(); ++p) {
    const auto& values = normalized.series[p].values;
    buffers[p].assign(values.end() - layout.n_max, values.end());
  }

  ForecastResult out;
  out.layout = layout;
  out.coefficients = coef.x;
  out.active_blocks = coef.active_blocks;
  for (int blk : coef.active_blocks) {
    out.active_sensor_ids.push_back(
        data.series[model_series[static_cast<std::size_t>(blk)]].sensor_id);
  }

  for (int h = 0; h < config.horizon_steps; ++h) {
    const double y = detail::predict_one(buffers, coef);
    out.predictions_normalized.push_back(y);
    for (std::size_t p = 0; p < buffers.size(); ++p) {
      // Recurse the prediction into the target's lags; every other series
      // is held at its last observed value across the horizon.
      buffers[p].push_back(p == target ? y : buffers[p].back());
      buffers[p].pop_front();
    }
  }

  const std::size_t target_full = dataset.target_index;
  for (double y : out.predictions_normalized) {
    out.predictions_kmh.push_back(
        std::max(denormalize(norm, ar_only ? target_full : target, y), 0.0));
  }
  return out;
}

// ---- rolling evaluation ---------------------------------------------------

struct TraceRow {
  std::size_t sample_index = 0;
  std::int64_t timestamp = 0;
  double actual_kmh = 0.0;
  double predicted_kmh = 0.0;
  int horizon_step = 1;       // 1-based step within the stride
  std::size_t stride = 0;     // which refit produced this row
};

struct StrideRecord {
  std::size_t at = 0;  // first predicted sample index
  std::vector<int> active_blocks;
  std::vector<std::string> active_sensor_ids;
  Eigen::VectorXd coefficients;
};

struct EvaluationTrace {
  std::vector<TraceRow> rows;
  std::vector<StrideRecord> strides;

  std::vector<double> actuals() const {
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& r : rows) {
      v.push_back(r.actual_kmh);
    }
    return v;
  }
  std::vector<double> predictions() const {
    std::vector<double> v;
    v.reserve(rows.size());
    for (const auto& r : rows) {
      v.push_back(r.predicted_kmh);
    }
    return v;
  }
};

// Steps through eval_range in strides of the horizon: each stride refits the
// coefficients on the most recent M rows (the training window slides forward
// absorbing new measurements), forecasts H steps, and records predictions
// against actuals. A trailing partial window is evaluated with a shortened
// horizon. No state other than the data window crosses strides; the
// normalizer is fitted once on the window ending at eval_range.begin unless
// refit_normalizer_each_window is set.
inline EvaluationTrace rolling_evaluate(const Dataset& dataset,
                                        IndexRange eval_range,
                                        const ForecastConfig& config) {
  dataset.validate();
  if (eval_range.empty() || eval_range.end > dataset.length()) {
    throw InsufficientHistory("evaluation range is empty or out of bounds");
  }
  BlockLayout layout = config.resolve_layout(dataset.series_count());
  const std::size_t need = static_cast<std::size_t>(layout.n_max) +
                           static_cast<std::size_t>(config.training_rows);
  if (eval_range.begin < need) {
    throw InsufficientHistory(
        "evaluation range starts at sample " +
        std::to_string(eval_range.begin) + " but fitting needs " +
        std::to_string(need) + " preceding samples");
  }

  std::optional<Normalizer> fixed;
  if (!config.refit_normalizer_each_window) {
    fixed = fit_normalizer(dataset, {eval_range.begin - need,
                                     eval_range.begin});
  }

  EvaluationTrace trace;
  const auto& target = dataset.target();
  std::size_t at = eval_range.begin;
  while (at < eval_range.end) {
    const int h = static_cast<int>(std::min<std::size_t>(
        static_cast<std::size_t>(config.horizon_steps), eval_range.end - at));
    ForecastConfig stride_config = config;
    stride_config.horizon_steps = h;
    ForecastResult result =
        recursive_forecast(dataset, at, stride_config, fixed);

    for (int s = 0; s < h; ++s) {
      const std::size_t idx = at + static_cast<std::size_t>(s);
      trace.rows.push_back({idx, target.timestamp_at(idx), target.values[idx],
                            result.predictions_kmh[static_cast<std::size_t>(s)],
                            s + 1, trace.strides.size()});
    }
    trace.strides.push_back({at, result.active_blocks,
                             result.active_sensor_ids,
                             result.coefficients});
    at += static_cast<std::size_t>(h);
  }
  return trace;
}

// CSV with one row per prediction: timestamp, actual, predicted, step within
// the horizon, and the stride's support as semicolon-separated sensor ids.
inline void write_trace_csv(std::ostream& out, const EvaluationTrace& trace) {
  out << "timestamp,actual_kmh,predicted_kmh,horizon_step,active_blocks\n";
  char buf[64];
  auto fmt = [&buf](double v) {
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
  };
  for (const auto& row : trace.rows) {
    out << format_iso8601(row.timestamp) << ',' << fmt(row.actual_kmh) << ','
        << fmt(row.predicted_kmh) << ',' << row.horizon_step << ',';
    const auto& ids = trace.strides[row.stride].active_sensor_ids;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (i) {
        out << ';';
      }
      out << ids[i];
    }
    out << '\n';
  }
}

}  // namespace speedcast
