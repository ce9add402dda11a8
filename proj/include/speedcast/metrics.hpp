#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "speedcast/errors.hpp"

namespace speedcast {

// Forecast error summary. NRMSE is RMSE normalized by the observed range of
// the actuals (max - min) and expressed in percent; it is absent when the
// actuals are constant, since the range normalization is then undefined.
struct ErrorReport {
  double mae = 0.0;             // km/h
  double rmse = 0.0;            // km/h
  std::optional<double> nrmse;  // percent
  std::size_t n_points = 0;
};

inline ErrorReport compute_errors(std::span<const double> actuals,
                                  std::span<const double> predictions) {
  if (actuals.size() != predictions.size()) {
    throw LengthMismatch("actuals have " + std::to_string(actuals.size()) +
                         " points, predictions " +
                         std::to_string(predictions.size()));
  }
  if (actuals.empty()) {
    throw LengthMismatch("error metrics need at least one point");
  }
  double abs_sum = 0.0;
  double sq_sum = 0.0;
  double lo = actuals[0];
  double hi = actuals[0];
  for (std::size_t i = 0; i < actuals.size(); ++i) {
    const double d = actuals[i] - predictions[i];
    abs_sum += std::abs(d);
    sq_sum += d * d;
    lo = std::min(lo, actuals[i]);
    hi = std::max(hi, actuals[i]);
  }
  ErrorReport out;
  out.n_points = actuals.size();
  out.mae = abs_sum / static_cast<double>(actuals.size());
  out.rmse = std::sqrt(sq_sum / static_cast<double>(actuals.size()));
  if (hi > lo) {
    out.nrmse = 100.0 * out.rmse / (hi - lo);
  }
  return out;
}

inline ErrorReport compute_errors(const std::vector<double>& actuals,
                                  const std::vector<double>& predictions) {
  return compute_errors(std::span<const double>(actuals),
                        std::span<const double>(predictions));
}

// ---- reporting ----------------------------------------------------------

struct MethodReport {
  std::string method;
  ErrorReport errors;
};

namespace detail {

inline std::string round_sig(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
  return buf;
}

// Shortest digit string that parses back to exactly v.
inline std::string exact_digits(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace detail

// One row per method, columns MAE / RMSE / NRMSE.
inline std::string report_table_markdown(
    const std::vector<MethodReport>& rows) {
  std::ostringstream out;
  out << "| Method | MAE (km/h) | RMSE (km/h) | NRMSE (%) |\n";
  out << "|---|---|---|---|\n";
  for (const auto& row : rows) {
    out << "| " << row.method << " | " << detail::round_sig(row.errors.mae, 6)
        << " | " << detail::round_sig(row.errors.rmse, 6) << " | "
        << (row.errors.nrmse ? detail::round_sig(*row.errors.nrmse, 6) : "n/a")
        << " |\n";
  }
  return out.str();
}

inline std::string report_table_csv(const std::vector<MethodReport>& rows) {
  std::ostringstream out;
  out << "method,mae_kmh,rmse_kmh,nrmse_percent,n_points\n";
  for (const auto& row : rows) {
    out << row.method << ',' << detail::exact_digits(row.errors.mae) << ','
        << detail::exact_digits(row.errors.rmse) << ','
        << (row.errors.nrmse ? detail::exact_digits(*row.errors.nrmse) : "")
        << ',' << row.errors.n_points << '\n';
  }
  return out.str();
}

}  // namespace speedcast
