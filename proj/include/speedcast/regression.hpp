#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>

#include "speedcast/errors.hpp"
#include "speedcast/layout.hpp"
#include "speedcast/series.hpp"

namespace speedcast {

// Stacked linear system b = A x + e over a normalized dataset.
//
// Index map (0-based everywhere): row r targets sample n_max + r, and block
// i of row r holds series-i samples at indices n_max-1+r down to
// n_max-n_i+r, newest lag first. Each block is therefore Hankel-structured:
// consecutive rows are one-step shifts with one fresh newest sample.
struct RegressionProblem {
  Eigen::VectorXd b;  // length M
  Eigen::MatrixXd a;  // M x N
  BlockLayout layout;
  std::optional<Eigen::VectorXd> residual;  // e = b - A x, set after fitting

  Eigen::Index rows() const { return b.size(); }
  Eigen::Index cols() const { return a.cols(); }
};

// Builds the system from the first n_max + M samples of `data`, which must
// already be normalized. Pass a window slice to anchor elsewhere.
inline RegressionProblem build_block_problem(const Dataset& data,
                                             const BlockLayout& layout,
                                             int training_rows) {
  const std::size_t series_count = data.series_count();
  if (layout.orders.size() != series_count) {
    throw InvalidOrders("layout covers " +
                        std::to_string(layout.orders.size()) +
                        " series, dataset has " + std::to_string(series_count));
  }
  if (training_rows < 1) {
    throw InsufficientData("training_rows must be >= 1");
  }
  const std::size_t needed =
      static_cast<std::size_t>(layout.n_max) +
      static_cast<std::size_t>(training_rows);
  if (data.length() < needed) {
    throw InsufficientData("dataset length " + std::to_string(data.length()) +
                           " is below n_max + M = " + std::to_string(needed));
  }

  RegressionProblem out;
  out.layout = layout;
  out.b.resize(training_rows);
  out.a.resize(training_rows, layout.total_cols);

  const auto& target = data.target().values;
  for (int r = 0; r < training_rows; ++r) {
    out.b(r) = target[static_cast<std::size_t>(layout.n_max + r)];
  }
  for (std::size_t i = 0; i < series_count; ++i) {
    const auto& values = data.series[i].values;
    const int off = layout.block_begin(static_cast<int>(i));
    const int n_i = layout.block_size(static_cast<int>(i));
    for (int r = 0; r < training_rows; ++r) {
      for (int c = 0; c < n_i; ++c) {
        out.a(r, off + c) =
            values[static_cast<std::size_t>(layout.n_max - 1 + r - c)];
      }
    }
  }
  return out;
}

inline RegressionProblem build_block_problem(const Dataset& data,
                                             std::vector<int> orders,
                                             int n_max, int training_rows) {
  return build_block_problem(
      data, BlockLayout::from_orders(std::move(orders), n_max), training_rows);
}

// Uniform order n for every series; N = n * P.
inline RegressionProblem build_uniform_problem(const Dataset& data, int order,
                                               int training_rows) {
  return build_block_problem(
      data, BlockLayout::uniform(data.series_count(), order), training_rows);
}

}  // namespace speedcast
