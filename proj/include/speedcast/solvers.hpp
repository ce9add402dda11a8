#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "speedcast/errors.hpp"
#include "speedcast/regression.hpp"

namespace speedcast {

// Knobs for block-sparse recovery. The objective is min ||b - A x||_2 with x
// supported on few whole blocks; the greedy pursuit below realizes it.
struct SolverConfig {
  // Support budget K. 0 means auto: max(1, ceil(0.2 * block_count)).
  int max_active_blocks = 0;
  // Relative stopping rule: done when ||b - A x||_2 <= tol * ||b||_2.
  double residual_tolerance = 1e-6;
  // Greedy iterations; 0 means same as K (one block per iteration).
  int max_iterations = 0;
  // Blocks barred from selection (e.g. the target's own lags).
  std::vector<int> excluded_blocks;
};

inline int resolved_block_budget(const SolverConfig& config, int block_count) {
  if (config.max_active_blocks == 0) {
    return std::max(1, static_cast<int>(std::ceil(0.2 * block_count)));
  }
  return config.max_active_blocks;
}

// Coefficient vector with its block support. Entries outside active_blocks
// are exactly zero.
struct CoefficientVector {
  Eigen::VectorXd x;
  BlockLayout layout;
  std::vector<int> active_blocks;         // sorted ascending
  std::vector<double> residual_history;   // ||r||_2 after each pursuit step
};

namespace detail {

inline void require_finite(const Eigen::VectorXd& x, const char* where) {
  if (!x.allFinite()) {
    throw NumericalFailure(std::string(where) +
                           " produced a non-finite coefficient");
  }
}

// Minimum-norm least squares via a rank-revealing factorization; Hankel
// blocks from smooth speed data are near-collinear, so rank deficiency is
// the normal case, not the exception.
inline Eigen::VectorXd min_norm_least_squares(const Eigen::MatrixXd& a,
                                              const Eigen::VectorXd& b,
                                              const char* where) {
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
  Eigen::VectorXd x = cod.solve(b);
  require_finite(x, where);
  return x;
}

}  // namespace detail

// Computes ||b - A x||_2 and records e = b - A x on the problem.
inline double residual_norm(RegressionProblem& problem,
                            const Eigen::VectorXd& x) {
  if (x.size() != problem.a.cols()) {
    throw DimensionMismatch("coefficient vector has " +
                            std::to_string(x.size()) + " entries, matrix has " +
                            std::to_string(problem.a.cols()) + " columns");
  }
  Eigen::VectorXd e = problem.b - problem.a * x;
  double norm = e.norm();
  problem.residual = std::move(e);
  return norm;
}

// Dense minimum-norm least squares; the AR / M-AR baseline. Marks every
// block active and stores the residual on the problem.
inline CoefficientVector solve_least_squares(RegressionProblem& problem) {
  if (problem.rows() < 1 || problem.cols() < 1) {
    throw DimensionMismatch("empty regression problem");
  }
  CoefficientVector out;
  out.layout = problem.layout;
  out.x = detail::min_norm_least_squares(problem.a, problem.b,
                                         "least squares");
  out.active_blocks.resize(static_cast<std::size_t>(out.layout.block_count()));
  std::iota(out.active_blocks.begin(), out.active_blocks.end(), 0);
  out.residual_history.push_back(residual_norm(problem, out.x));
  return out;
}

// Greedy block orthogonal matching pursuit. Each iteration scores every
// unselected block by the l2 norm of its columns' sample correlation with
// the current residual (columns and residual centered and scaled, so raw
// speed levels and per-series scaling cannot swamp the comparison), admits
// the best one (ties break to the lowest block index), re-fits least squares
// on all admitted columns, and updates the residual. Stops at K blocks or
// when the relative residual tolerance is met. Zero-variance columns carry
// no correlation signal and score zero.
inline CoefficientVector solve_block_sparse(RegressionProblem& problem,
                                            const SolverConfig& config) {
  const int block_count = problem.layout.block_count();
  if (config.max_active_blocks > block_count) {
    throw InvalidConfig("K = " + std::to_string(config.max_active_blocks) +
                        " exceeds block count " + std::to_string(block_count));
  }
  if (config.residual_tolerance <= 0.0) {
    throw InvalidConfig("residual tolerance must be positive");
  }
  for (int blocked : config.excluded_blocks) {
    if (blocked < 0 || blocked >= block_count) {
      throw InvalidConfig("excluded block " + std::to_string(blocked) +
                          " out of range");
    }
  }

  const int budget = resolved_block_budget(config, block_count);
  const int max_iterations =
      config.max_iterations > 0 ? config.max_iterations : budget;
  const double b_norm = problem.b.norm();
  const double stop_norm = config.residual_tolerance * b_norm;

  CoefficientVector out;
  out.layout = problem.layout;
  out.x = Eigen::VectorXd::Zero(problem.cols());

  std::vector<bool> selectable(static_cast<std::size_t>(block_count), true);
  for (int blocked : config.excluded_blocks) {
    selectable[static_cast<std::size_t>(blocked)] = false;
  }

  Eigen::VectorXd residual = problem.b;
  out.residual_history.push_back(residual.norm());

  // Column statistics for the correlation scores, fixed across iterations.
  const Eigen::VectorXd col_mean = problem.a.colwise().mean();
  Eigen::VectorXd col_spread(problem.cols());
  for (Eigen::Index c = 0; c < problem.cols(); ++c) {
    col_spread(c) = (problem.a.col(c).array() - col_mean(c)).matrix().norm();
  }

  std::vector<int> active;
  int active_cols = 0;
  for (int iter = 0; iter < max_iterations &&
                     static_cast<int>(active.size()) < budget;
       ++iter) {
    if (residual.norm() <= stop_norm) {
      break;
    }

    // Per-column correlation with the centered residual. a^T (r - mean(r))
    // equals the centered cross product because the centered residual sums
    // to zero.
    const Eigen::VectorXd centered =
        residual.array() - residual.mean();
    const double residual_spread = centered.norm();
    Eigen::VectorXd correlation = Eigen::VectorXd::Zero(problem.cols());
    if (residual_spread > 0.0) {
      correlation = problem.a.transpose() * centered;
      for (Eigen::Index c = 0; c < problem.cols(); ++c) {
        const double denom = col_spread(c) * residual_spread;
        correlation(c) = denom > 0.0 ? correlation(c) / denom : 0.0;
      }
    }

    // Strict > keeps the lowest-index winner on ties.
    int best = -1;
    double best_score = 0.0;
    for (int j = 0; j < block_count; ++j) {
      if (!selectable[static_cast<std::size_t>(j)]) {
        continue;
      }
      const double score =
          correlation
              .segment(problem.layout.block_begin(j),
                       problem.layout.block_size(j))
              .norm();
      if (best < 0 || score > best_score) {
        best = j;
        best_score = score;
      }
    }
    if (best < 0 || best_score <= 0.0) {
      break;  // nothing left that correlates with the residual
    }

    selectable[static_cast<std::size_t>(best)] = false;
    active.insert(std::upper_bound(active.begin(), active.end(), best), best);
    active_cols += problem.layout.block_size(best);

    // Re-fit on all selected blocks' columns.
    Eigen::MatrixXd sub(problem.rows(), active_cols);
    int col = 0;
    for (int j : active) {
      sub.middleCols(col, problem.layout.block_size(j)) = problem.a.middleCols(
          problem.layout.block_begin(j), problem.layout.block_size(j));
      col += problem.layout.block_size(j);
    }
    Eigen::VectorXd sub_x =
        detail::min_norm_least_squares(sub, problem.b, "block pursuit");

    out.x.setZero();
    col = 0;
    for (int j : active) {
      out.x.segment(problem.layout.block_begin(j),
                    problem.layout.block_size(j)) =
          sub_x.segment(col, problem.layout.block_size(j));
      col += problem.layout.block_size(j);
    }
    residual = problem.b - sub * sub_x;
    out.residual_history.push_back(residual.norm());
  }

  out.active_blocks = std::move(active);
  problem.residual = std::move(residual);
  return out;
}

// ---- coefficient dump ---------------------------------------------------

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace detail

// CSV table of every coefficient: block index, sensor id, lag, value.
inline std::string coefficient_table_csv(
    const CoefficientVector& coef, const std::vector<std::string>& sensor_ids) {
  if (sensor_ids.size() != coef.layout.orders.size()) {
    throw DimensionMismatch("sensor id list does not match layout");
  }
  std::ostringstream out;
  out << "block,sensor_id,lag,coefficient\n";
  for (int i = 0; i < coef.layout.block_count(); ++i) {
    for (int c = 0; c < coef.layout.block_size(i); ++c) {
      out << i << ',' << sensor_ids[static_cast<std::size_t>(i)] << ','
          << (c + 1) << ','
          << detail::format_double(coef.x(coef.layout.block_begin(i) + c))
          << '\n';
    }
  }
  return out.str();
}

// Aligned text rendering of the same table for terminal inspection.
inline std::string coefficient_table_text(
    const CoefficientVector& coef, const std::vector<std::string>& sensor_ids) {
  if (sensor_ids.size() != coef.layout.orders.size()) {
    throw DimensionMismatch("sensor id list does not match layout");
  }
  std::ostringstream out;
  out << "block  sensor_id        lag  coefficient\n";
  for (int i = 0; i < coef.layout.block_count(); ++i) {
    for (int c = 0; c < coef.layout.block_size(i); ++c) {
      char line[128];
      std::snprintf(line, sizeof(line), "%5d  %-15s %4d  % .10g\n", i,
                    sensor_ids[static_cast<std::size_t>(i)].c_str(), c + 1,
                    coef.x(coef.layout.block_begin(i) + c));
      out << line;
    }
  }
  return out.str();
}

}  // namespace speedcast
