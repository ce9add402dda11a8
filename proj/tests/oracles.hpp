#pragma once

// Reference implementations kept deliberately separate from the library:
// plain nested-vector linear algebra, direct definition-following loops, and
// exhaustive search. Tests compare the fast paths against these.

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;  // row major
using Vector = std::vector<double>;

struct Problem {
  Vector b;
  Matrix a;
};

// Builds the stacked system row by row straight from the model definition:
// row r predicts the target at time t = n_max + r as a sum over every series
// p and lag i of series_p[t - i] * x_p[i].
inline Problem build_reference(const std::vector<Vector>& series,
                               std::size_t target,
                               const std::vector<int>& orders, int n_max,
                               int rows) {
  int total_cols = 0;
  for (int n : orders) {
    total_cols += n;
  }
  Problem out;
  out.b.resize(static_cast<std::size_t>(rows));
  out.a.assign(static_cast<std::size_t>(rows),
               Vector(static_cast<std::size_t>(total_cols), 0.0));
  for (int r = 0; r < rows; ++r) {
    const int t = n_max + r;
    out.b[static_cast<std::size_t>(r)] =
        series[target][static_cast<std::size_t>(t)];
    int col = 0;
    for (std::size_t p = 0; p < series.size(); ++p) {
      for (int i = 1; i <= orders[p]; ++i) {
        out.a[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] =
            series[p][static_cast<std::size_t>(t - i)];
        ++col;
      }
    }
  }
  return out;
}

inline Vector matvec(const Matrix& a, const Vector& x) {
  Vector y(a.size(), 0.0);
  for (std::size_t r = 0; r < a.size(); ++r) {
    for (std::size_t c = 0; c < x.size(); ++c) {
      y[r] += a[r][c] * x[c];
    }
  }
  return y;
}

inline double residual_norm(const Matrix& a, const Vector& x,
                            const Vector& b) {
  const Vector y = matvec(a, x);
  double s = 0.0;
  for (std::size_t r = 0; r < b.size(); ++r) {
    const double d = b[r] - y[r];
    s += d * d;
  }
  return std::sqrt(s);
}

// Solves the square system m x = v by Gaussian elimination with partial
// pivoting. Throws when the pivot collapses.
inline Vector gaussian_solve(Matrix m, Vector v) {
  const std::size_t n = v.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t r = k + 1; r < n; ++r) {
      if (std::fabs(m[r][k]) > std::fabs(m[pivot][k])) {
        pivot = r;
      }
    }
    if (std::fabs(m[pivot][k]) < 1e-13) {
      throw std::runtime_error("oracle: singular normal equations");
    }
    std::swap(m[k], m[pivot]);
    std::swap(v[k], v[pivot]);
    for (std::size_t r = k + 1; r < n; ++r) {
      const double f = m[r][k] / m[k][k];
      for (std::size_t c = k; c < n; ++c) {
        m[r][c] -= f * m[k][c];
      }
      v[r] -= f * v[k];
    }
  }
  Vector x(n, 0.0);
  for (std::size_t k = n; k-- > 0;) {
    double s = v[k];
    for (std::size_t c = k + 1; c < n; ++c) {
      s -= m[k][c] * x[c];
    }
    x[k] = s / m[k][k];
  }
  return x;
}

// Least squares through the normal equations a^T a x = a^T b.
inline Vector solve_normal_equations(const Matrix& a, const Vector& b) {
  const std::size_t rows = a.size();
  const std::size_t cols = a.empty() ? 0 : a[0].size();
  Matrix ata(cols, Vector(cols, 0.0));
  Vector atb(cols, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < cols; ++i) {
      atb[i] += a[r][i] * b[r];
      for (std::size_t j = 0; j < cols; ++j) {
        ata[i][j] += a[r][i] * a[r][j];
      }
    }
  }
  return gaussian_solve(std::move(ata), std::move(atb));
}

struct SupportFit {
  std::vector<int> blocks;  // ascending
  Vector x;                 // full length, zeros off support
  double residual = std::numeric_limits<double>::infinity();
};

// Exhaustive block-support search: every support of at most max_blocks
// blocks, least squares on its columns, keep the first strict minimizer in
// (popcount, lexicographic) order.
inline SupportFit best_support(const Matrix& a, const Vector& b,
                               const std::vector<int>& block_begin,
                               const std::vector<int>& block_size,
                               int max_blocks) {
  const int blocks = static_cast<int>(block_size.size());
  const std::size_t total_cols = a.empty() ? 0 : a[0].size();
  SupportFit best;

  std::vector<int> chosen;
  auto evaluate = [&]() {
    std::vector<std::size_t> cols;
    for (int blk : chosen) {
      for (int c = 0; c < block_size[static_cast<std::size_t>(blk)]; ++c) {
        cols.push_back(
            static_cast<std::size_t>(block_begin[static_cast<std::size_t>(
                                         blk)] +
                                     c));
      }
    }
    Matrix sub(a.size(), Vector(cols.size(), 0.0));
    for (std::size_t r = 0; r < a.size(); ++r) {
      for (std::size_t c = 0; c < cols.size(); ++c) {
        sub[r][c] = a[r][cols[c]];
      }
    }
    const Vector xs = solve_normal_equations(sub, b);
    const double res = residual_norm(sub, xs, b);
    if (res < best.residual - 1e-12) {
      best.residual = res;
      best.blocks = chosen;
      best.x.assign(total_cols, 0.0);
      for (std::size_t c = 0; c < cols.size(); ++c) {
        best.x[cols[c]] = xs[c];
      }
    }
  };

  // Visit supports in ascending size so ties resolve toward smaller ones.
  for (int k = 1; k <= max_blocks; ++k) {
    auto visit_size = [&](auto&& self, int from, int left) -> void {
      if (left == 0) {
        evaluate();
        return;
      }
      for (int blk = from; blk <= blocks - left; ++blk) {
        chosen.push_back(blk);
        self(self, blk + 1, left - 1);
        chosen.pop_back();
      }
    };
    visit_size(visit_size, 0, k);
  }
  return best;
}

// Mean of |a - p| and sqrt of mean squared difference, written directly.
inline double reference_mae(const Vector& actual, const Vector& predicted) {
  double s = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    s += std::fabs(actual[i] - predicted[i]);
  }
  return s / static_cast<double>(actual.size());
}

inline double reference_rmse(const Vector& actual, const Vector& predicted) {
  double s = 0.0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const double d = actual[i] - predicted[i];
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(actual.size()));
}

}  // namespace oracle
