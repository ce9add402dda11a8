#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "speedcast/errors.hpp"

namespace speedcast {

// Per-series lag counts and their block offsets inside the coefficient
// vector. Block i owns columns [offsets[i], offsets[i+1]); column c within a
// block is lag c + 1 (newest lag first).
struct BlockLayout {
  std::vector<int> orders;   // n_i, one per series
  int n_max = 0;             // >= max_i n_i; rows of the design start here
  std::vector<int> offsets;  // prefix sums, size orders.size() + 1
  int total_cols = 0;        // N = sum n_i

  int block_count() const { return static_cast<int>(orders.size()); }
  int block_begin(int i) const { return offsets[static_cast<std::size_t>(i)]; }
  int block_size(int i) const { return orders[static_cast<std::size_t>(i)]; }

  static BlockLayout uniform(std::size_t series_count, int order) {
    return from_orders(std::vector<int>(series_count, order));
  }

  // n_max defaults to max_i n_i; equality wastes no training rows.
  static BlockLayout from_orders(std::vector<int> orders) {
    if (orders.empty()) {
      throw InvalidOrders("order list is empty");
    }
    int n_max = *std::max_element(orders.begin(), orders.end());
    return from_orders(std::move(orders), n_max);
  }

  static BlockLayout from_orders(std::vector<int> orders, int n_max) {
    if (orders.empty()) {
      throw InvalidOrders("order list is empty");
    }
    BlockLayout out;
    out.offsets.reserve(orders.size() + 1);
    out.offsets.push_back(0);
    for (std::size_t i = 0; i < orders.size(); ++i) {
      if (orders[i] < 1) {
        throw InvalidOrders("order n_" + std::to_string(i) + " = " +
                            std::to_string(orders[i]) + " must be >= 1");
      }
      if (n_max < orders[i]) {
        throw InvalidOrders("n_max = " + std::to_string(n_max) +
                            " is below order n_" + std::to_string(i) + " = " +
                            std::to_string(orders[i]));
      }
      out.offsets.push_back(out.offsets.back() + orders[i]);
    }
    out.orders = std::move(orders);
    out.n_max = n_max;
    out.total_cols = out.offsets.back();
    return out;
  }

  // Block index owning a flat coefficient column.
  int block_of_column(int col) const {
    auto it = std::upper_bound(offsets.begin(), offsets.end(), col);
    return static_cast<int>(it - offsets.begin()) - 1;
  }
};

}  // namespace speedcast
