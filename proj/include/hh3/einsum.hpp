#pragma once

#include <optional>
#include <vector>

#include "hh3/errors.hpp"
#include "hh3/expr.hpp"
#include "hh3/matrix.hpp"

namespace hh3 {

/// Rank-2 tensor participating in an Einstein contraction. Free indices must
/// already be pinned to concrete values; dummies are contracted pairwise.
template <class T>
struct EinsumTensor {
  MatrixT<T> m;
  Index row = 0, col = 0;
  std::optional<int> row_pin, col_pin;
};

/// Fully contracts a network of rank-2 tensors (every dummy occurs exactly
/// twice) into a scalar. The network decomposes into matrix-product paths and
/// trace cycles, so contraction never needs tensors of rank above 2.
template <class T>
T contract_network(std::vector<EinsumTensor<T>> ts, T acc) {
  while (!ts.empty()) {
    bool reduced = false;
    // Closed loop on one tensor -> trace.
    for (size_t i = 0; i < ts.size() && !reduced; ++i) {
      if (is_dummy(ts[i].row) && ts[i].row == ts[i].col) {
        acc = acc * ts[i].m.trace();
        ts.erase(ts.begin() + static_cast<long>(i));
        reduced = true;
      }
    }
    if (reduced) continue;
    // Fully pinned tensor -> matrix entry.
    for (size_t i = 0; i < ts.size() && !reduced; ++i) {
      if (ts[i].row_pin && ts[i].col_pin) {
        acc = acc * ts[i].m(*ts[i].row_pin, *ts[i].col_pin);
        ts.erase(ts.begin() + static_cast<long>(i));
        reduced = true;
      }
    }
    if (reduced) continue;
    // Contract one shared summation index between two tensors.
    for (size_t i = 0; i < ts.size() && !reduced; ++i) {
      for (size_t j = i + 1; j < ts.size() && !reduced; ++j) {
        EinsumTensor<T>& a = ts[i];
        EinsumTensor<T>& b = ts[j];
        EinsumTensor<T> merged;
        if (is_dummy(a.col) && a.col == b.row) {
          merged = {a.m * b.m, a.row, b.col, a.row_pin, b.col_pin};
        } else if (is_dummy(b.col) && b.col == a.row) {
          merged = {b.m * a.m, b.row, a.col, b.row_pin, a.col_pin};
        } else if (is_dummy(a.row) && a.row == b.row) {
          merged = {a.m.transpose() * b.m, a.col, b.col, a.col_pin, b.col_pin};
        } else if (is_dummy(a.col) && a.col == b.col) {
          merged = {a.m * b.m.transpose(), a.row, b.row, a.row_pin, b.row_pin};
        } else {
          continue;
        }
        a = std::move(merged);
        ts.erase(ts.begin() + static_cast<long>(j));
        reduced = true;
      }
    }
    if (!reduced) throw EvalError("tensor network could not be fully contracted");
  }
  return acc;
}

}  // namespace hh3
