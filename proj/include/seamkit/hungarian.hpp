#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace seamkit {

/// Partial bijection between prediction indices (rows) and ground-truth
/// indices (columns).
struct Matching {
  std::vector<std::pair<int, int>> pairs;  // sorted by prediction index
  std::vector<int> unmatched_pred;
  std::vector<int> unmatched_gt;
  double total_cost = 0.0;

  /// Ground-truth partner of prediction `i`, or -1.
  int gt_for(int pred) const;
  /// Prediction partner of ground-truth `j`, or -1.
  int pred_for(int gt) const;
};

/// Minimum-cost assignment of min(rows, cols) pairs on a row-major cost
/// matrix (shortest augmenting path with potentials, O(n^2 m)).
/// Ties resolve to the lowest column index at each augmentation step.
/// `total_cost` is the sum of matched entries in prediction order.
Matching hungarian_match(const std::vector<double>& cost, std::size_t rows, std::size_t cols);

}  // namespace seamkit
