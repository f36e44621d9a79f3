#include "seamkit/hungarian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "seamkit/errors.hpp"

namespace seamkit {

int Matching::gt_for(int pred) const {
  for (const auto& [p, g] : pairs)
    if (p == pred) return g;
  return -1;
}

int Matching::pred_for(int gt) const {
  for (const auto& [p, g] : pairs)
    if (g == gt) return p;
  return -1;
}

namespace {

// Assigns every row of an n x m matrix (n <= m) to a distinct column.
// Returns assignment[row] = column.
std::vector<int> assign_rows(const std::vector<double>& a, std::size_t n, std::size_t m) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);

  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a[(i0 - 1) * m + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> assignment(n, -1);
  for (std::size_t j = 1; j <= m; ++j)
    if (p[j] != 0) assignment[p[j] - 1] = static_cast<int>(j - 1);
  return assignment;
}

}  // namespace

Matching hungarian_match(const std::vector<double>& cost, std::size_t rows, std::size_t cols) {
  if (cost.size() != rows * cols) throw ValidationError("hungarian_match: cost size does not match shape");
  for (double c : cost)
    if (!std::isfinite(c)) throw ValidationError("hungarian_match: non-finite cost");

  Matching m;
  std::vector<int> gt_of_pred(rows, -1);
  if (rows > 0 && cols > 0) {
    if (rows <= cols) {
      gt_of_pred = assign_rows(cost, rows, cols);
    } else {
      std::vector<double> t(cols * rows);
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) t[c * rows + r] = cost[r * cols + c];
      const std::vector<int> pred_of_gt = assign_rows(t, cols, rows);
      for (std::size_t c = 0; c < cols; ++c) gt_of_pred[static_cast<std::size_t>(pred_of_gt[c])] = static_cast<int>(c);
    }
  }

  std::vector<char> gt_used(cols, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    const int g = gt_of_pred[r];
    if (g < 0) {
      m.unmatched_pred.push_back(static_cast<int>(r));
      continue;
    }
    m.pairs.emplace_back(static_cast<int>(r), g);
    m.total_cost += cost[r * cols + static_cast<std::size_t>(g)];
    gt_used[static_cast<std::size_t>(g)] = 1;
  }
  for (std::size_t c = 0; c < cols; ++c)
    if (!gt_used[c]) m.unmatched_gt.push_back(static_cast<int>(c));
  return m;
}

}  // namespace seamkit
