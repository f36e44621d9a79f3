#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "seamkit/errors.hpp"
#include "seamkit/geometry.hpp"

namespace seamkit {

/// Static k-d tree over a point set for exact nearest-neighbour queries.
/// Returned squared distances are bit-identical to a linear scan because
/// every candidate goes through the same squared_distance(), and box bounds
/// are summed in the same coordinate order (so they never exceed the distance
/// of a point inside the box).
template <typename P>
class KdTree {
 public:
  static constexpr std::size_t kLeafSize = 8;

  explicit KdTree(std::span<const P> pts) : pts_(pts.begin(), pts.end()) {
    if (pts_.empty()) return;
    nodes_.reserve(2 * (pts_.size() / kLeafSize + 1));
    build(0, pts_.size(), 0);
  }

  std::size_t size() const { return pts_.size(); }

  double nearest_squared(const P& q) const {
    std::size_t hint = 0;
    return nearest_squared(q, hint);
  }

  /// `hint` is a stored-point position whose distance seeds the search; it is
  /// overwritten with the position of the nearest point found. Consecutive
  /// queries along a curve or grid pass the same variable to prune early.
  double nearest_squared(const P& q, std::size_t& hint) const {
    if (pts_.empty()) return std::numeric_limits<double>::infinity();
    if (hint >= pts_.size()) hint = 0;
    double best = squared_distance(q, pts_[hint]);
    search(0, q, best, hint);
    return best;
  }

 private:
  using Box = std::array<double, P::kDim>;

  struct Node {
    Box lo, hi;
    unsigned begin = 0, end = 0;
    int left = -1, right = -1;  // both -1 for a leaf
  };

  int build(std::size_t lo, std::size_t hi, int depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    Node n;
    n.begin = static_cast<unsigned>(lo);
    n.end = static_cast<unsigned>(hi);
    for (int k = 0; k < P::kDim; ++k) {
      n.lo[k] = std::numeric_limits<double>::infinity();
      n.hi[k] = -std::numeric_limits<double>::infinity();
    }
    for (std::size_t i = lo; i < hi; ++i)
      for (int k = 0; k < P::kDim; ++k) {
        n.lo[k] = std::min(n.lo[k], pts_[i][k]);
        n.hi[k] = std::max(n.hi[k], pts_[i][k]);
      }
    if (hi - lo > kLeafSize) {
      // Split the widest extent; alternate axes on ties.
      int axis = depth % P::kDim;
      for (int k = 0; k < P::kDim; ++k)
        if (n.hi[k] - n.lo[k] > n.hi[axis] - n.lo[axis]) axis = k;
      const std::size_t mid = lo + (hi - lo) / 2;
      std::nth_element(pts_.begin() + static_cast<std::ptrdiff_t>(lo), pts_.begin() + static_cast<std::ptrdiff_t>(mid),
                       pts_.begin() + static_cast<std::ptrdiff_t>(hi),
                       [axis](const P& a, const P& b) { return a[axis] < b[axis]; });
      n.left = build(lo, mid, depth + 1);
      n.right = build(mid, hi, depth + 1);
    }
    nodes_[static_cast<std::size_t>(id)] = n;
    return id;
  }

  static double box_squared(const Node& n, const P& q) {
    double s = 0.0;
    for (int k = 0; k < P::kDim; ++k) {
      const double d = q[k] < n.lo[k] ? q[k] - n.lo[k] : (q[k] > n.hi[k] ? q[k] - n.hi[k] : 0.0);
      s += d * d;
    }
    return s;
  }

  void search(int id, const P& q, double& best, std::size_t& at) const {
    const Node& n = nodes_[static_cast<std::size_t>(id)];
    if (n.left < 0) {
      for (unsigned i = n.begin; i < n.end; ++i) {
        const double d = squared_distance(q, pts_[i]);
        if (d < best) {
          best = d;
          at = i;
        }
      }
      return;
    }
    const Node& l = nodes_[static_cast<std::size_t>(n.left)];
    const Node& r = nodes_[static_cast<std::size_t>(n.right)];
    const double dl = box_squared(l, q), dr = box_squared(r, q);
    if (dl <= dr) {
      if (dl < best) search(n.left, q, best, at);
      if (dr < best) search(n.right, q, best, at);
    } else {
      if (dr < best) search(n.right, q, best, at);
      if (dl < best) search(n.left, q, best, at);
    }
  }

  std::vector<P> pts_;  // reordered into leaf buckets
  std::vector<Node> nodes_;
};

namespace detail {

template <typename P>
void require_nonempty(std::span<const P> a, std::span<const P> b) {
  if (a.empty() || b.empty()) throw ValidationError("chamfer distance of an empty point set");
}

/// Mean of per-point values summed in index order.
inline double ordered_mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace detail

/// Mean Euclidean distance from each point of `a` to its nearest point in `b`
/// (unsquared).
template <typename P>
double chamfer_directional(std::span<const P> a, std::span<const P> b) {
  detail::require_nonempty(a, b);
  const KdTree<P> tree(b);
  std::vector<double> nearest(a.size());
  std::size_t hint = 0;
  for (std::size_t i = 0; i < a.size(); ++i) nearest[i] = std::sqrt(tree.nearest_squared(a[i], hint));
  return detail::ordered_mean(nearest);
}

/// OpenMP variant of chamfer_directional. Queries run in parallel; the final
/// sum is taken serially so the result does not depend on the thread count.
template <typename P>
double chamfer_directional_omp(std::span<const P> a, std::span<const P> b) {
  detail::require_nonempty(a, b);
  const KdTree<P> tree(b);
  std::vector<double> nearest(a.size());
  const auto n = static_cast<std::ptrdiff_t>(a.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    nearest[static_cast<std::size_t>(i)] = std::sqrt(tree.nearest_squared(a[static_cast<std::size_t>(i)]));
  }
  return detail::ordered_mean(nearest);
}

template <typename P>
double chamfer_symmetric(std::span<const P> a, std::span<const P> b) {
  return 0.5 * (chamfer_directional(a, b) + chamfer_directional(b, a));
}

template <typename P>
double chamfer_symmetric_omp(std::span<const P> a, std::span<const P> b) {
  return 0.5 * (chamfer_directional_omp(a, b) + chamfer_directional_omp(b, a));
}

/// Row-major matrix of symmetric Chamfer distances between every pair of
/// point sets. Pairs are distributed over OpenMP threads.
template <typename P>
std::vector<double> pairwise_chamfer(const std::vector<std::vector<P>>& rows,
                                     const std::vector<std::vector<P>>& cols) {
  const std::size_t nr = rows.size();
  const std::size_t nc = cols.size();
  std::vector<double> out(nr * nc, 0.0);
  if (nr == 0 || nc == 0) return out;

  // One tree per set, built once and shared read-only by all threads.
  std::vector<KdTree<P>> row_trees;
  std::vector<KdTree<P>> col_trees;
  row_trees.reserve(nr);
  col_trees.reserve(nc);
  for (const auto& r : rows) row_trees.emplace_back(std::span<const P>(r));
  for (const auto& c : cols) col_trees.emplace_back(std::span<const P>(c));

  for (const auto& r : rows)
    if (r.empty()) throw ValidationError("chamfer distance of an empty point set");
  for (const auto& c : cols)
    if (c.empty()) throw ValidationError("chamfer distance of an empty point set");

  auto directional = [](const std::vector<P>& a, const KdTree<P>& tree) {
    double s = 0.0;
    std::size_t hint = 0;
    for (const P& p : a) s += std::sqrt(tree.nearest_squared(p, hint));
    return s / static_cast<double>(a.size());
  };

  const auto total = static_cast<std::ptrdiff_t>(nr * nc);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t k = 0; k < total; ++k) {
    const std::size_t i = static_cast<std::size_t>(k) / nc;
    const std::size_t j = static_cast<std::size_t>(k) % nc;
    out[static_cast<std::size_t>(k)] =
        0.5 * (directional(rows[i], col_trees[j]) + directional(cols[j], row_trees[i]));
  }
  return out;
}

/// Serial O(n*m) implementations kept as the reference the parallel kernels
/// are tested and benchmarked against.
namespace reference {

template <typename P>
double chamfer_directional(std::span<const P> a, std::span<const P> b) {
  detail::require_nonempty(a, b);
  double sum = 0.0;
  for (const P& p : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const P& q : b) best = std::min(best, squared_distance(p, q));
    sum += std::sqrt(best);
  }
  return sum / static_cast<double>(a.size());
}

template <typename P>
double chamfer_symmetric(std::span<const P> a, std::span<const P> b) {
  return 0.5 * (reference::chamfer_directional(a, b) + reference::chamfer_directional(b, a));
}

template <typename P>
std::vector<double> pairwise_chamfer(const std::vector<std::vector<P>>& rows,
                                     const std::vector<std::vector<P>>& cols) {
  std::vector<double> out;
  out.reserve(rows.size() * cols.size());
  for (const auto& r : rows)
    for (const auto& c : cols) out.push_back(reference::chamfer_symmetric<P>(r, c));
  return out;
}

}  // namespace reference

}  // namespace seamkit
