#pragma once

#include <span>
#include <vector>

#include "seamkit/pattern_model.hpp"

namespace seamkit {

/// Cyclic sum of squared gaps between each edge's end and the next edge's
/// start. Edges are taken as already ordered and oriented.
double loop_cost(std::span<const Edge2D> oriented_edges);

/// Loop cost of `edges` traversed according to `order`.
double loop_cost(std::span<const Edge2D> edges, const LoopOrder& order);

enum class LoopSearch { Exact, Heuristic };

struct LoopSolution {
  LoopOrder order;
  double cost = 0.0;
  LoopSearch mode = LoopSearch::Exact;
};

inline constexpr std::size_t kDefaultBruteForceLimit = 8;

/// Minimum-cost ordering and orientation of `edges` into a closed loop.
/// Up to `brute_force_limit` edges the minimum is exact; beyond it a
/// multi-start greedy chaining plus 2-opt / flip / relocate local search runs.
/// Edge 0 is always first and unflipped in the returned order.
LoopSolution optimal_loop_order(std::span<const Edge2D> edges,
                                std::size_t brute_force_limit = kDefaultBruteForceLimit);

/// Exact minimum via dynamic programming over visited subsets.
LoopSolution exact_loop_order(std::span<const Edge2D> edges);

/// Local-search ordering used above the exact limit; exposed for testing.
LoopSolution heuristic_loop_order(std::span<const Edge2D> edges);

struct PruneParams {
  double margin = 1e-9;
  std::size_t min_edges = 3;
  std::size_t brute_force_limit = kDefaultBruteForceLimit;
};

struct PrunedEdge {
  int index = 0;            // position in the input edge list
  int source_curve_id = 0;
  double reduction = 0.0;   // drop in optimal loop cost caused by the removal
};

struct PruneResult {
  std::vector<int> retained;        // input positions, ascending
  std::vector<PrunedEdge> removed;  // in removal order
  LoopSolution solution;            // ordering over `retained` (indices into it)
  double initial_cost = 0.0;
};

/// Greedy removal of the edge whose deletion lowers the optimal loop cost the
/// most, while the reduction exceeds `margin` and more than `min_edges` remain.
PruneResult prune_loop_edges(std::span<const Edge2D> edges, const PruneParams& params = {});

}  // namespace seamkit
