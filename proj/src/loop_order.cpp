#include "seamkit/loop_order.hpp"

#include <algorithm>
#include <array>
#include <limits>

#include "seamkit/errors.hpp"

namespace seamkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double gap2(Point2 a, Point2 b) { return squared_distance(a, b); }

// Endpoints of every edge in both orientations.
struct Ends {
  explicit Ends(std::span<const Edge2D> edges) {
    for (const Edge2D& e : edges) {
      start.push_back({e.start(), e.end()});
      end.push_back({e.end(), e.start()});
    }
  }
  Point2 s(std::size_t i, bool flip) const { return start[i][flip ? 1 : 0]; }
  Point2 e(std::size_t i, bool flip) const { return end[i][flip ? 1 : 0]; }

  std::vector<std::array<Point2, 2>> start;
  std::vector<std::array<Point2, 2>> end;
};

struct Step {
  int edge;
  bool flip;
};
using Tour = std::vector<Step>;

double tour_cost(const Ends& ends, const Tour& t) {
  double c = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const Step& a = t[k];
    const Step& b = t[(k + 1) % t.size()];
    c += gap2(ends.e(static_cast<std::size_t>(a.edge), a.flip), ends.s(static_cast<std::size_t>(b.edge), b.flip));
  }
  return c;
}

// Rotates so edge 0 leads, reversing the whole cycle if it would be flipped.
Tour canonical(Tour t) {
  auto lead = [&] {
    const auto it = std::find_if(t.begin(), t.end(), [](const Step& s) { return s.edge == 0; });
    std::rotate(t.begin(), it, t.end());
  };
  lead();
  if (!t.empty() && t.front().flip) {
    std::reverse(t.begin(), t.end());
    for (Step& s : t) s.flip = !s.flip;
    lead();
  }
  return t;
}

LoopOrder to_order(const Tour& t) {
  LoopOrder lo;
  for (const Step& s : t) {
    lo.order.push_back(s.edge);
    lo.flips.push_back(s.flip);
  }
  return lo;
}

LoopSolution finish(std::span<const Edge2D> edges, const Tour& t, LoopSearch mode) {
  LoopSolution sol;
  sol.order = to_order(canonical(t));
  sol.cost = loop_cost(edges, sol.order);
  sol.mode = mode;
  return sol;
}

Tour greedy_chain(const Ends& ends, std::size_t n, int first, bool first_flip) {
  Tour t{{first, first_flip}};
  std::vector<char> used(n, 0);
  used[static_cast<std::size_t>(first)] = 1;
  for (std::size_t step = 1; step < n; ++step) {
    const Point2 tail = ends.e(static_cast<std::size_t>(t.back().edge), t.back().flip);
    double best = kInf;
    Step pick{-1, false};
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j]) continue;
      for (bool f : {false, true}) {
        const double g = gap2(tail, ends.s(j, f));
        if (g < best) {
          best = g;
          pick = {static_cast<int>(j), f};
        }
      }
    }
    used[static_cast<std::size_t>(pick.edge)] = 1;
    t.push_back(pick);
  }
  return t;
}

// First-improvement local search over segment reversal (2-opt), single-edge
// flips and single-edge relocation.
void improve(const Ends& ends, Tour& t, double& cost) {
  const std::size_t n = t.size();
  if (n < 2) {
    if (n == 1) {
      Tour f = t;
      f[0].flip = !f[0].flip;
      const double c = tour_cost(ends, f);
      if (c < cost) {
        t = f;
        cost = c;
      }
    }
    return;
  }
  constexpr double kMinGain = 1e-15;
  bool improved = true;
  while (improved) {
    improved = false;
    // 2-opt
    for (std::size_t i = 0; i < n && !improved; ++i) {
      for (std::size_t j = i + 1; j < n && !improved; ++j) {
        Tour c = t;
        std::reverse(c.begin() + static_cast<std::ptrdiff_t>(i), c.begin() + static_cast<std::ptrdiff_t>(j) + 1);
        for (std::size_t k = i; k <= j; ++k) c[k].flip = !c[k].flip;
        const double cc = tour_cost(ends, c);
        if (cc < cost - kMinGain) {
          t = std::move(c);
          cost = cc;
          improved = true;
        }
      }
    }
    // flip
    for (std::size_t i = 0; i < n && !improved; ++i) {
      Tour c = t;
      c[i].flip = !c[i].flip;
      const double cc = tour_cost(ends, c);
      if (cc < cost - kMinGain) {
        t = std::move(c);
        cost = cc;
        improved = true;
      }
    }
    // relocate
    for (std::size_t i = 0; i < n && !improved; ++i) {
      Tour rest = t;
      const Step moved = rest[i];
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
      for (std::size_t pos = 0; pos <= rest.size() && !improved; ++pos) {
        for (bool f : {false, true}) {
          Tour c = rest;
          c.insert(c.begin() + static_cast<std::ptrdiff_t>(pos), Step{moved.edge, f});
          const double cc = tour_cost(ends, c);
          if (cc < cost - kMinGain) {
            t = std::move(c);
            cost = cc;
            improved = true;
            break;
          }
        }
      }
    }
  }
}

}  // namespace

double loop_cost(std::span<const Edge2D> oriented_edges) {
  const std::size_t n = oriented_edges.size();
  double c = 0.0;
  for (std::size_t k = 0; k < n; ++k) c += gap2(oriented_edges[k].end(), oriented_edges[(k + 1) % n].start());
  return c;
}

double loop_cost(std::span<const Edge2D> edges, const LoopOrder& order) {
  const Ends ends(edges);
  Tour t;
  for (std::size_t k = 0; k < order.order.size(); ++k) t.push_back({order.order[k], order.flips[k]});
  return tour_cost(ends, t);
}

LoopSolution exact_loop_order(std::span<const Edge2D> edges) {
  const std::size_t n = edges.size();
  if (n == 0) return {};
  if (n > 20) throw ValidationError("exact_loop_order: too many edges for exact search");
  const Ends ends(edges);
  if (n == 1) return finish(edges, Tour{{0, false}}, LoopSearch::Exact);

  // dp[mask][j][o]: cheapest open path starting with edge 0 (unflipped),
  // visiting the edges in `mask` (bit b is edge b+1), ending on edge j+1
  // with orientation o.
  const std::size_t m = n - 1;
  const std::size_t full = (std::size_t{1} << m) - 1;
  auto idx = [m](std::size_t mask, std::size_t j, std::size_t o) { return (mask * m + j) * 2 + o; };
  std::vector<double> dp((full + 1) * m * 2, kInf);
  std::vector<int> parent((full + 1) * m * 2, -1);

  const Point2 s0 = ends.s(0, false);
  const Point2 e0 = ends.e(0, false);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t o = 0; o < 2; ++o) dp[idx(std::size_t{1} << j, j, o)] = gap2(e0, ends.s(j + 1, o != 0));

  for (std::size_t mask = 1; mask <= full; ++mask) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!(mask & (std::size_t{1} << j))) continue;
      for (std::size_t o = 0; o < 2; ++o) {
        const double base = dp[idx(mask, j, o)];
        if (base == kInf) continue;
        const Point2 tail = ends.e(j + 1, o != 0);
        for (std::size_t k = 0; k < m; ++k) {
          if (mask & (std::size_t{1} << k)) continue;
          const std::size_t next = mask | (std::size_t{1} << k);
          for (std::size_t o2 = 0; o2 < 2; ++o2) {
            const double v = base + gap2(tail, ends.s(k + 1, o2 != 0));
            const std::size_t at = idx(next, k, o2);
            if (v < dp[at]) {
              dp[at] = v;
              parent[at] = static_cast<int>(j * 2 + o);
            }
          }
        }
      }
    }
  }

  double best = kInf;
  std::size_t bj = 0, bo = 0;
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t o = 0; o < 2; ++o) {
      const double v = dp[idx(full, j, o)] + gap2(ends.e(j + 1, o != 0), s0);
      if (v < best) {
        best = v;
        bj = j;
        bo = o;
      }
    }
  }

  Tour rev;
  std::size_t mask = full, j = bj, o = bo;
  while (true) {
    rev.push_back({static_cast<int>(j + 1), o != 0});
    const int p = parent[idx(mask, j, o)];
    if (p < 0) break;
    mask &= ~(std::size_t{1} << j);
    j = static_cast<std::size_t>(p) / 2;
    o = static_cast<std::size_t>(p) % 2;
  }
  Tour t{{0, false}};
  t.insert(t.end(), rev.rbegin(), rev.rend());
  return finish(edges, t, LoopSearch::Exact);
}

LoopSolution heuristic_loop_order(std::span<const Edge2D> edges) {
  const std::size_t n = edges.size();
  if (n == 0) return {{}, 0.0, LoopSearch::Heuristic};
  const Ends ends(edges);
  Tour best;
  double best_cost = kInf;
  for (std::size_t s = 0; s < n; ++s) {
    for (bool f : {false, true}) {
      Tour t = greedy_chain(ends, n, static_cast<int>(s), f);
      double c = tour_cost(ends, t);
      improve(ends, t, c);
      if (c < best_cost) {
        best_cost = c;
        best = std::move(t);
      }
    }
  }
  return finish(edges, best, LoopSearch::Heuristic);
}

LoopSolution optimal_loop_order(std::span<const Edge2D> edges, std::size_t brute_force_limit) {
  if (edges.size() <= brute_force_limit) return exact_loop_order(edges);
  return heuristic_loop_order(edges);
}

PruneResult prune_loop_edges(std::span<const Edge2D> edges, const PruneParams& params) {
  PruneResult r;
  for (std::size_t i = 0; i < edges.size(); ++i) r.retained.push_back(static_cast<int>(i));

  auto solve = [&](const std::vector<int>& keep) {
    std::vector<Edge2D> subset;
    subset.reserve(keep.size());
    for (int i : keep) subset.push_back(edges[static_cast<std::size_t>(i)]);
    return optimal_loop_order(subset, params.brute_force_limit);
  };

  r.solution = solve(r.retained);
  r.initial_cost = r.solution.cost;

  while (r.retained.size() > params.min_edges) {
    double best_reduction = -kInf;
    std::size_t best_pos = 0;
    LoopSolution best_solution;
    for (std::size_t k = 0; k < r.retained.size(); ++k) {
      std::vector<int> keep = r.retained;
      keep.erase(keep.begin() + static_cast<std::ptrdiff_t>(k));
      LoopSolution s = solve(keep);
      const double reduction = r.solution.cost - s.cost;
      if (reduction > best_reduction) {
        best_reduction = reduction;
        best_pos = k;
        best_solution = std::move(s);
      }
    }
    if (!(best_reduction > params.margin)) break;
    const int removed = r.retained[best_pos];
    r.removed.push_back({removed, edges[static_cast<std::size_t>(removed)].source_curve_id, best_reduction});
    r.retained.erase(r.retained.begin() + static_cast<std::ptrdiff_t>(best_pos));
    r.solution = std::move(best_solution);
  }
  return r;
}

}  // namespace seamkit
