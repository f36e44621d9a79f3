#include "seamkit/refine_topology.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <tuple>

#include "seamkit/chamfer.hpp"
#include "seamkit/errors.hpp"

namespace seamkit {

using nlohmann::json;

namespace {

struct Box3 {
  Point3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
  Point3 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
            -std::numeric_limits<double>::infinity()};
};

Box3 bounds(const std::vector<Point3>& pts) {
  Box3 b;
  for (const Point3& p : pts) {
    b.lo = {std::min(b.lo.x, p.x), std::min(b.lo.y, p.y), std::min(b.lo.z, p.z)};
    b.hi = {std::max(b.hi.x, p.x), std::max(b.hi.y, p.y), std::max(b.hi.z, p.z)};
  }
  return b;
}

// Lower bound on any Chamfer distance between points in the two boxes.
double box_gap(const Box3& a, const Box3& b) {
  double s = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double g = std::max({0.0, a.lo[k] - b.hi[k], b.lo[k] - a.hi[k]});
    s += g * g;
  }
  return std::sqrt(s);
}

bool adjacent(const GarmentStructure& s, std::size_t row, std::size_t col) {
  return s.connectivity(row, col) >= 0.5;
}

bool same_column(const GarmentStructure& s, std::size_t a, std::size_t b) {
  bool any = false;
  for (std::size_t r = 0; r < s.patches.size(); ++r) {
    const bool x = adjacent(s, r, a);
    if (x != adjacent(s, r, b)) return false;
    any = any || x;
  }
  return any;
}

// Removes curve `c` from the valid set along with its adjacency and edges.
void invalidate_curve(GarmentStructure& s, std::size_t c) {
  s.masks->curves[c] = 0;
  for (std::size_t r = 0; r < s.patches.size(); ++r) s.connectivity(r, c) = 0.0;
  const int id = s.curves[c].id;
  for (Panel& p : s.panels) {
    const auto before = p.edges.size();
    std::erase_if(p.edges, [id](const Edge2D& e) { return e.source_curve_id == id; });
    if (p.edges.size() != before) p.loop_order.reset();
  }
}

// True when the two polylines run in the same direction.
bool same_direction(const Curve3D& a, const Curve3D& b) {
  const double direct = distance(a.points.front(), b.points.front()) + distance(a.points.back(), b.points.back());
  const double crossed = distance(a.points.front(), b.points.back()) + distance(a.points.back(), b.points.front());
  return direct <= crossed;
}

void require_masks(const GarmentStructure& s, const char* op) {
  if (!s.masks) throw ValidationError(std::string(op) + ": validity masks not computed");
}

}  // namespace

void TopologyThresholds::validate() const {
  auto unit = [](double v, const char* name) {
    if (!(v > 0.0 && v <= 1.0)) throw ValidationError(std::string(name) + " must lie in (0, 1]");
  };
  unit(eps_p, "eps_p");
  unit(eps_c, "eps_c");
  unit(eps_adj, "eps_adj");
  if (!(dup_cd > 0.0)) throw ValidationError("dup_cd must be positive");
  if (!(sub_cd > 0.0)) throw ValidationError("sub_cd must be positive");
  if (!(prune_margin > 0.0)) throw ValidationError("prune_margin must be positive");
}

json to_json(const RefinementLog& log) {
  json merged = json::array();
  for (const auto& m : log.merged_pairs)
    merged.push_back({{"kept_curve", m.kept_curve},
                      {"removed_curve", m.removed_curve},
                      {"cd_kept_to_removed", m.cd_kept_to_removed},
                      {"cd_removed_to_kept", m.cd_removed_to_kept}});
  json subs = json::array();
  for (const auto& r : log.removed_subcurves)
    subs.push_back({{"removed_curve", r.removed_curve}, {"main_curve", r.main_curve}, {"cd_sub_to_main", r.cd_sub_to_main}});
  json pruned = json::array();
  for (const auto& p : log.pruned_edges)
    pruned.push_back({{"patch_id", p.patch_id}, {"curve_id", p.curve_id}, {"reduction", p.reduction}});
  json costs = json::array();
  for (const auto& c : log.loop_costs)
    costs.push_back({{"patch_id", c.patch_id}, {"before", c.before}, {"after", c.after}});
  return {{"merged_pairs", merged}, {"removed_subcurves", subs}, {"pruned_edges", pruned}, {"loop_costs", costs}};
}

GarmentStructure filter_thresholds(const GarmentStructure& s, const TopologyThresholds& t) {
  if (s.stage != Stage::Raw) throw ValidationError("filter_thresholds: input stage must be raw");
  t.validate();

  GarmentStructure out = s;
  out.stage = Stage::TopologyRefined;
  ValidityMasks m;
  for (const Patch3D& p : s.patches) m.patches.push_back(p.validity_prob >= t.eps_p ? 1 : 0);
  for (const Curve3D& c : s.curves) m.curves.push_back(c.validity_prob >= t.eps_c ? 1 : 0);
  out.masks = m;

  for (std::size_t r = 0; r < s.patches.size(); ++r)
    for (std::size_t c = 0; c < s.curves.size(); ++c)
      out.connectivity(r, c) = (m.patches[r] && m.curves[c] && s.connectivity(r, c) >= t.eps_adj) ? 1.0 : 0.0;

  out.panels.clear();
  for (std::size_t r = 0; r < s.patches.size(); ++r) {
    if (!m.patches[r]) continue;
    const int pid = s.patches[r].id;
    const auto it = std::find_if(s.panels.begin(), s.panels.end(), [pid](const Panel& p) { return p.patch_id == pid; });
    Panel panel;
    panel.patch_id = pid;
    if (it != s.panels.end()) panel.scale = it->scale;

    std::vector<char> has_edge(s.curves.size(), 0);
    if (it != s.panels.end()) {
      for (const Edge2D& e : it->edges) {
        const auto c = out.curve_index(e.source_curve_id);
        if (!c || has_edge[*c] || out.connectivity(r, *c) < 0.5) continue;
        has_edge[*c] = 1;
        panel.edges.push_back(e);
      }
    }
    for (std::size_t c = 0; c < s.curves.size(); ++c)
      if (!has_edge[c]) out.connectivity(r, c) = 0.0;
    out.panels.push_back(std::move(panel));
  }
  return out;
}

std::pair<GarmentStructure, RefinementLog> merge_duplicate_curves(GarmentStructure s, const TopologyThresholds& t) {
  require_masks(s, "merge_duplicate_curves");
  RefinementLog log;
  const std::size_t n = s.curves.size();
  std::vector<Box3> boxes;
  for (const Curve3D& c : s.curves) boxes.push_back(bounds(c.points));

  struct Candidate {
    double key;
    std::size_t a, b;
    double ab, ba;
  };
  std::vector<Candidate> candidates;
  for (std::size_t a = 0; a < n; ++a) {
    if (!s.curve_valid(a)) continue;
    for (std::size_t b = a + 1; b < n; ++b) {
      if (!s.curve_valid(b) || box_gap(boxes[a], boxes[b]) >= t.dup_cd) continue;
      const double ab = chamfer_directional<Point3>(s.curves[a].points, s.curves[b].points);
      if (!(ab < t.dup_cd)) continue;
      const double ba = chamfer_directional<Point3>(s.curves[b].points, s.curves[a].points);
      if (!(ba < t.dup_cd)) continue;
      candidates.push_back({std::max(ab, ba), a, b, ab, ba});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
    return std::tie(x.key, x.a, x.b) < std::tie(y.key, y.a, y.b);
  });

  // Geometry is never modified, so pairwise distances stay valid and a single
  // ordered sweep reaches the fixpoint.
  for (const Candidate& cand : candidates) {
    if (!s.curve_valid(cand.a) || !s.curve_valid(cand.b)) continue;
    const bool keep_a = s.curves[cand.a].validity_prob >= s.curves[cand.b].validity_prob;
    const std::size_t keep = keep_a ? cand.a : cand.b;
    const std::size_t drop = keep_a ? cand.b : cand.a;
    const int keep_id = s.curves[keep].id;
    const int drop_id = s.curves[drop].id;
    const bool aligned = same_direction(s.curves[keep], s.curves[drop]);

    for (std::size_t r = 0; r < s.patches.size(); ++r) {
      if (adjacent(s, r, drop)) s.connectivity(r, keep) = 1.0;
      s.connectivity(r, drop) = 0.0;
    }
    for (Panel& p : s.panels) {
      const bool has_keep = std::any_of(p.edges.begin(), p.edges.end(),
                                        [keep_id](const Edge2D& e) { return e.source_curve_id == keep_id; });
      for (auto it = p.edges.begin(); it != p.edges.end();) {
        if (it->source_curve_id != drop_id) {
          ++it;
          continue;
        }
        if (has_keep) {
          it = p.edges.erase(it);
          p.loop_order.reset();
        } else {
          it->source_curve_id = keep_id;
          if (!aligned) it->reversed = !it->reversed;
          ++it;
        }
      }
    }
    s.masks->curves[drop] = 0;
    log.merged_pairs.push_back({keep_id, drop_id, keep_a ? cand.ab : cand.ba, keep_a ? cand.ba : cand.ab});
  }
  return {std::move(s), std::move(log)};
}

std::pair<GarmentStructure, RefinementLog> remove_subcurves(GarmentStructure s, const TopologyThresholds& t) {
  require_masks(s, "remove_subcurves");
  RefinementLog log;
  const std::size_t n = s.curves.size();
  std::vector<Box3> boxes;
  std::vector<double> lengths;
  for (const Curve3D& c : s.curves) {
    boxes.push_back(bounds(c.points));
    lengths.push_back(polyline_length<Point3>(c.points));
  }

  struct Candidate {
    double cd;
    std::size_t sub, main;
  };
  std::vector<Candidate> candidates;
  for (std::size_t a = 0; a < n; ++a) {
    if (!s.curve_valid(a)) continue;
    for (std::size_t b = a + 1; b < n; ++b) {
      if (!s.curve_valid(b) || box_gap(boxes[a], boxes[b]) >= t.sub_cd) continue;
      if (!same_column(s, a, b)) continue;
      // Shorter curve is the sub-curve; equal lengths fall back to lower probability.
      bool a_is_sub = lengths[a] < lengths[b];
      if (lengths[a] == lengths[b]) a_is_sub = s.curves[a].validity_prob < s.curves[b].validity_prob;
      const std::size_t sub = a_is_sub ? a : b;
      const std::size_t main = a_is_sub ? b : a;
      const double cd = chamfer_directional<Point3>(s.curves[sub].points, s.curves[main].points);
      if (cd < t.sub_cd) candidates.push_back({cd, sub, main});
    }
  }
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
    return std::tie(x.cd, x.sub, x.main) < std::tie(y.cd, y.sub, y.main);
  });

  for (const Candidate& cand : candidates) {
    if (!s.curve_valid(cand.sub) || !s.curve_valid(cand.main)) continue;
    invalidate_curve(s, cand.sub);
    log.removed_subcurves.push_back({s.curves[cand.sub].id, s.curves[cand.main].id, cand.cd});
  }
  return {std::move(s), std::move(log)};
}

std::pair<GarmentStructure, RefinementLog> prune_panel_loops(GarmentStructure s, const TopologyThresholds& t,
                                                             const TopologyRules& rules) {
  require_masks(s, "prune_panel_loops");
  RefinementLog log;
  const PruneParams params{t.prune_margin, rules.min_edges, rules.brute_force_limit};
  std::vector<PruneResult> results(s.panels.size());

  const auto count = static_cast<std::ptrdiff_t>(s.panels.size());
  std::vector<std::exception_ptr> errors(s.panels.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      results[static_cast<std::size_t>(i)] = prune_loop_edges(s.panels[static_cast<std::size_t>(i)].edges, params);
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (std::size_t i = 0; i < s.panels.size(); ++i) {
    Panel& p = s.panels[i];
    const PruneResult& r = results[i];
    const std::size_t row = *s.patch_index(p.patch_id);
    for (const PrunedEdge& e : r.removed) {
      s.connectivity(row, *s.curve_index(e.source_curve_id)) = 0.0;
      log.pruned_edges.push_back({p.patch_id, e.source_curve_id, e.reduction});
    }
    std::vector<Edge2D> kept;
    for (int k : r.retained) kept.push_back(p.edges[static_cast<std::size_t>(k)]);
    p.edges = std::move(kept);
    p.loop_order = p.edges.empty() ? std::nullopt : std::optional<LoopOrder>(r.solution.order);
    log.loop_costs.push_back({p.patch_id, r.initial_cost, r.solution.cost});
  }
  return {std::move(s), std::move(log)};
}

std::pair<GarmentStructure, RefinementLog> refine_topology(const GarmentStructure& s, const TopologyThresholds& t,
                                                           const TopologyRules& rules) {
  GarmentStructure cur = filter_thresholds(s, t);
  RefinementLog log;
  if (rules.merge_duplicates) {
    auto [next, l] = merge_duplicate_curves(std::move(cur), t);
    cur = std::move(next);
    log.merged_pairs = std::move(l.merged_pairs);
  }
  if (rules.remove_subcurves) {
    auto [next, l] = remove_subcurves(std::move(cur), t);
    cur = std::move(next);
    log.removed_subcurves = std::move(l.removed_subcurves);
  }
  if (rules.prune_loops) {
    auto [next, l] = prune_panel_loops(std::move(cur), t, rules);
    cur = std::move(next);
    log.pruned_edges = std::move(l.pruned_edges);
    log.loop_costs = std::move(l.loop_costs);
  }
  cur.stage = Stage::TopologyRefined;
  return {std::move(cur), std::move(log)};
}

}  // namespace seamkit
