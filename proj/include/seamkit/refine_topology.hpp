#pragma once

#include <utility>
#include <vector>

#include <json.hpp>

#include "seamkit/loop_order.hpp"
#include "seamkit/pattern_model.hpp"

namespace seamkit {

struct TopologyThresholds {
  double eps_p = 0.7;          // patch validity
  double eps_c = 0.5;          // curve validity
  double eps_adj = 0.5;        // patch-curve adjacency
  double dup_cd = 0.03;        // meters, both directions
  double sub_cd = 0.04;        // meters, sub-curve toward main curve
  double prune_margin = 1e-9;  // minimum loop-cost reduction to prune an edge

  /// Throws ValidationError when a field is out of range.
  void validate() const;
};

/// Which refinement rules run after threshold filtering. Threshold filtering
/// alone corresponds to all three switched off.
struct TopologyRules {
  bool merge_duplicates = true;
  bool remove_subcurves = true;
  bool prune_loops = true;
  std::size_t brute_force_limit = kDefaultBruteForceLimit;
  std::size_t min_edges = 3;
};

struct MergeRecord {
  int kept_curve = 0;
  int removed_curve = 0;
  double cd_kept_to_removed = 0.0;
  double cd_removed_to_kept = 0.0;
};

struct SubcurveRecord {
  int removed_curve = 0;
  int main_curve = 0;
  double cd_sub_to_main = 0.0;
};

struct PruneRecord {
  int patch_id = 0;
  int curve_id = 0;
  double reduction = 0.0;
};

struct PanelLoopCost {
  int patch_id = 0;
  double before = 0.0;
  double after = 0.0;
};

struct RefinementLog {
  std::vector<MergeRecord> merged_pairs;
  std::vector<SubcurveRecord> removed_subcurves;
  std::vector<PruneRecord> pruned_edges;
  std::vector<PanelLoopCost> loop_costs;
};

nlohmann::json to_json(const RefinementLog& log);

/// Binary masks from validity thresholds (inclusive) and binarized
/// connectivity restricted to valid elements. A raw adjacency without a
/// candidate 2D edge in its panel is dropped. Output stage: TopologyRefined.
GarmentStructure filter_thresholds(const GarmentStructure& s, const TopologyThresholds& t);

/// Merges curve pairs closer than dup_cd in both Chamfer directions. The
/// higher-probability curve survives and inherits the other's adjacency.
std::pair<GarmentStructure, RefinementLog> merge_duplicate_curves(GarmentStructure s, const TopologyThresholds& t);

/// Drops the shorter of two curves with identical adjacency columns when its
/// Chamfer distance toward the longer one is below sub_cd.
std::pair<GarmentStructure, RefinementLog> remove_subcurves(GarmentStructure s, const TopologyThresholds& t);

/// Per-panel loop pruning; records the optimal traversal as the panel's loop order.
std::pair<GarmentStructure, RefinementLog> prune_panel_loops(GarmentStructure s, const TopologyThresholds& t,
                                                             const TopologyRules& rules = {});

/// filter -> duplicate merge -> sub-curve removal -> loop pruning.
std::pair<GarmentStructure, RefinementLog> refine_topology(const GarmentStructure& s,
                                                           const TopologyThresholds& t = {},
                                                           const TopologyRules& rules = {});

}  // namespace seamkit
