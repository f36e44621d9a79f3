#pragma once

#include <vector>

#include <json.hpp>

#include "seamkit/refine_geometry.hpp"
#include "seamkit/refine_topology.hpp"

namespace seamkit {

struct PipelineOptions {
  TopologyThresholds thresholds;
  TopologyRules rules;
  GeometryParams geometry;
  bool refine_geometry = true;

  /// Threshold filtering only: no merge, sub-curve removal, pruning or
  /// geometry refinement.
  static PipelineOptions threshold_only();
  void validate() const;
};

struct PipelineResult {
  GarmentStructure structure;
  RefinementLog topology;
  std::vector<PanelGeometryReport> geometry;
};

/// Raw -> topology_refined -> geometry_refined (when enabled).
PipelineResult refine(const GarmentStructure& raw, const PipelineOptions& opt = {});

nlohmann::json to_json(const PipelineResult& r);

}  // namespace seamkit
