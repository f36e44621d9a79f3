#include "seamkit/pipeline.hpp"

#include "seamkit/errors.hpp"

namespace seamkit {

PipelineOptions PipelineOptions::threshold_only() {
  PipelineOptions o;
  o.rules.merge_duplicates = false;
  o.rules.remove_subcurves = false;
  o.rules.prune_loops = false;
  o.refine_geometry = false;
  return o;
}

void PipelineOptions::validate() const {
  thresholds.validate();
  geometry.validate();
  if (rules.min_edges < 1) throw ValidationError("min_edges must be at least 1");
  if (rules.brute_force_limit > 20) throw ValidationError("brute_force_limit must not exceed 20");
}

PipelineResult refine(const GarmentStructure& raw, const PipelineOptions& opt) {
  opt.validate();
  PipelineResult r;
  auto [topo, log] = refine_topology(raw, opt.thresholds, opt.rules);
  r.topology = std::move(log);
  r.structure = opt.refine_geometry ? refine_geometry(topo, opt.geometry, &r.geometry) : std::move(topo);
  return r;
}

nlohmann::json to_json(const PipelineResult& r) {
  nlohmann::json panels = nlohmann::json::array();
  for (const PanelGeometryReport& g : r.geometry) {
    panels.push_back({{"patch_id", g.patch_id},
                      {"replaced_edges", g.replaced_edges},
                      {"closure_residual", g.closure_residual},
                      {"closed", g.closed},
                      {"clamped", g.clamped},
                      {"degenerate", g.degenerate}});
  }
  return {{"stage", std::string(to_string(r.structure.stage))},
          {"topology", to_json(r.topology)},
          {"geometry", std::move(panels)}};
}

}  // namespace seamkit
