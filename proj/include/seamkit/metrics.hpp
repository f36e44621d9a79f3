#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "seamkit/hungarian.hpp"
#include "seamkit/pattern_model.hpp"

namespace seamkit {

/// Convention stamped on every report so numbers stay comparable.
inline constexpr const char* kChamferConvention =
    "unsquared mean nearest-neighbour distance; symmetric = mean of both directions";

/// BCE probability clamp.
inline constexpr double kBceClamp = 1e-7;

struct MetricConfig {
  double w_geo = 300.0;
  double w_cls = 1.0;
  double w_scale = 0.01;
  int raster_resolution = 256;
  /// Weight of the target-0 (invalid) term in every BCE.
  double negative_weight = 1.0;
  /// Target point spacing (meters) for the adaptive patch Chamfer.
  double adaptive_spacing = 0.05;

  void validate() const;
};

/// Indices refer to positions in `curves`/`patches`/`panels` of each structure.
struct ElementMatchings {
  Matching patches;
  Matching curves;
  Matching panels;
};

struct Losses {
  double geo = 0.0;
  double cls = 0.0;
  double scale = 0.0;
  double total = 0.0;
};

/// Per-sample or aggregated metrics. Absent values are undefined for the
/// sample (e.g. acc_e with a wrong panel count, CDs with nothing matched).
struct MetricReport {
  std::optional<double> acc_p, acc_e, acc_o;
  std::optional<double> cd_e, cd_p_base, cd_p_adapt, cd_c, iou;
  double loss_geo = 0.0;
  double loss_cls = 0.0;
  double loss_scale = 0.0;
  double loss_total = 0.0;
  int sample_count = 0;
  // Averaging weights, kept so reports can be pooled again.
  int acc_e_samples = 0;
  int panel_pairs = 0;
  int patch_pairs = 0;
  int curve_pairs = 0;
};

nlohmann::json to_json(const MetricReport& r);
MetricReport report_from_json(const nlohmann::json& j);

/// Valid patches and curves matched by symmetric Chamfer + Hungarian; panels
/// inherit the patch matching.
ElementMatchings match_elements(const GarmentStructure& pred, const GarmentStructure& gt);

/// Pixel IoU of two panels with their loops implicitly closed (metric units).
double panel_iou(const Panel& pred, const Panel& gt, int resolution);

Losses compute_losses(const GarmentStructure& pred, const GarmentStructure& gt, const ElementMatchings& m,
                      const MetricConfig& cfg);

/// loss_cls reported when every prediction is correct with probability 0/1:
/// each non-empty BCE group contributes -log(1 - kBceClamp).
double clamp_floor_loss_cls(const GarmentStructure& pred, const MetricConfig& cfg);

MetricReport evaluate(const GarmentStructure& pred, const GarmentStructure& gt, const MetricConfig& cfg = {});

double overall_accuracy(double acc_p, double acc_e);

/// Pools reports: accuracies weighted by the samples where they are defined,
/// CDs/IoU by matched pairs, losses by samples; acc_o = acc_p * acc_e.
MetricReport aggregate(std::span<const MetricReport> reports);

struct SampleReport {
  std::string name;
  std::optional<MetricReport> report;
  std::string error;
};

struct CorpusReport {
  std::vector<SampleReport> samples;  // sorted by name
  MetricReport aggregate;
  std::vector<std::string> missing;   // files present on one side only
  bool complete() const;
};

/// Pairs `*.json` files by name; samples are evaluated in parallel and
/// reduced in name order.
CorpusReport evaluate_corpus(const std::filesystem::path& pred_dir, const std::filesystem::path& gt_dir,
                             const MetricConfig& cfg = {});

nlohmann::json to_json(const CorpusReport& r);
std::string format_table(const CorpusReport& r);

}  // namespace seamkit
