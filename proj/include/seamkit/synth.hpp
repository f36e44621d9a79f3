#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "seamkit/pattern_model.hpp"

namespace seamkit {

enum class Template { RectPanel, Trapezoid, ArcHemSkirt, MultiPanelTube };

inline constexpr Template kAllTemplates[] = {Template::RectPanel, Template::Trapezoid, Template::ArcHemSkirt,
                                            Template::MultiPanelTube};

std::string_view to_string(Template t);
/// Accepts "rect", "trapezoid", "skirt", "tube".
Template template_from_string(std::string_view name);

/// Shortest edge a generated panel may have (meters); panels are enlarged
/// uniformly to respect it.
inline constexpr double kMinEdgeLength = 0.15;

struct TemplateSpec {
  Template tmpl = Template::RectPanel;
  int panel_count = 3;
  std::pair<int, int> edge_count_range{4, 6};
  /// Half-extent of a panel, meters; also the resulting panel scale.
  std::pair<double, double> scale_range{0.2, 0.6};
  std::uint64_t seed = 0;

  void validate() const;
};

struct CorruptionSpec {
  double duplicate_curve_prob = 0.3;
  double duplicate_jitter = 0.01;  // meters
  double subcurve_prob = 0.2;
  double spurious_edge_prob = 0.2;
  double endpoint_jitter_sigma = 0.02;  // normalized units
  double prob_noise_sigma = 0.05;
  /// Chance per ground-truth patch / curve of a low-probability ghost copy.
  double drop_prob = 0.1;
  /// Chance per panel that its edges are shuffled and randomly flipped.
  double edge_shuffle_prob = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
  /// Every rate and sigma at zero.
  static CorruptionSpec none();
};

/// Ground-truth structure: closed CCW panels normalized to [-1, 1]^2, curves
/// and patch grids lifted to 3D (planar offset per panel, or a cylinder wrap
/// with shared side seams for the tube), exact connectivity, probabilities 1.
GarmentStructure generate(const TemplateSpec& spec);

/// Raw prediction simulated from `gt`. Annotations record which ground-truth
/// element every raw element came from.
GarmentStructure corrupt(const GarmentStructure& gt, const CorruptionSpec& c);

/// splitmix64 of seed and index; per-sample seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

struct CorpusSpec {
  /// Unset = cycle through all templates by sample index.
  std::optional<Template> tmpl = Template::RectPanel;
  TemplateSpec base;
  CorruptionSpec corruption;
  int count = 10;
};

struct CorpusSample {
  std::string name;  // file stem, e.g. "007"
  TemplateSpec tmpl;
  CorruptionSpec corruption;
  GarmentStructure gt;
  GarmentStructure raw;
};

std::string sample_name(int index, int count);
CorpusSample make_sample(const CorpusSpec& spec, int index);
nlohmann::json manifest(const CorpusSpec& spec);

}  // namespace seamkit
