#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "seamkit/geometry.hpp"

namespace seamkit {

/// Samples per 2D edge and per 3D curve.
inline constexpr std::size_t kEdgeSamples = 50;
inline constexpr std::size_t kCurveSamples = 50;
/// Default patch grid resolution (G x G).
inline constexpr int kPatchGrid = 20;

enum class Stage { Raw, TopologyRefined, GeometryRefined, GroundTruth };

std::string_view to_string(Stage stage);
Stage stage_from_string(std::string_view name);

/// Sampled 3D seam polyline.
struct Curve3D {
  int id = 0;
  std::vector<Point3> points;
  double validity_prob = 1.0;
};

/// G x G grid of 3D surface samples in row-major (u, v) order.
struct Patch3D {
  int id = 0;
  int grid_size = kPatchGrid;
  std::vector<Point3> points;
  double validity_prob = 1.0;

  const Point3& at(int row, int col) const { return points[static_cast<std::size_t>(row * grid_size + col)]; }
};

/// One flattened boundary edge of a panel, in panel-normalized coordinates.
/// `reversed` records whether the points run opposite to the source curve.
struct Edge2D {
  int source_curve_id = 0;
  std::vector<Point2> points;
  bool reversed = false;

  const Point2& start() const { return points.front(); }
  const Point2& end() const { return points.back(); }
  Edge2D flipped() const;
};

/// Traversal of a panel's edges: edges[order[k]] is visited k-th, reversed
/// when flips[k] is set.
struct LoopOrder {
  std::vector<int> order;
  std::vector<bool> flips;

  static LoopOrder identity(std::size_t n);
  bool is_identity() const;
};

struct Panel {
  int patch_id = 0;
  std::vector<Edge2D> edges;
  double scale = 1.0;
  std::optional<LoopOrder> loop_order;
  /// Largest endpoint gap between consecutive edges after geometry refinement.
  std::optional<double> closure_residual;
};

/// Dense patch x curve incidence matrix, row-major.
class Connectivity {
 public:
  Connectivity() = default;
  Connectivity(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  const std::vector<double>& values() const { return values_; }

  void add_row(double fill = 0.0);
  void add_col(double fill = 0.0);

  friend bool operator==(const Connectivity&, const Connectivity&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

/// Binary validity per patch and per curve.
struct ValidityMasks {
  std::vector<std::uint8_t> patches;
  std::vector<std::uint8_t> curves;
};

/// Hidden provenance written by the corruptor: index of the ground-truth
/// element each raw element came from (-1 when injected) and a short label.
struct Annotations {
  std::vector<int> curve_origin;
  std::vector<std::string> curve_kind;
  std::vector<int> patch_origin;
  std::vector<std::string> patch_kind;
};

struct GarmentStructure {
  Stage stage = Stage::Raw;
  std::vector<Curve3D> curves;
  std::vector<Patch3D> patches;
  Connectivity connectivity;
  std::vector<Panel> panels;
  std::optional<ValidityMasks> masks;
  std::optional<Annotations> annotations;

  std::optional<std::size_t> patch_index(int id) const;
  std::optional<std::size_t> curve_index(int id) const;
  bool patch_valid(std::size_t i) const { return !masks || masks->patches[i] != 0; }
  bool curve_valid(std::size_t i) const { return !masks || masks->curves[i] != 0; }

  /// Appends an element and grows the connectivity matrix with a zero row/column.
  std::size_t add_patch(Patch3D patch);
  std::size_t add_curve(Curve3D curve);
};

/// Throws ValidationError naming the first violated invariant.
void validate(const GarmentStructure& s);

/// Copy of `gt` presented as a raw prediction: stage Raw, masks dropped.
GarmentStructure as_raw(const GarmentStructure& gt);

/// Edges of `p` in traversal order with flips applied.
std::vector<Edge2D> traversal_edges(const Panel& p);

struct ResampledCurve {
  Curve3D curve;
  bool degenerate = false;
};

/// Resamples `c` into `n` points walked along the polyline with a common
/// chord length, so consecutive output points are equally spaced and the
/// output is a fixed point of the operation. Endpoints are copied exactly.
/// On straight or densely sampled curves this coincides with uniform
/// arc-length sampling.
ResampledCurve resample_curve(const Curve3D& c, std::size_t n);

/// Average 3D distance between horizontally and vertically adjacent grid points.
double mean_neighbor_spacing(const Patch3D& p);
int adaptive_stride(const Patch3D& p, double target_spacing);
std::vector<Point3> sample_patch_adaptive(const Patch3D& p, double target_spacing);

/// Edges scaled into metric units.
std::vector<Edge2D> denormalize_panel(const Panel& p);

/// Subtracts the mean of all boundary samples and divides by the largest
/// absolute coordinate. Returns that divisor (the panel scale).
double normalize_edges(std::vector<Edge2D>& edges);

/// Concatenated boundary samples of a panel.
std::vector<Point2> boundary_points(const Panel& p);

}  // namespace seamkit
