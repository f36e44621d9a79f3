#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "seamkit/loop_order.hpp"
#include "seamkit/pattern_model.hpp"

namespace seamkit {

struct GeometryParams {
  double tau_gap = 3.0;
  std::pair<double, double> scale_clamp{0.5, 2.0};
  double closure_tol = 1e-6;  // normalized units
  std::size_t edge_samples = kEdgeSamples;
  std::size_t brute_force_limit = kDefaultBruteForceLimit;

  void validate() const;
};

/// p -> scale * R(angle) * p + translation.
struct Similarity2D {
  double scale = 1.0;
  double angle = 0.0;  // radians, counter-clockwise
  Point2 translation;
  bool clamped = false;

  /// Linear part as a complex multiplier scale * e^{i angle}.
  std::complex<double> multiplier() const { return std::polar(scale, angle); }
  Point2 apply(Point2 p) const;
  /// 2x2 rotation matrix, row-major.
  std::array<double, 4> rotation() const;
};

/// Edge positions whose normalized joint gap (gap_in + gap_out) / chord
/// exceeds tau_gap. Chords shorter than 1e-12 are always flagged.
std::vector<int> detect_bad_edges(std::span<const Edge2D> loop, const GeometryParams& g = {});

/// Straight segment from the previous edge's end to the next edge's start,
/// sampled with `samples` points (wrapping around the loop).
std::vector<Edge2D> replace_bad_edge(std::vector<Edge2D> loop, int index, std::size_t samples = kEdgeSamples);

/// The similarity taking src_start -> dst_start and src_end -> dst_end, with
/// its scale clamped to g.scale_clamp. When clamped, the start correspondence
/// stays exact and the end carries the residual. Throws DegenerateEdgeError
/// for a source segment shorter than 1e-12.
Similarity2D fit_similarity_2pt(Point2 src_start, Point2 src_end, Point2 dst_start, Point2 dst_end,
                                const GeometryParams& g = {}, int edge_index = -1);

struct SnapResult {
  std::vector<Edge2D> loop;
  std::vector<Similarity2D> transforms;
  double closure_residual = 0.0;  // largest end->next-start gap afterwards
};

/// Maps every edge onto the midpoints of its two joints (targets frozen from
/// the input loop, all edges moved simultaneously).
SnapResult snap_edges_to_joints(std::span<const Edge2D> loop, const GeometryParams& g = {});

/// Largest gap between an edge's end and the next edge's start.
double closure_residual(std::span<const Edge2D> loop);

struct PanelGeometryReport {
  int patch_id = 0;
  std::vector<int> replaced_edges;  // loop positions
  double closure_residual = 0.0;
  bool closed = false;
  bool clamped = false;
  bool degenerate = false;
};

/// Orders one panel's edges, replaces bad edges, snaps to joint midpoints.
/// Edges come back in traversal order with an identity loop order.
Panel refine_panel_geometry(const Panel& p, const GeometryParams& g, PanelGeometryReport* report = nullptr);

/// Panels are refined independently (OpenMP over panels).
GarmentStructure refine_geometry(const GarmentStructure& s, const GeometryParams& g = {},
                                 std::vector<PanelGeometryReport>* reports = nullptr);

}  // namespace seamkit
