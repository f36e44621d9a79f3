#pragma once

#include <array>
#include <vector>

#include "seamkit/pattern_model.hpp"

namespace seamkit {

struct PanelMesh {
  std::vector<Point2> vertices;
  std::vector<std::array<int, 3>> triangles;  // counter-clockwise

  double area() const;
};

/// Ear-clipping triangulation of the panel's closed boundary (edges taken in
/// traversal order). Duplicate and collinear boundary samples are dropped.
/// Throws OpenBoundaryError when a joint gap exceeds `closure_tol` and
/// SelfIntersectionError when two boundary segments cross.
PanelMesh triangulate_panel(const Panel& p, double closure_tol = 1e-6);

/// Ear clipping of a simple polygon given as a ring (implicitly closed).
PanelMesh triangulate_ring(std::vector<Point2> ring);

}  // namespace seamkit
