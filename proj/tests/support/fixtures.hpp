// Small hand-built structures shared by the unit tests.
#pragma once

#include <random>
#include <vector>

#include "seamkit/pattern_model.hpp"

namespace fixture {

using seamkit::Point2;
using seamkit::Point3;

inline seamkit::Edge2D line_edge(Point2 a, Point2 b, int curve_id = 0, std::size_t n = 2) {
  seamkit::Edge2D e;
  e.source_curve_id = curve_id;
  for (std::size_t k = 0; k < n; ++k) e.points.push_back(seamkit::lerp(a, b, static_cast<double>(k) / static_cast<double>(n - 1)));
  e.points.front() = a;
  e.points.back() = b;
  return e;
}

// Counter-clockwise square [x0, x0+side]^2, one edge per side.
inline std::vector<seamkit::Edge2D> square_edges(double side = 1.0, Point2 origin = {0, 0}, std::size_t n = 2,
                                                 int first_id = 0) {
  const Point2 a = origin, b = origin + Point2{side, 0}, c = origin + Point2{side, side}, d = origin + Point2{0, side};
  return {line_edge(a, b, first_id, n), line_edge(b, c, first_id + 1, n), line_edge(c, d, first_id + 2, n),
          line_edge(d, a, first_id + 3, n)};
}

inline seamkit::Curve3D line_curve(int id, Point3 a, Point3 b, std::size_t n = 50, double prob = 1.0) {
  seamkit::Curve3D c;
  c.id = id;
  c.validity_prob = prob;
  for (std::size_t k = 0; k < n; ++k) c.points.push_back(seamkit::lerp(a, b, static_cast<double>(k) / static_cast<double>(n - 1)));
  return c;
}

// Flat G x G grid of side `size` in the z = 0 plane.
inline seamkit::Patch3D flat_patch(int id, double size = 1.0, int grid = seamkit::kPatchGrid, Point3 origin = {},
                                   double prob = 1.0) {
  seamkit::Patch3D p;
  p.id = id;
  p.grid_size = grid;
  p.validity_prob = prob;
  for (int r = 0; r < grid; ++r)
    for (int c = 0; c < grid; ++c)
      p.points.push_back(origin + Point3{size * c / (grid - 1), size * r / (grid - 1), 0.0});
  return p;
}

// One square panel (side 1 m) with its four boundary curves, ground truth.
inline seamkit::GarmentStructure square_structure(std::size_t samples = 50) {
  seamkit::GarmentStructure s;
  s.stage = seamkit::Stage::GroundTruth;
  s.add_patch(flat_patch(0));
  const Point3 v[4] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}};
  for (int k = 0; k < 4; ++k) {
    const std::size_t ci = s.add_curve(line_curve(k, v[k], v[(k + 1) % 4], samples));
    s.connectivity(0, ci) = 1.0;
  }
  seamkit::Panel p;
  p.patch_id = 0;
  p.scale = 0.5;
  p.edges = square_edges(2.0, {-1, -1}, samples);
  s.panels.push_back(p);
  return s;
}

template <typename P>
std::vector<P> random_points(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<P> out(n);
  for (P& p : out) {
    p.x = u(rng);
    p.y = u(rng);
    if constexpr (P::kDim == 3) p.z = u(rng);
  }
  return out;
}

}  // namespace fixture
