#pragma once

#include <span>
#include <vector>

#include "seamkit/pattern_model.hpp"

namespace seamkit {

/// Shared pixel frame for a pair of polygons: centered on the midpoint of the
/// two area centroids, square, fitting both with a 5% margin.
struct RasterFrame {
  Point2 center;
  double half_extent = 1.0;
  int resolution = 256;

  double pixel_size() const { return 2.0 * half_extent / resolution; }
  Point2 pixel_center(int row, int col) const;
};

Point2 area_centroid(std::span<const Point2> ring);
RasterFrame shared_frame(std::span<const Point2> a, std::span<const Point2> b, int resolution);

/// Even-odd scanline fill of a ring on `frame`; row-major 0/1 mask.
/// Rows are filled in parallel.
std::vector<std::uint8_t> rasterize(std::span<const Point2> ring, const RasterFrame& frame);

/// Filled-pixel intersection over union of two rings (implicitly closed).
double polygon_iou(std::span<const Point2> a, std::span<const Point2> b, int resolution);

/// Panel boundary as a ring in metric coordinates, traversal order.
std::vector<Point2> metric_ring(const Panel& p);

/// IoU of two panels in metric units. Throws OpenBoundaryError if either
/// boundary has a joint gap above `closure_tol` (normalized units).
double rasterize_panel_pair(const Panel& pred, const Panel& gt, int resolution = 256, double closure_tol = 1e-6);

namespace reference {
/// Per-pixel crossing-number test, serial.
std::vector<std::uint8_t> rasterize(std::span<const Point2> ring, const RasterFrame& frame);
double polygon_iou(std::span<const Point2> a, std::span<const Point2> b, int resolution);
}  // namespace reference

}  // namespace seamkit
