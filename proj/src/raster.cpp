#include "seamkit/raster.hpp"

#include <algorithm>
#include <cmath>

#include "seamkit/errors.hpp"

namespace seamkit {

Point2 RasterFrame::pixel_center(int row, int col) const {
  const double px = pixel_size();
  return {center.x - half_extent + (col + 0.5) * px, center.y - half_extent + (row + 0.5) * px};
}

Point2 area_centroid(std::span<const Point2> ring) {
  const std::size_t n = ring.size();
  if (n == 0) return {};
  double a = 0.0, cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 p = ring[i];
    const Point2 q = ring[(i + 1) % n];
    const double w = p.x * q.y - q.x * p.y;
    a += w;
    cx += (p.x + q.x) * w;
    cy += (p.y + q.y) * w;
  }
  if (std::abs(a) < 1e-300) {
    Point2 m;
    for (const Point2& p : ring) m = m + p;
    return (1.0 / static_cast<double>(n)) * m;
  }
  return {cx / (3.0 * a), cy / (3.0 * a)};
}

RasterFrame shared_frame(std::span<const Point2> a, std::span<const Point2> b, int resolution) {
  RasterFrame f;
  f.resolution = resolution;
  f.center = 0.5 * (area_centroid(a) + area_centroid(b));
  double half = 0.0;
  for (auto ring : {a, b})
    for (const Point2& p : ring) half = std::max({half, std::abs(p.x - f.center.x), std::abs(p.y - f.center.y)});
  f.half_extent = half > 0.0 ? 1.05 * half : 1.0;
  return f;
}

std::vector<std::uint8_t> rasterize(std::span<const Point2> ring, const RasterFrame& frame) {
  const int res = frame.resolution;
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(res) * static_cast<std::size_t>(res), 0);
  const std::size_t n = ring.size();
  if (n < 3) return mask;

#pragma omp parallel for schedule(static)
  for (int row = 0; row < res; ++row) {
    const double y = frame.pixel_center(row, 0).y;
    std::vector<double> xs;
    for (std::size_t i = 0; i < n; ++i) {
      const Point2 p = ring[i];
      const Point2 q = ring[(i + 1) % n];
      if ((p.y > y) != (q.y > y)) xs.push_back(p.x + (y - p.y) * (q.x - p.x) / (q.y - p.y));
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
      // Pixel centers strictly between the crossing pair.
      const double px = frame.pixel_size();
      const double x0 = frame.center.x - frame.half_extent;
      int c0 = static_cast<int>(std::ceil((xs[k] - x0) / px - 0.5));
      int c1 = static_cast<int>(std::floor((xs[k + 1] - x0) / px - 0.5));
      c0 = std::max(c0, 0);
      c1 = std::min(c1, res - 1);
      for (int c = c0; c <= c1; ++c) {
        const double x = frame.pixel_center(row, c).x;
        if (x > xs[k] && x < xs[k + 1]) mask[static_cast<std::size_t>(row) * static_cast<std::size_t>(res) + static_cast<std::size_t>(c)] = 1;
      }
    }
  }
  return mask;
}

namespace {

double mask_iou(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    inter += static_cast<std::size_t>(a[i] & b[i]);
    uni += static_cast<std::size_t>(a[i] | b[i]);
  }
  return uni ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
}

}  // namespace

double polygon_iou(std::span<const Point2> a, std::span<const Point2> b, int resolution) {
  const RasterFrame f = shared_frame(a, b, resolution);
  return mask_iou(rasterize(a, f), rasterize(b, f));
}

std::vector<Point2> metric_ring(const Panel& p) {
  std::vector<Point2> ring;
  for (const Edge2D& e : traversal_edges(p)) {
    for (std::size_t k = 0; k + 1 < e.points.size(); ++k) ring.push_back(p.scale * e.points[k]);
  }
  return ring;
}

double rasterize_panel_pair(const Panel& pred, const Panel& gt, int resolution, double closure_tol) {
  for (const Panel* p : {&pred, &gt}) {
    const auto loop = traversal_edges(*p);
    if (loop.empty()) throw OpenBoundaryError("rasterize: panel has no boundary", 0.0);
    double worst = 0.0;
    for (std::size_t j = 0; j < loop.size(); ++j)
      worst = std::max(worst, distance(loop[j].end(), loop[(j + 1) % loop.size()].start()));
    if (worst > closure_tol) throw OpenBoundaryError("rasterize: open boundary, gap " + std::to_string(worst), worst);
  }
  const auto a = metric_ring(pred);
  const auto b = metric_ring(gt);
  return polygon_iou(a, b, resolution);
}

namespace reference {

std::vector<std::uint8_t> rasterize(std::span<const Point2> ring, const RasterFrame& frame) {
  const int res = frame.resolution;
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(res) * static_cast<std::size_t>(res), 0);
  const std::size_t n = ring.size();
  if (n < 3) return mask;
  for (int row = 0; row < res; ++row) {
    for (int col = 0; col < res; ++col) {
      const Point2 c = frame.pixel_center(row, col);
      bool inside = false;
      for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point2 p = ring[i];
        const Point2 q = ring[j];
        if ((p.y > c.y) != (q.y > c.y) && c.x < p.x + (c.y - p.y) * (q.x - p.x) / (q.y - p.y)) inside = !inside;
      }
      mask[static_cast<std::size_t>(row) * static_cast<std::size_t>(res) + static_cast<std::size_t>(col)] = inside;
    }
  }
  return mask;
}

double polygon_iou(std::span<const Point2> a, std::span<const Point2> b, int resolution) {
  const RasterFrame f = shared_frame(a, b, resolution);
  return mask_iou(reference::rasterize(a, f), reference::rasterize(b, f));
}

}  // namespace reference

}  // namespace seamkit
