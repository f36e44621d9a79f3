#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace seamkit {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  static constexpr int kDim = 2;
  constexpr double operator[](int k) const { return k == 0 ? x : y; }
  friend constexpr bool operator==(const Point2&, const Point2&) = default;
};

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  static constexpr int kDim = 3;
  constexpr double operator[](int k) const { return k == 0 ? x : (k == 1 ? y : z); }
  friend constexpr bool operator==(const Point3&, const Point3&) = default;
};

constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
constexpr Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
constexpr Point3 operator+(Point3 a, Point3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
constexpr Point3 operator-(Point3 a, Point3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
constexpr Point3 operator*(double s, Point3 a) { return {s * a.x, s * a.y, s * a.z}; }

constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
constexpr double dot(Point3 a, Point3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }

// Squared distance summed in coordinate order; the Chamfer kernels and their
// reference implementations rely on this exact evaluation order.
template <typename P>
constexpr double squared_distance(const P& a, const P& b) {
  double s = 0.0;
  for (int k = 0; k < P::kDim; ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

template <typename P>
double distance(const P& a, const P& b) {
  return std::sqrt(squared_distance(a, b));
}

template <typename P>
constexpr P lerp(const P& a, const P& b, double t) {
  return a + t * (b - a);
}

inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }
inline bool is_finite(Point3 p) {
  return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
}

template <typename P>
double polyline_length(std::span<const P> pts) {
  double len = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) len += distance(pts[i - 1], pts[i]);
  return len;
}

/// Signed shoelace area; positive for counter-clockwise rings. The ring is
/// implicitly closed.
inline double shoelace_area(std::span<const Point2> ring) {
  const std::size_t n = ring.size();
  if (n < 3) return 0.0;
  double a = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& p = ring[i];
    const Point2& q = ring[(i + 1) % n];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * a;
}

/// Uniform arc-length resampling of a polyline into `n` points. Endpoints are
/// copied exactly. A zero-length input yields `n` copies of its first point.
template <typename P>
std::vector<P> resample_polyline(std::span<const P> pts, std::size_t n) {
  std::vector<P> out;
  if (pts.empty() || n == 0) return out;
  out.reserve(n);
  if (n == 1) {
    out.push_back(pts.front());
    return out;
  }

  std::vector<double> cum(pts.size(), 0.0);
  for (std::size_t i = 1; i < pts.size(); ++i) cum[i] = cum[i - 1] + distance(pts[i - 1], pts[i]);
  const double total = cum.back();
  if (!(total > 0.0)) {
    out.assign(n, pts.front());
    return out;
  }

  out.push_back(pts.front());
  std::size_t seg = 1;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double target = total * static_cast<double>(k) / static_cast<double>(n - 1);
    while (seg + 1 < pts.size() && cum[seg] < target) ++seg;
    const double seg_len = cum[seg] - cum[seg - 1];
    const double t = seg_len > 0.0 ? (target - cum[seg - 1]) / seg_len : 0.0;
    out.push_back(lerp(pts[seg - 1], pts[seg], t));
  }
  out.push_back(pts.back());
  return out;
}

}  // namespace seamkit
