#include "seamkit/triangulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "seamkit/errors.hpp"

namespace seamkit {

namespace {

double orient(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }

int sign(double v) { return (v > 0.0) - (v < 0.0); }

bool on_segment(Point2 a, Point2 b, Point2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

// Closed-segment intersection test (touching counts).
bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
  if (std::max(a.x, b.x) < std::min(c.x, d.x) || std::max(c.x, d.x) < std::min(a.x, b.x) ||
      std::max(a.y, b.y) < std::min(c.y, d.y) || std::max(c.y, d.y) < std::min(a.y, b.y))
    return false;
  const int o1 = sign(orient(a, b, c));
  const int o2 = sign(orient(a, b, d));
  const int o3 = sign(orient(c, d, a));
  const int o4 = sign(orient(c, d, b));
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

bool inside_or_on(Point2 a, Point2 b, Point2 c, Point2 p) {
  return orient(a, b, p) >= 0.0 && orient(b, c, p) >= 0.0 && orient(c, a, p) >= 0.0;
}

struct Ring {
  std::vector<Point2> pts;
  std::vector<int> owner;  // edge that segment pts[k] -> pts[k+1] belongs to
};

// Drops repeated samples and vertices where the boundary runs straight on.
void simplify(Ring& ring) {
  auto scale = [&] {
    double s = 0.0;
    for (const Point2& p : ring.pts) s = std::max({s, std::abs(p.x), std::abs(p.y)});
    return s > 0.0 ? s : 1.0;
  }();
  const double dup_tol = 1e-12 * scale;

  bool changed = true;
  while (changed && ring.pts.size() >= 3) {
    changed = false;
    const std::size_t n = ring.pts.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point2 prev = ring.pts[(i + n - 1) % n];
      const Point2 cur = ring.pts[i];
      const Point2 next = ring.pts[(i + 1) % n];
      const Point2 u = cur - prev;
      const Point2 v = next - cur;
      const bool duplicate = distance(prev, cur) <= dup_tol;
      const double lu = std::sqrt(dot(u, u));
      const double lv = std::sqrt(dot(v, v));
      const bool straight = !duplicate && lu > 0.0 && lv > 0.0 && std::abs(cross(u, v)) <= 1e-12 * lu * lv &&
                            dot(u, v) > 0.0;
      if (duplicate || straight) {
        ring.pts.erase(ring.pts.begin() + static_cast<std::ptrdiff_t>(i));
        // The merged segment keeps the owner of the segment that led into it.
        ring.owner.erase(ring.owner.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;
      }
    }
  }
}

}  // namespace

double PanelMesh::area() const {
  double a = 0.0;
  for (const auto& t : triangles) {
    a += 0.5 * orient(vertices[static_cast<std::size_t>(t[0])], vertices[static_cast<std::size_t>(t[1])],
                      vertices[static_cast<std::size_t>(t[2])]);
  }
  return a;
}

PanelMesh triangulate_ring(std::vector<Point2> ring) {
  PanelMesh mesh;
  if (ring.size() < 3) throw ValidationError("triangulate: fewer than 3 boundary vertices");
  if (shoelace_area(ring) < 0.0) std::reverse(ring.begin(), ring.end());
  mesh.vertices = ring;

  const std::size_t n = ring.size();
  std::vector<int> prev(n), next(n);
  for (std::size_t i = 0; i < n; ++i) {
    prev[i] = static_cast<int>((i + n - 1) % n);
    next[i] = static_cast<int>((i + 1) % n);
  }

  auto is_ear = [&](int i) {
    const Point2 a = ring[static_cast<std::size_t>(prev[static_cast<std::size_t>(i)])];
    const Point2 b = ring[static_cast<std::size_t>(i)];
    const Point2 c = ring[static_cast<std::size_t>(next[static_cast<std::size_t>(i)])];
    if (orient(a, b, c) <= 0.0) return false;
    for (int k = next[static_cast<std::size_t>(next[static_cast<std::size_t>(i)])];
         k != prev[static_cast<std::size_t>(i)]; k = next[static_cast<std::size_t>(k)]) {
      const Point2 p = ring[static_cast<std::size_t>(k)];
      if (p == a || p == b || p == c) continue;
      if (inside_or_on(a, b, c, p)) return false;
    }
    return true;
  };

  std::size_t remaining = n;
  int cur = 0;
  std::size_t stalled = 0;
  while (remaining > 3) {
    if (is_ear(cur)) {
      const int p = prev[static_cast<std::size_t>(cur)];
      const int q = next[static_cast<std::size_t>(cur)];
      mesh.triangles.push_back({p, cur, q});
      next[static_cast<std::size_t>(p)] = q;
      prev[static_cast<std::size_t>(q)] = p;
      --remaining;
      stalled = 0;
      cur = p;
    } else {
      cur = next[static_cast<std::size_t>(cur)];
      if (++stalled > remaining) throw Error("triangulate: no ear found; boundary is not a simple polygon");
    }
  }
  const int p = prev[static_cast<std::size_t>(cur)];
  const int q = next[static_cast<std::size_t>(cur)];
  if (orient(ring[static_cast<std::size_t>(p)], ring[static_cast<std::size_t>(cur)], ring[static_cast<std::size_t>(q)]) > 0.0)
    mesh.triangles.push_back({p, cur, q});
  return mesh;
}

PanelMesh triangulate_panel(const Panel& panel, double closure_tol) {
  const std::vector<Edge2D> loop = traversal_edges(panel);
  if (loop.empty()) throw ValidationError("triangulate: panel has no edges");

  double worst = 0.0;
  for (std::size_t j = 0; j < loop.size(); ++j)
    worst = std::max(worst, distance(loop[j].end(), loop[(j + 1) % loop.size()].start()));
  if (worst > closure_tol) throw OpenBoundaryError("triangulate: open boundary, gap " + std::to_string(worst), worst);

  Ring ring;
  for (std::size_t j = 0; j < loop.size(); ++j) {
    const auto& pts = loop[j].points;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      ring.pts.push_back(pts[k]);
      ring.owner.push_back(static_cast<int>(j));
    }
  }
  simplify(ring);
  const std::size_t n = ring.pts.size();
  if (n < 3) throw ValidationError("triangulate: boundary collapses to fewer than 3 vertices");

  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = ring.pts[i];
    const Point2 b = ring.pts[(i + 1) % n];
    for (std::size_t k = i + 2; k < n; ++k) {
      if (i == 0 && k == n - 1) continue;  // adjacent through the wrap
      const Point2 c = ring.pts[k];
      const Point2 d = ring.pts[(k + 1) % n];
      if (segments_intersect(a, b, c, d)) {
        throw SelfIntersectionError("triangulate: boundary edges " + std::to_string(ring.owner[i]) + " and " +
                                        std::to_string(ring.owner[k]) + " intersect",
                                    ring.owner[i], ring.owner[k]);
      }
    }
  }
  return triangulate_ring(std::move(ring.pts));
}

}  // namespace seamkit
