#include "seamkit/pattern_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_set>

#include "seamkit/errors.hpp"

namespace seamkit {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ValidationError(msg); }

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

// Walks `pts` placing up to `steps` points, each the first point further
// along the polyline at distance `d` from the previous one. Returns how many
// were placed; they are appended to `out` when it is non-null.
std::size_t chord_walk(std::span<const Point3> pts, double d, std::size_t steps, std::vector<Point3>* out) {
  Point3 q = pts.front();
  Point3 a = q;
  std::size_t seg = 1;
  std::size_t placed = 0;
  while (placed < steps && seg < pts.size()) {
    const Point3 dir = pts[seg] - a;
    const Point3 off = a - q;
    const double qa = dot(dir, dir);
    const double qb = dot(off, dir);
    const double qc = dot(off, off) - d * d;
    double u = 2.0;
    if (qa > 0.0) {
      const double disc = std::max(0.0, qb * qb - qa * qc);
      u = (-qb + std::sqrt(disc)) / qa;
    }
    if (u <= 1.0) {
      q = a + std::max(0.0, u) * dir;
      a = q;
      ++placed;
      if (out) out->push_back(q);
    } else {
      a = pts[seg];
      ++seg;
    }
  }
  return placed;
}

std::vector<Point3> equal_chord_resample(std::span<const Point3> pts, std::size_t n) {
  const double total = polyline_length(pts);
  if (!(total > 0.0)) return std::vector<Point3>(n, pts.front());
  if (n == 2) return {pts.front(), pts.back()};
  // Chords never exceed the arc they span, so total / (n - 1) bounds d.
  double lo = 0.0;
  double hi = total / static_cast<double>(n - 1) * (1.0 + 1e-12);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (chord_walk(pts, mid, n - 1, nullptr) == n - 1 ? lo : hi) = mid;
  }
  std::vector<Point3> out{pts.front()};
  chord_walk(pts, lo, n - 2, &out);
  out.resize(n - 1, pts.back());  // only short when the walk turned back on itself
  out.push_back(pts.back());
  return out;
}

}  // namespace

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::Raw: return "raw";
    case Stage::TopologyRefined: return "topology_refined";
    case Stage::GeometryRefined: return "geometry_refined";
    case Stage::GroundTruth: return "ground_truth";
  }
  return "raw";
}

Stage stage_from_string(std::string_view name) {
  if (name == "raw") return Stage::Raw;
  if (name == "topology_refined") return Stage::TopologyRefined;
  if (name == "geometry_refined") return Stage::GeometryRefined;
  if (name == "ground_truth") return Stage::GroundTruth;
  throw ValidationError("unknown stage '" + std::string(name) + "'");
}

Edge2D Edge2D::flipped() const {
  Edge2D e = *this;
  std::reverse(e.points.begin(), e.points.end());
  e.reversed = !reversed;
  return e;
}

LoopOrder LoopOrder::identity(std::size_t n) {
  LoopOrder lo;
  lo.order.resize(n);
  std::iota(lo.order.begin(), lo.order.end(), 0);
  lo.flips.assign(n, false);
  return lo;
}

bool LoopOrder::is_identity() const {
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (order[k] != static_cast<int>(k) || flips[k]) return false;
  }
  return true;
}

void Connectivity::add_row(double fill) {
  values_.insert(values_.end(), cols_, fill);
  ++rows_;
}

void Connectivity::add_col(double fill) {
  std::vector<double> grown;
  grown.reserve(rows_ * (cols_ + 1));
  for (std::size_t r = 0; r < rows_; ++r) {
    grown.insert(grown.end(), values_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                 values_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
    grown.push_back(fill);
  }
  values_ = std::move(grown);
  ++cols_;
}

std::optional<std::size_t> GarmentStructure::patch_index(int id) const {
  for (std::size_t i = 0; i < patches.size(); ++i)
    if (patches[i].id == id) return i;
  return std::nullopt;
}

std::optional<std::size_t> GarmentStructure::curve_index(int id) const {
  for (std::size_t i = 0; i < curves.size(); ++i)
    if (curves[i].id == id) return i;
  return std::nullopt;
}

std::size_t GarmentStructure::add_patch(Patch3D patch) {
  patches.push_back(std::move(patch));
  connectivity.add_row();
  if (masks) masks->patches.push_back(1);
  return patches.size() - 1;
}

std::size_t GarmentStructure::add_curve(Curve3D curve) {
  curves.push_back(std::move(curve));
  connectivity.add_col();
  if (masks) masks->curves.push_back(1);
  return curves.size() - 1;
}

void validate(const GarmentStructure& s) {
  std::unordered_set<int> curve_ids;
  for (const Curve3D& c : s.curves) {
    const std::string tag = "curve " + std::to_string(c.id);
    if (!curve_ids.insert(c.id).second) fail("duplicate " + tag);
    if (c.points.size() < 2) fail(tag + ": fewer than 2 points");
    if (!std::all_of(c.points.begin(), c.points.end(), [](Point3 p) { return is_finite(p); }))
      fail(tag + ": non-finite coordinate");
    if (std::all_of(c.points.begin(), c.points.end(), [&](Point3 p) { return p == c.points.front(); }))
      fail(tag + ": all points coincide");
    if (!is_probability(c.validity_prob)) fail(tag + ": validity_prob outside [0,1]");
  }

  std::unordered_set<int> patch_ids;
  for (const Patch3D& p : s.patches) {
    const std::string tag = "patch " + std::to_string(p.id);
    if (!patch_ids.insert(p.id).second) fail("duplicate " + tag);
    if (p.grid_size < 2) fail(tag + ": grid_size < 2");
    if (p.points.size() != static_cast<std::size_t>(p.grid_size) * static_cast<std::size_t>(p.grid_size))
      fail(tag + ": point count does not match grid_size^2");
    if (!std::all_of(p.points.begin(), p.points.end(), [](Point3 q) { return is_finite(q); }))
      fail(tag + ": non-finite coordinate");
    if (!is_probability(p.validity_prob)) fail(tag + ": validity_prob outside [0,1]");
  }

  const Connectivity& conn = s.connectivity;
  if (conn.rows() != s.patches.size() || conn.cols() != s.curves.size())
    fail("connectivity is " + std::to_string(conn.rows()) + "x" + std::to_string(conn.cols()) +
         " but structure has " + std::to_string(s.patches.size()) + " patches and " +
         std::to_string(s.curves.size()) + " curves");
  for (double v : conn.values())
    if (!is_probability(v)) fail("connectivity entry outside [0,1]");

  if (s.masks) {
    if (s.masks->patches.size() != s.patches.size()) fail("patch mask size mismatch");
    if (s.masks->curves.size() != s.curves.size()) fail("curve mask size mismatch");
    for (auto m : s.masks->patches)
      if (m > 1) fail("patch mask is not binary");
    for (auto m : s.masks->curves)
      if (m > 1) fail("curve mask is not binary");
  }

  if (s.annotations) {
    const Annotations& a = *s.annotations;
    if (a.curve_origin.size() != s.curves.size() || a.curve_kind.size() != s.curves.size())
      fail("curve annotation size mismatch");
    if (a.patch_origin.size() != s.patches.size() || a.patch_kind.size() != s.patches.size())
      fail("patch annotation size mismatch");
  }

  const bool refined = s.stage == Stage::TopologyRefined || s.stage == Stage::GeometryRefined;
  std::set<int> panel_patches;
  for (const Panel& panel : s.panels) {
    const std::string tag = "panel of patch " + std::to_string(panel.patch_id);
    const auto row = s.patch_index(panel.patch_id);
    if (!row) fail(tag + ": references a missing patch");
    if (!panel_patches.insert(panel.patch_id).second) fail(tag + ": duplicate panel");
    if (!(std::isfinite(panel.scale) && panel.scale > 0.0)) fail(tag + ": scale must be positive");
    for (const Edge2D& e : panel.edges) {
      if (!s.curve_index(e.source_curve_id))
        fail(tag + ": edge references missing curve " + std::to_string(e.source_curve_id));
      if (e.points.size() < 2) fail(tag + ": edge with fewer than 2 points");
      if (!std::all_of(e.points.begin(), e.points.end(), [](Point2 q) { return is_finite(q); }))
        fail(tag + ": non-finite edge coordinate");
    }
    if (panel.loop_order) {
      const LoopOrder& lo = *panel.loop_order;
      if (lo.order.size() != panel.edges.size() || lo.flips.size() != panel.edges.size())
        fail(tag + ": loop_order size mismatch");
      std::vector<int> sorted = lo.order;
      std::sort(sorted.begin(), sorted.end());
      for (std::size_t k = 0; k < sorted.size(); ++k)
        if (sorted[k] != static_cast<int>(k)) fail(tag + ": loop_order is not a permutation");
    }
    if (panel.closure_residual && !std::isfinite(*panel.closure_residual))
      fail(tag + ": non-finite closure residual");

    if (refined) {
      if (!s.patch_valid(*row)) fail(tag + ": panel for an invalid patch");
      std::set<int> from_edges;
      for (const Edge2D& e : panel.edges)
        if (!from_edges.insert(e.source_curve_id).second)
          fail(tag + ": two edges share curve " + std::to_string(e.source_curve_id));
      std::set<int> from_row;
      for (std::size_t j = 0; j < s.curves.size(); ++j)
        if (conn(*row, j) >= 0.5) from_row.insert(s.curves[j].id);
      if (from_edges != from_row) fail(tag + ": edge set differs from connectivity row support");
    }
  }
}

GarmentStructure as_raw(const GarmentStructure& gt) {
  GarmentStructure raw = gt;
  raw.stage = Stage::Raw;
  raw.masks.reset();
  return raw;
}

std::vector<Edge2D> traversal_edges(const Panel& p) {
  if (!p.loop_order) return p.edges;
  std::vector<Edge2D> out;
  out.reserve(p.edges.size());
  const LoopOrder& lo = *p.loop_order;
  if (lo.order.size() != lo.flips.size()) throw ValidationError("loop_order: order and flips differ in length");
  for (std::size_t k = 0; k < lo.order.size(); ++k) {
    if (lo.order[k] < 0 || static_cast<std::size_t>(lo.order[k]) >= p.edges.size())
      throw ValidationError("loop_order: edge index " + std::to_string(lo.order[k]) + " out of range");
    const Edge2D& e = p.edges[static_cast<std::size_t>(lo.order[k])];
    out.push_back(lo.flips[k] ? e.flipped() : e);
  }
  return out;
}

ResampledCurve resample_curve(const Curve3D& c, std::size_t n) {
  if (n < 2) throw ValidationError("resample_curve: n must be at least 2");
  if (c.points.empty()) throw ValidationError("resample_curve: curve has no points");
  ResampledCurve r;
  r.curve = c;
  r.curve.points = equal_chord_resample(c.points, n);
  r.degenerate = !(polyline_length<Point3>(c.points) > 0.0);
  return r;
}

double mean_neighbor_spacing(const Patch3D& p) {
  const int g = p.grid_size;
  double sum = 0.0;
  std::size_t count = 0;
  for (int r = 0; r < g; ++r) {
    for (int c = 0; c < g; ++c) {
      if (c + 1 < g) {
        sum += distance(p.at(r, c), p.at(r, c + 1));
        ++count;
      }
      if (r + 1 < g) {
        sum += distance(p.at(r, c), p.at(r + 1, c));
        ++count;
      }
    }
  }
  return count ? sum / static_cast<double>(count) : 0.0;
}

int adaptive_stride(const Patch3D& p, double target_spacing) {
  if (!(target_spacing > 0.0)) throw ValidationError("target_spacing must be positive");
  const double h = mean_neighbor_spacing(p);
  if (!(h > 0.0)) return std::max(1, p.grid_size - 1);
  const double k = std::round(target_spacing / h);
  if (k < 1.0) return 1;
  return static_cast<int>(std::min<double>(k, p.grid_size));
}

std::vector<Point3> sample_patch_adaptive(const Patch3D& p, double target_spacing) {
  const int k = adaptive_stride(p, target_spacing);
  const int g = p.grid_size;
  auto keep = [&](int r, int c) {
    const bool corner = (r == 0 || r == g - 1) && (c == 0 || c == g - 1);
    return corner || (r % k == 0 && c % k == 0);
  };
  std::vector<Point3> out;
  for (int r = 0; r < g; ++r)
    for (int c = 0; c < g; ++c)
      if (keep(r, c)) out.push_back(p.at(r, c));
  return out;
}

std::vector<Edge2D> denormalize_panel(const Panel& p) {
  std::vector<Edge2D> out = p.edges;
  for (Edge2D& e : out)
    for (Point2& q : e.points) q = p.scale * q;
  return out;
}

double normalize_edges(std::vector<Edge2D>& edges) {
  Point2 mean;
  std::size_t n = 0;
  for (const Edge2D& e : edges) {
    for (const Point2& q : e.points) {
      mean = mean + q;
      ++n;
    }
  }
  if (n == 0) return 1.0;
  mean = (1.0 / static_cast<double>(n)) * mean;
  double max_abs = 0.0;
  for (Edge2D& e : edges) {
    for (Point2& q : e.points) {
      q = q - mean;
      max_abs = std::max({max_abs, std::abs(q.x), std::abs(q.y)});
    }
  }
  if (!(max_abs > 0.0)) return 1.0;
  for (Edge2D& e : edges)
    for (Point2& q : e.points) q = (1.0 / max_abs) * q;
  return max_abs;
}

std::vector<Point2> boundary_points(const Panel& p) {
  std::vector<Point2> out;
  for (const Edge2D& e : p.edges) out.insert(out.end(), e.points.begin(), e.points.end());
  return out;
}

}  // namespace seamkit
