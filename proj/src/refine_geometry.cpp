#include "seamkit/refine_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "seamkit/errors.hpp"

namespace seamkit {

namespace {

using Complex = std::complex<double>;

Complex as_complex(Point2 p) { return {p.x, p.y}; }
Point2 as_point(Complex z) { return {z.real(), z.imag()}; }

constexpr double kDegenerateChord = 1e-12;

std::size_t prev_index(std::size_t j, std::size_t n) { return (j + n - 1) % n; }
std::size_t next_index(std::size_t j, std::size_t n) { return (j + 1) % n; }

}  // namespace

void GeometryParams::validate() const {
  if (!(tau_gap > 0.0)) throw ValidationError("tau_gap must be positive");
  if (!(scale_clamp.first > 0.0 && scale_clamp.first <= scale_clamp.second))
    throw ValidationError("scale_clamp must be a positive, ordered range");
  if (!(closure_tol > 0.0)) throw ValidationError("closure_tol must be positive");
  if (edge_samples < 2) throw ValidationError("edge_samples must be at least 2");
  if (brute_force_limit > 20) throw ValidationError("brute_force_limit must not exceed 20");
}

Point2 Similarity2D::apply(Point2 p) const {
  return as_point(multiplier() * as_complex(p) + as_complex(translation));
}

std::array<double, 4> Similarity2D::rotation() const {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c, -s, s, c};
}

std::vector<int> detect_bad_edges(std::span<const Edge2D> loop, const GeometryParams& g) {
  std::vector<int> bad;
  const std::size_t n = loop.size();
  for (std::size_t j = 0; j < n; ++j) {
    const Edge2D& e = loop[j];
    const double chord = distance(e.start(), e.end());
    if (chord < kDegenerateChord) {
      bad.push_back(static_cast<int>(j));
      continue;
    }
    const double gap_in = distance(e.start(), loop[prev_index(j, n)].end());
    const double gap_out = distance(e.end(), loop[next_index(j, n)].start());
    if (gap_in / chord + gap_out / chord > g.tau_gap) bad.push_back(static_cast<int>(j));
  }
  return bad;
}

std::vector<Edge2D> replace_bad_edge(std::vector<Edge2D> loop, int index, std::size_t samples) {
  const std::size_t n = loop.size();
  if (index < 0 || static_cast<std::size_t>(index) >= n) throw ValidationError("replace_bad_edge: index out of range");
  if (samples < 2) throw ValidationError("replace_bad_edge: need at least 2 samples");
  const auto j = static_cast<std::size_t>(index);
  const Point2 from = loop[prev_index(j, n)].end();
  const Point2 to = loop[next_index(j, n)].start();
  std::vector<Point2> pts(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    pts[k] = lerp(from, to, static_cast<double>(k) / static_cast<double>(samples - 1));
  }
  pts.front() = from;
  pts.back() = to;
  loop[j].points = std::move(pts);
  return loop;
}

Similarity2D fit_similarity_2pt(Point2 src_start, Point2 src_end, Point2 dst_start, Point2 dst_end,
                                const GeometryParams& g, int edge_index) {
  const Complex src = as_complex(src_end) - as_complex(src_start);
  if (std::abs(src) < kDegenerateChord)
    throw DegenerateEdgeError("degenerate source segment for edge " + std::to_string(edge_index), edge_index);
  const Complex dst = as_complex(dst_end) - as_complex(dst_start);

  Complex z = dst / src;
  Similarity2D t;
  const double raw_scale = std::abs(z);
  const double scale = std::clamp(raw_scale, g.scale_clamp.first, g.scale_clamp.second);
  // A zero target chord has no direction; keep the source direction.
  const double angle = raw_scale > 0.0 ? std::arg(z) : 0.0;
  if (scale != raw_scale) {
    t.clamped = true;
    z = std::polar(scale, angle);
  }
  t.scale = scale;
  t.angle = angle;
  t.translation = as_point(as_complex(dst_start) - z * as_complex(src_start));
  return t;
}

double closure_residual(std::span<const Edge2D> loop) {
  double worst = 0.0;
  const std::size_t n = loop.size();
  for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, distance(loop[j].end(), loop[next_index(j, n)].start()));
  return worst;
}

SnapResult snap_edges_to_joints(std::span<const Edge2D> loop, const GeometryParams& g) {
  const std::size_t n = loop.size();
  SnapResult r;
  r.loop.assign(loop.begin(), loop.end());
  if (n == 0) return r;

  // Joint j sits between edge j and edge j+1.
  std::vector<Point2> joint(n);
  for (std::size_t j = 0; j < n; ++j) joint[j] = 0.5 * (loop[j].end() + loop[next_index(j, n)].start());

  for (std::size_t j = 0; j < n; ++j) {
    const Edge2D& e = loop[j];
    const Point2 target_start = joint[prev_index(j, n)];
    const Point2 target_end = joint[j];
    const Similarity2D t = fit_similarity_2pt(e.start(), e.end(), target_start, target_end, g, static_cast<int>(j));
    const Complex z = t.multiplier();
    const Complex shift = as_complex(target_start) - z * as_complex(e.start());
    Edge2D& out = r.loop[j];
    for (Point2& p : out.points) p = as_point(z * as_complex(p) + shift);
    out.points.front() = target_start;
    if (!t.clamped) out.points.back() = target_end;
    r.transforms.push_back(t);
  }
  r.closure_residual = closure_residual(r.loop);
  return r;
}

Panel refine_panel_geometry(const Panel& p, const GeometryParams& g, PanelGeometryReport* report) {
  PanelGeometryReport rep;
  rep.patch_id = p.patch_id;

  Panel out = p;
  std::vector<Edge2D> loop;
  if (p.loop_order) {
    loop = traversal_edges(p);
  } else {
    const LoopSolution sol = optimal_loop_order(p.edges, g.brute_force_limit);
    Panel ordered = p;
    ordered.loop_order = sol.order;
    loop = traversal_edges(ordered);
  }

  if (!loop.empty()) {
    for (int j : detect_bad_edges(loop, g)) {
      loop = replace_bad_edge(std::move(loop), j, g.edge_samples);
      rep.replaced_edges.push_back(j);
    }
    try {
      SnapResult snapped = snap_edges_to_joints(loop, g);
      loop = std::move(snapped.loop);
      rep.clamped = std::any_of(snapped.transforms.begin(), snapped.transforms.end(),
                                [](const Similarity2D& t) { return t.clamped; });
    } catch (const DegenerateEdgeError&) {
      rep.degenerate = true;
    }
  }

  rep.closure_residual = closure_residual(loop);
  rep.closed = !loop.empty() && rep.closure_residual <= g.closure_tol;
  out.edges = std::move(loop);
  out.loop_order = LoopOrder::identity(out.edges.size());
  out.closure_residual = rep.closure_residual;
  if (report) *report = rep;
  return out;
}

GarmentStructure refine_geometry(const GarmentStructure& s, const GeometryParams& g,
                                 std::vector<PanelGeometryReport>* reports) {
  if (s.stage != Stage::TopologyRefined) throw ValidationError("refine_geometry: input stage must be topology_refined");
  g.validate();
  GarmentStructure out = s;
  out.stage = Stage::GeometryRefined;
  std::vector<PanelGeometryReport> local(s.panels.size());

  const auto count = static_cast<std::ptrdiff_t>(s.panels.size());
  // Exceptions must not leave the parallel region; the first one is rethrown.
  std::vector<std::exception_ptr> errors(s.panels.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out.panels[k] = refine_panel_geometry(s.panels[k], g, &local[k]);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  if (reports) *reports = std::move(local);
  return out;
}

}  // namespace seamkit
