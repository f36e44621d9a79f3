#include "seamkit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "seamkit/errors.hpp"

namespace seamkit {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
double gauss(Rng& rng, double sigma) { return sigma > 0.0 ? std::normal_distribution<double>(0.0, sigma)(rng) : 0.0; }
bool chance(Rng& rng, double p) { return p > 0.0 && uniform(rng, 0.0, 1.0) < p; }
int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Straight segment or circular arc, parameterized over [0, 1].
struct Seg {
  bool arc = false;
  Point2 a, b;
  Point2 c;
  double r = 0.0, t0 = 0.0, t1 = 0.0;

  static Seg line(Point2 a, Point2 b) { return {false, a, b, {}, 0.0, 0.0, 0.0}; }
  static Seg circle(Point2 c, double r, double t0, double t1) {
    Seg s{true, {}, {}, c, r, t0, t1};
    s.a = s.at(0.0);
    s.b = s.at(1.0);
    return s;
  }

  Point2 at(double s) const {
    if (!arc) return lerp(a, b, s);
    const double t = t0 + (t1 - t0) * s;
    return {c.x + r * std::cos(t), c.y + r * std::sin(t)};
  }
  double length() const { return arc ? r * std::abs(t1 - t0) : distance(a, b); }
  std::pair<Seg, Seg> split() const {
    if (!arc) {
      const Point2 m = lerp(a, b, 0.5);
      return {line(a, m), line(m, b)};
    }
    const double tm = 0.5 * (t0 + t1);
    return {circle(c, r, t0, tm), circle(c, r, tm, t1)};
  }
};

// A panel outline (CCW, metric) and the map from the unit square onto it.
struct Shape {
  std::vector<Seg> segs;
  std::function<Point2(double, double)> patch;
};

void split_to(std::vector<Seg>& segs, int target) {
  while (static_cast<int>(segs.size()) < target) {
    std::size_t longest = 0;
    for (std::size_t k = 1; k < segs.size(); ++k)
      if (segs[k].length() > segs[longest].length()) longest = k;
    // Halving must not produce edges below the minimum length.
    if (segs[longest].length() < 2.0 * kMinEdgeLength) break;
    const auto [first, second] = segs[longest].split();
    segs[longest] = first;
    segs.insert(segs.begin() + static_cast<std::ptrdiff_t>(longest) + 1, second);
  }
}

Point2 bilinear(Point2 p00, Point2 p10, Point2 p11, Point2 p01, double u, double v) {
  return lerp(lerp(p00, p10, u), lerp(p01, p11, u), v);
}

Shape rect_shape(double w, double h) {
  const Point2 p00{0, 0}, p10{w, 0}, p11{w, h}, p01{0, h};
  Shape s;
  s.segs = {Seg::line(p00, p10), Seg::line(p10, p11), Seg::line(p11, p01), Seg::line(p01, p00)};
  s.patch = [=](double u, double v) { return bilinear(p00, p10, p11, p01, u, v); };
  return s;
}

Shape trapezoid_shape(Rng& rng, const TemplateSpec& spec, int edges) {
  const double w = 2.0 * uniform(rng, spec.scale_range.first, spec.scale_range.second);
  const double h = 2.0 * uniform(rng, spec.scale_range.first, spec.scale_range.second);
  const double top = w * uniform(rng, 0.5, 0.9);
  const Point2 p00{0, 0}, p10{w, 0}, p11{0.5 * (w + top), h}, p01{0.5 * (w - top), h};
  Shape s;
  s.segs = {Seg::line(p00, p10), Seg::line(p10, p11), Seg::line(p11, p01), Seg::line(p01, p00)};
  s.patch = [=](double u, double v) { return bilinear(p00, p10, p11, p01, u, v); };
  split_to(s.segs, edges);
  return s;
}

// Annular sector opening downward: hem on the outer arc, waist on the inner.
Shape skirt_shape(Rng& rng, const TemplateSpec& spec, int edges) {
  const double half_angle = uniform(rng, 35.0, 45.0) * std::numbers::pi / 180.0;
  const double half_width = uniform(rng, spec.scale_range.first, spec.scale_range.second);
  const double r2 = half_width / std::sin(half_angle);
  const double r1 = r2 * uniform(rng, 0.45, 0.6);
  const double p0 = -0.5 * std::numbers::pi - half_angle;
  const double p1 = -0.5 * std::numbers::pi + half_angle;
  const Point2 c{0, 0};
  Shape s;
  s.segs = {Seg::circle(c, r2, p0, p1), Seg::line(Seg::circle(c, r2, p1, p1).a, Seg::circle(c, r1, p1, p1).a),
            Seg::circle(c, r1, p1, p0), Seg::line(Seg::circle(c, r1, p0, p0).a, Seg::circle(c, r2, p0, p0).a)};
  s.patch = [=](double u, double v) {
    const double rho = r2 + (r1 - r2) * v;
    const double phi = p0 + (p1 - p0) * u;
    return Point2{rho * std::cos(phi), rho * std::sin(phi)};
  };
  split_to(s.segs, edges);
  return s;
}

// Enlarges a shape uniformly so no edge is shorter than kMinEdgeLength.
void enforce_min_edge(Shape& s) {
  double shortest = s.segs.front().length();
  for (const Seg& g : s.segs) shortest = std::min(shortest, g.length());
  if (shortest >= kMinEdgeLength) return;
  const double f = kMinEdgeLength / shortest;
  for (Seg& g : s.segs) {
    g.a = f * g.a;
    g.b = f * g.b;
    g.c = f * g.c;
    g.r *= f;
  }
  s.patch = [inner = s.patch, f](double u, double v) { return f * inner(u, v); };
}

std::vector<Point2> sample_seg(const Seg& g, std::size_t n) {
  std::vector<Point2> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = g.at(static_cast<double>(k) / static_cast<double>(n - 1));
  out.front() = g.a;
  out.back() = g.b;
  return out;
}

int edge_target(Rng& rng, const TemplateSpec& spec) {
  const int lo = std::max(4, spec.edge_count_range.first);
  const int hi = std::max(lo, spec.edge_count_range.second);
  return uniform_int(rng, lo, hi);
}

Patch3D make_patch(int id, const std::function<Point2(double, double)>& map,
                   const std::function<Point3(Point2)>& lift) {
  Patch3D p;
  p.id = id;
  p.grid_size = kPatchGrid;
  const double g = kPatchGrid - 1;
  for (int r = 0; r < kPatchGrid; ++r)
    for (int c = 0; c < kPatchGrid; ++c) p.points.push_back(lift(map(c / g, r / g)));
  return p;
}

// Appends a normalized panel built from metric edge samples.
void add_panel(GarmentStructure& s, int patch_id, std::vector<Edge2D> edges) {
  Panel panel;
  panel.patch_id = patch_id;
  panel.scale = normalize_edges(edges);
  panel.edges = std::move(edges);
  s.panels.push_back(std::move(panel));
}

GarmentStructure generate_planar(Rng& rng, const TemplateSpec& spec) {
  GarmentStructure s;
  s.stage = Stage::GroundTruth;
  double offset = 0.0;
  int next_curve = 0;
  for (int i = 0; i < spec.panel_count; ++i) {
    Shape shape;
    switch (spec.tmpl) {
      case Template::RectPanel:
        shape = rect_shape(2.0 * uniform(rng, spec.scale_range.first, spec.scale_range.second),
                           2.0 * uniform(rng, spec.scale_range.first, spec.scale_range.second));
        break;
      case Template::Trapezoid: {
        const int k = edge_target(rng, spec);
        shape = trapezoid_shape(rng, spec, k);
        break;
      }
      case Template::ArcHemSkirt: {
        const int k = edge_target(rng, spec);
        shape = skirt_shape(rng, spec, k);
        break;
      }
      case Template::MultiPanelTube:
        throw Error("generate_planar: tube template");
    }
    enforce_min_edge(shape);

    std::vector<std::vector<Point2>> samples;
    double minx = 0.0, maxx = 0.0, miny = 0.0;
    bool first = true;
    for (const Seg& g : shape.segs) {
      samples.push_back(sample_seg(g, kEdgeSamples));
      for (const Point2& q : samples.back()) {
        if (first) {
          minx = maxx = q.x;
          miny = q.y;
          first = false;
        }
        minx = std::min(minx, q.x);
        maxx = std::max(maxx, q.x);
        miny = std::min(miny, q.y);
      }
    }
    // Planar offset lift: panels side by side in the z = 0 plane.
    const double dx = offset - minx;
    const double dy = -miny;
    auto lift = [dx, dy](Point2 q) { return Point3{q.x + dx, q.y + dy, 0.0}; };
    offset += (maxx - minx) + 0.3;

    const std::size_t patch_index = s.add_patch(make_patch(i, shape.patch, lift));
    std::vector<Edge2D> edges;
    for (const auto& pts : samples) {
      Curve3D c;
      c.id = next_curve++;
      for (const Point2& q : pts) c.points.push_back(lift(q));
      const std::size_t ci = s.add_curve(std::move(c));
      s.connectivity(patch_index, ci) = 1.0;
      edges.push_back({s.curves[ci].id, pts, false});
    }
    add_panel(s, i, std::move(edges));
  }
  return s;
}

// Rectangles wrapped around a cylinder; neighbours share their side seams.
GarmentStructure generate_tube(Rng& rng, const TemplateSpec& spec) {
  const int n = spec.panel_count;
  const double h = 2.0 * uniform(rng, spec.scale_range.first, spec.scale_range.second);
  std::vector<double> widths(static_cast<std::size_t>(n));
  for (double& w : widths) w = 2.0 * uniform(rng, spec.scale_range.first, spec.scale_range.second);
  double circumference = 0.0;
  for (double w : widths) circumference += w;
  const double radius = circumference / (2.0 * std::numbers::pi);
  std::vector<double> theta(static_cast<std::size_t>(n) + 1, 0.0);
  for (int i = 0; i < n; ++i) theta[static_cast<std::size_t>(i) + 1] = theta[static_cast<std::size_t>(i)] + widths[static_cast<std::size_t>(i)] / radius;

  auto lift_for = [&](int i) {
    const double t0 = theta[static_cast<std::size_t>(i)];
    return [t0, radius](Point2 q) {
      const double t = t0 + q.x / radius;
      return Point3{radius * std::cos(t), radius * std::sin(t), q.y};
    };
  };

  GarmentStructure s;
  s.stage = Stage::GroundTruth;
  for (int i = 0; i < n; ++i) {
    const Shape shape = rect_shape(widths[static_cast<std::size_t>(i)], h);
    s.add_patch(make_patch(i, shape.patch, lift_for(i)));
  }

  // Curves: bottom_i, top_i, then seam_i on the right side of panel i.
  std::vector<std::size_t> bottom(static_cast<std::size_t>(n)), top(bottom), seam(bottom);
  std::vector<std::vector<Edge2D>> edges(static_cast<std::size_t>(n));
  int next_curve = 0;
  auto new_curve = [&](std::vector<Point3> pts) {
    Curve3D c;
    c.id = next_curve++;
    c.points = std::move(pts);
    return s.add_curve(std::move(c));
  };
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const Shape shape = rect_shape(widths[ui], h);
    const auto lift = lift_for(i);
    std::vector<std::vector<Point2>> samples;
    for (const Seg& g : shape.segs) samples.push_back(sample_seg(g, kEdgeSamples));
    auto lifted = [&](const std::vector<Point2>& pts) {
      std::vector<Point3> out;
      for (const Point2& q : pts) out.push_back(lift(q));
      return out;
    };
    bottom[ui] = new_curve(lifted(samples[0]));
    seam[ui] = new_curve(lifted(samples[1]));
    top[ui] = new_curve(lifted(samples[2]));
    edges[ui] = {{s.curves[bottom[ui]].id, samples[0], false},
                 {s.curves[seam[ui]].id, samples[1], false},
                 {s.curves[top[ui]].id, samples[2], false},
                 {-1, samples[3], true}};  // left side: previous seam, reversed
  }
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const auto left = seam[static_cast<std::size_t>((i + n - 1) % n)];
    edges[ui][3].source_curve_id = s.curves[left].id;
    for (std::size_t c : {bottom[ui], seam[ui], top[ui], left}) s.connectivity(ui, c) = 1.0;
    add_panel(s, i, std::move(edges[ui]));
  }
  return s;
}

template <typename P>
std::vector<double> cumulative_length(const std::vector<P>& pts) {
  std::vector<double> acc(pts.size(), 0.0);
  for (std::size_t k = 1; k < pts.size(); ++k) acc[k] = acc[k - 1] + distance(pts[k - 1], pts[k]);
  return acc;
}

template <typename P>
P point_at_fraction(const std::vector<P>& pts, const std::vector<double>& acc, double t) {
  const double total = acc.back();
  if (total <= 0.0) return pts.front();
  const double target = std::clamp(t, 0.0, 1.0) * total;
  auto it = std::upper_bound(acc.begin(), acc.end(), target);
  if (it == acc.end()) return pts.back();
  const auto k = static_cast<std::size_t>(it - acc.begin());
  if (k == 0) return pts.front();
  const double seg = acc[k] - acc[k - 1];
  return seg > 0.0 ? lerp(pts[k - 1], pts[k], (target - acc[k - 1]) / seg) : pts[k];
}

template <typename P>
std::vector<P> sub_polyline(const std::vector<P>& pts, double t0, double t1, std::size_t n) {
  const auto acc = cumulative_length(pts);
  std::vector<P> out(n);
  for (std::size_t k = 0; k < n; ++k)
    out[k] = point_at_fraction(pts, acc, t0 + (t1 - t0) * static_cast<double>(k) / static_cast<double>(n - 1));
  return out;
}

template <typename P>
std::vector<P> straight(P a, P b, std::size_t n) {
  std::vector<P> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = lerp(a, b, static_cast<double>(k) / static_cast<double>(n - 1));
  out.front() = a;
  out.back() = b;
  return out;
}

double injected_prob(Rng& rng) { return uniform(rng, 0.55, 0.9); }
double ghost_prob(Rng& rng) { return uniform(rng, 0.05, 0.4); }

int next_id(const std::vector<Curve3D>& v) {
  int m = -1;
  for (const auto& c : v) m = std::max(m, c.id);
  return m + 1;
}

int next_id(const std::vector<Patch3D>& v) {
  int m = -1;
  for (const auto& p : v) m = std::max(m, p.id);
  return m + 1;
}

Point3 random_direction(Rng& rng) {
  for (;;) {
    const Point3 d{gauss(rng, 1.0), gauss(rng, 1.0), gauss(rng, 1.0)};
    const double n = std::sqrt(dot(d, d));
    if (n > 1e-6) return (1.0 / n) * d;
  }
}

}  // namespace

std::string_view to_string(Template t) {
  switch (t) {
    case Template::RectPanel: return "rect";
    case Template::Trapezoid: return "trapezoid";
    case Template::ArcHemSkirt: return "skirt";
    case Template::MultiPanelTube: return "tube";
  }
  return "rect";
}

Template template_from_string(std::string_view name) {
  for (Template t : kAllTemplates)
    if (to_string(t) == name) return t;
  throw ValidationError("unknown template '" + std::string(name) + "' (expected rect, trapezoid, skirt or tube)");
}

void TemplateSpec::validate() const {
  if (panel_count < 1) throw ValidationError("panel_count must be at least 1");
  if (tmpl == Template::MultiPanelTube && panel_count < 2) throw ValidationError("tube template needs at least 2 panels");
  if (edge_count_range.first < 1 || edge_count_range.first > edge_count_range.second)
    throw ValidationError("edge_count_range must be an ordered positive range");
  if (!(scale_range.first > 0.0 && scale_range.first <= scale_range.second))
    throw ValidationError("scale_range must be an ordered positive range");
}

void CorruptionSpec::validate() const {
  for (double p : {duplicate_curve_prob, subcurve_prob, spurious_edge_prob, prob_noise_sigma, drop_prob, edge_shuffle_prob})
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("corruption probabilities must lie in [0, 1]");
  if (!(duplicate_jitter >= 0.0) || !(endpoint_jitter_sigma >= 0.0))
    throw ValidationError("corruption jitter and sigmas must be non-negative");
}

CorruptionSpec CorruptionSpec::none() {
  CorruptionSpec c;
  c.duplicate_curve_prob = c.duplicate_jitter = c.subcurve_prob = c.spurious_edge_prob = 0.0;
  c.endpoint_jitter_sigma = c.prob_noise_sigma = c.drop_prob = c.edge_shuffle_prob = 0.0;
  return c;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

GarmentStructure generate(const TemplateSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  GarmentStructure s = spec.tmpl == Template::MultiPanelTube ? generate_tube(rng, spec) : generate_planar(rng, spec);
  s.masks = ValidityMasks{std::vector<std::uint8_t>(s.patches.size(), 1), std::vector<std::uint8_t>(s.curves.size(), 1)};
  validate(s);
  return s;
}

GarmentStructure corrupt(const GarmentStructure& gt, const CorruptionSpec& c) {
  c.validate();
  if (gt.stage != Stage::GroundTruth) throw ValidationError("corrupt: input stage must be ground_truth");
  Rng rng(c.seed);

  GarmentStructure s = gt;
  s.stage = Stage::Raw;
  s.masks.reset();
  Annotations ann;
  for (std::size_t i = 0; i < gt.curves.size(); ++i) {
    ann.curve_origin.push_back(static_cast<int>(i));
    ann.curve_kind.emplace_back("gt");
  }
  for (std::size_t i = 0; i < gt.patches.size(); ++i) {
    ann.patch_origin.push_back(static_cast<int>(i));
    ann.patch_kind.emplace_back("gt");
  }
  for (Panel& p : s.panels) {
    p.loop_order.reset();
    p.closure_residual.reset();
  }

  const std::size_t n_curves = gt.curves.size();
  const std::size_t n_patches = gt.patches.size();
  const std::size_t n_panels = gt.panels.size();

  auto add_injected_curve = [&](Curve3D curve, int origin, const char* kind) {
    curve.id = next_id(s.curves);
    const std::size_t ci = s.add_curve(std::move(curve));
    ann.curve_origin.push_back(origin);
    ann.curve_kind.emplace_back(kind);
    return ci;
  };
  // Copies the incidence of `src` onto `dst` with injected-level confidence.
  auto copy_adjacency = [&](std::size_t src, std::size_t dst) {
    for (std::size_t r = 0; r < n_patches; ++r)
      if (gt.connectivity(r, src) >= 0.5) s.connectivity(r, dst) = injected_prob(rng);
  };

  // Near-duplicate curves: rigid shift by exactly `duplicate_jitter`.
  for (std::size_t i = 0; i < n_curves; ++i) {
    if (!chance(rng, c.duplicate_curve_prob)) continue;
    const Point3 shift = c.duplicate_jitter * random_direction(rng);
    Curve3D d = gt.curves[i];
    for (Point3& q : d.points) q = q + shift;
    d.validity_prob = injected_prob(rng);
    const std::size_t di = add_injected_curve(std::move(d), static_cast<int>(i), "duplicate");
    copy_adjacency(i, di);
    for (std::size_t k = 0; k < n_panels; ++k)
      for (std::size_t e = 0, ne = s.panels[k].edges.size(); e < ne; ++e)
        if (s.panels[k].edges[e].source_curve_id == gt.curves[i].id) {
          Edge2D copy = s.panels[k].edges[e];
          copy.source_curve_id = s.curves[di].id;
          s.panels[k].edges.push_back(std::move(copy));
        }
  }

  // Sub-curve fragments covering 40-60% of a curve.
  for (std::size_t i = 0; i < n_curves; ++i) {
    if (!chance(rng, c.subcurve_prob)) continue;
    const double frac = uniform(rng, 0.4, 0.6);
    const double t0 = uniform(rng, 0.0, 1.0 - frac);
    const double t1 = t0 + frac;
    Curve3D f;
    f.points = sub_polyline(gt.curves[i].points, t0, t1, kCurveSamples);
    f.validity_prob = injected_prob(rng);
    const std::size_t fi = add_injected_curve(std::move(f), static_cast<int>(i), "subcurve");
    copy_adjacency(i, fi);
    for (std::size_t k = 0; k < n_panels; ++k)
      for (std::size_t e = 0, ne = s.panels[k].edges.size(); e < ne; ++e) {
        const Edge2D& src = s.panels[k].edges[e];
        if (src.source_curve_id != gt.curves[i].id) continue;
        Edge2D frag;
        frag.source_curve_id = s.curves[fi].id;
        frag.reversed = src.reversed;
        frag.points = src.reversed ? sub_polyline(src.points, 1.0 - t1, 1.0 - t0, kEdgeSamples)
                                   : sub_polyline(src.points, t0, t1, kEdgeSamples);
        s.panels[k].edges.push_back(std::move(frag));
      }
  }

  // Spurious chords joining interior points of two edges of one panel.
  for (std::size_t k = 0; k < n_panels; ++k) {
    if (!chance(rng, c.spurious_edge_prob)) continue;
    const Panel& gp = gt.panels[k];
    if (gp.edges.size() < 2) continue;
    const int a = uniform_int(rng, 0, static_cast<int>(gp.edges.size()) - 1);
    int b = uniform_int(rng, 0, static_cast<int>(gp.edges.size()) - 2);
    if (b >= a) ++b;
    const double ta = uniform(rng, 0.2, 0.8);
    const double tb = uniform(rng, 0.2, 0.8);
    auto ends = [&](const Edge2D& e, double t) {
      const auto acc2 = cumulative_length(e.points);
      const Point2 p2 = point_at_fraction(e.points, acc2, t);
      const auto ci = gt.curve_index(e.source_curve_id);
      const auto& cp = gt.curves[*ci].points;
      const Point3 p3 = point_at_fraction(cp, cumulative_length(cp), e.reversed ? 1.0 - t : t);
      return std::pair{p2, p3};
    };
    const auto [a2, a3] = ends(gp.edges[static_cast<std::size_t>(a)], ta);
    const auto [b2, b3] = ends(gp.edges[static_cast<std::size_t>(b)], tb);
    Curve3D chord;
    chord.points = straight(a3, b3, kCurveSamples);
    chord.validity_prob = injected_prob(rng);
    const std::size_t ci = add_injected_curve(std::move(chord), -1, "spurious");
    const auto row = *gt.patch_index(gp.patch_id);
    s.connectivity(row, ci) = injected_prob(rng);
    s.panels[k].edges.push_back({s.curves[ci].id, straight(a2, b2, kEdgeSamples), false});
  }

  // Low-probability ghosts of patches (with their panel) and curves.
  for (std::size_t i = 0; i < n_patches; ++i) {
    if (!chance(rng, c.drop_prob)) continue;
    const Point3 shift = uniform(rng, 0.5, 1.0) * random_direction(rng);
    Patch3D g = gt.patches[i];
    for (Point3& q : g.points) q = q + shift;
    g.validity_prob = ghost_prob(rng);
    g.id = next_id(s.patches);
    const std::size_t gi = s.add_patch(std::move(g));
    ann.patch_origin.push_back(static_cast<int>(i));
    ann.patch_kind.emplace_back("ghost");
    for (std::size_t col = 0; col < n_curves; ++col)
      if (gt.connectivity(i, col) >= 0.5) s.connectivity(gi, col) = ghost_prob(rng);
    for (const Panel& p : gt.panels)
      if (p.patch_id == gt.patches[i].id) {
        Panel ghost = p;
        ghost.patch_id = s.patches[gi].id;
        s.panels.push_back(std::move(ghost));
      }
  }
  for (std::size_t i = 0; i < n_curves; ++i) {
    if (!chance(rng, c.drop_prob)) continue;
    const Point3 shift = uniform(rng, 0.5, 1.0) * random_direction(rng);
    Curve3D g = gt.curves[i];
    for (Point3& q : g.points) q = q + shift;
    g.validity_prob = ghost_prob(rng);
    const std::size_t gi = add_injected_curve(std::move(g), static_cast<int>(i), "ghost");
    for (std::size_t r = 0; r < n_patches; ++r)
      if (gt.connectivity(r, i) >= 0.5) s.connectivity(r, gi) = ghost_prob(rng);
  }

  // Endpoint jitter: independent offsets at both ends, blended linearly.
  if (c.endpoint_jitter_sigma > 0.0) {
    for (Panel& p : s.panels)
      for (Edge2D& e : p.edges) {
        const Point2 d0{gauss(rng, c.endpoint_jitter_sigma), gauss(rng, c.endpoint_jitter_sigma)};
        const Point2 d1{gauss(rng, c.endpoint_jitter_sigma), gauss(rng, c.endpoint_jitter_sigma)};
        const double last = static_cast<double>(e.points.size() - 1);
        for (std::size_t k = 0; k < e.points.size(); ++k) {
          const double t = static_cast<double>(k) / last;
          e.points[k] = e.points[k] + (1.0 - t) * d0 + t * d1;
        }
      }
  }

  // Probability noise on every predicted probability.
  if (c.prob_noise_sigma > 0.0) {
    auto noisy = [&](double p) { return std::clamp(p + gauss(rng, c.prob_noise_sigma), 0.0, 1.0); };
    for (Patch3D& p : s.patches) p.validity_prob = noisy(p.validity_prob);
    for (Curve3D& cv : s.curves) cv.validity_prob = noisy(cv.validity_prob);
    for (std::size_t r = 0; r < s.connectivity.rows(); ++r)
      for (std::size_t col = 0; col < s.connectivity.cols(); ++col) s.connectivity(r, col) = noisy(s.connectivity(r, col));
  }

  // Raw edges carry no order or orientation.
  for (Panel& p : s.panels) {
    if (!chance(rng, c.edge_shuffle_prob)) continue;
    std::shuffle(p.edges.begin(), p.edges.end(), rng);
    for (Edge2D& e : p.edges)
      if (chance(rng, 0.5)) e = e.flipped();
  }

  s.annotations = std::move(ann);
  validate(s);
  return s;
}

std::string sample_name(int index, int count) {
  int width = 3;
  for (int n = count - 1; n >= 1000; n /= 10) ++width;
  std::string digits = std::to_string(index);
  return std::string(static_cast<std::size_t>(std::max(0, width - static_cast<int>(digits.size()))), '0') + digits;
}

CorpusSample make_sample(const CorpusSpec& spec, int index) {
  CorpusSample out;
  out.name = sample_name(index, spec.count);
  out.tmpl = spec.base;
  out.tmpl.tmpl = spec.tmpl ? *spec.tmpl : kAllTemplates[static_cast<std::size_t>(index) % std::size(kAllTemplates)];
  // Tubes need two panels; mixed corpora keep the requested count otherwise.
  if (out.tmpl.tmpl == Template::MultiPanelTube) out.tmpl.panel_count = std::max(2, out.tmpl.panel_count);
  out.tmpl.seed = mix_seed(spec.base.seed, static_cast<std::uint64_t>(index));
  out.corruption = spec.corruption;
  out.corruption.seed = mix_seed(spec.corruption.seed, static_cast<std::uint64_t>(index));
  out.gt = generate(out.tmpl);
  out.raw = corrupt(out.gt, out.corruption);
  return out;
}

nlohmann::json manifest(const CorpusSpec& spec) {
  nlohmann::json samples = nlohmann::json::array();
  for (int i = 0; i < spec.count; ++i) {
    TemplateSpec t = spec.base;
    t.tmpl = spec.tmpl ? *spec.tmpl : kAllTemplates[static_cast<std::size_t>(i) % std::size(kAllTemplates)];
    if (t.tmpl == Template::MultiPanelTube) t.panel_count = std::max(2, t.panel_count);
    samples.push_back({{"name", sample_name(i, spec.count)},
                       {"template", to_string(t.tmpl)},
                       {"panel_count", t.panel_count},
                       {"template_seed", mix_seed(spec.base.seed, static_cast<std::uint64_t>(i))},
                       {"corruption_seed", mix_seed(spec.corruption.seed, static_cast<std::uint64_t>(i))},
                       {"gt", "gt/" + sample_name(i, spec.count) + ".json"},
                       {"raw", "raw/" + sample_name(i, spec.count) + ".json"}});
  }
  const CorruptionSpec& c = spec.corruption;
  return {{"template", spec.tmpl ? std::string(to_string(*spec.tmpl)) : std::string("mixed")},
          {"count", spec.count},
          {"template_spec",
           {{"panel_count", spec.base.panel_count},
            {"edge_count_range", {spec.base.edge_count_range.first, spec.base.edge_count_range.second}},
            {"scale_range", {spec.base.scale_range.first, spec.base.scale_range.second}},
            {"seed", spec.base.seed}}},
          {"corruption_spec",
           {{"duplicate_curve_prob", c.duplicate_curve_prob},
            {"duplicate_jitter", c.duplicate_jitter},
            {"subcurve_prob", c.subcurve_prob},
            {"spurious_edge_prob", c.spurious_edge_prob},
            {"endpoint_jitter_sigma", c.endpoint_jitter_sigma},
            {"prob_noise_sigma", c.prob_noise_sigma},
            {"drop_prob", c.drop_prob},
            {"edge_shuffle_prob", c.edge_shuffle_prob},
            {"seed", c.seed}}},
          {"samples", std::move(samples)}};
}

}  // namespace seamkit
