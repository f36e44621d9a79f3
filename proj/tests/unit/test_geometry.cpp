#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "seamkit/errors.hpp"
#include "seamkit/refine_geometry.hpp"
#include "seamkit/refine_topology.hpp"
#include "seamkit/synth.hpp"
#include "seamkit/triangulate.hpp"

using namespace seamkit;

namespace {

constexpr double kPi = 3.141592653589793;

double cross(Point2 o, Point2 a, Point2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

// Square loop whose joints are each perturbed: every edge's endpoints move
// independently by up to `amp`.
std::vector<Edge2D> jittered_square(std::mt19937_64& rng, double amp) {
  std::uniform_real_distribution<double> u(-amp, amp);
  auto sq = fixture::square_edges(2.0, {-1, -1}, 20);
  for (auto& e : sq) {
    const Point2 ds{u(rng), u(rng)}, de{u(rng), u(rng)};
    const std::size_t n = e.points.size();
    for (std::size_t k = 0; k < n; ++k) {
      const double t = static_cast<double>(k) / static_cast<double>(n - 1);
      e.points[k] = e.points[k] + (1.0 - t) * ds + t * de;
    }
  }
  return sq;
}

}  // namespace

TEST(DetectBadEdges, ClosedLoopIsClean) {
  EXPECT_TRUE(detect_bad_edges(fixture::square_edges()).empty());
}

TEST(DetectBadEdges, RatioAgainstThreshold) {
  // Middle edge: gap 0.2 on each side.
  const std::vector<Edge2D> shortc = {fixture::line_edge({0, 0}, {1, 0}), fixture::line_edge({1.2, 0}, {1.3, 0}),
                                      fixture::line_edge({1.5, 0}, {0, 0})};
  // Chord 0.1, gaps 0.4 -> 4.0 > 3.0.
  const auto flagged = detect_bad_edges(shortc);
  EXPECT_NE(std::find(flagged.begin(), flagged.end(), 1), flagged.end());
  const std::vector<Edge2D> longc = {fixture::line_edge({0, 0}, {1, 0}), fixture::line_edge({1.2, 0}, {1.7, 0}),
                                     fixture::line_edge({1.9, 0}, {0, 0})};
  // Chord 0.5, gaps 0.4 -> 0.8.
  const auto none = detect_bad_edges(longc);
  EXPECT_EQ(std::find(none.begin(), none.end(), 1), none.end());
  const std::vector<Edge2D> point = {fixture::line_edge({0, 0}, {1, 0}), fixture::line_edge({1, 0}, {1, 0})};
  const auto deg = detect_bad_edges(point);
  EXPECT_NE(std::find(deg.begin(), deg.end(), 1), deg.end());
}

TEST(DetectBadEdges, ScaleInvariant) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0), s(0.01, 100.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Edge2D> loop;
    for (int k = 0; k < 5; ++k) loop.push_back(fixture::line_edge({u(rng), u(rng)}, {u(rng), u(rng)}, k));
    const auto before = detect_bad_edges(loop);
    const double f = s(rng);
    for (auto& e : loop)
      for (auto& p : e.points) p = f * p;
    EXPECT_EQ(detect_bad_edges(loop), before);
  }
}

TEST(ReplaceBadEdge, StraightSegmentBetweenNeighbours) {
  std::vector<Edge2D> loop = {fixture::line_edge({-1, 1}, {0, 0}), fixture::line_edge({5, 5}, {6, 7}, 1, 9),
                              fixture::line_edge({1, 0}, {-1, 1}, 2)};
  const auto out = replace_bad_edge(loop, 1, 50);
  const Edge2D& e = out[1];
  ASSERT_EQ(e.points.size(), 50u);
  EXPECT_EQ(e.start(), (Point2{0, 0}));
  EXPECT_EQ(e.end(), (Point2{1, 0}));
  EXPECT_EQ(e.source_curve_id, 1);
  for (const Point2& p : e.points) EXPECT_EQ(p.y, 0.0);
  // No gap on either side by construction.
  EXPECT_EQ(distance(out[0].end(), e.start()), 0.0);
  EXPECT_EQ(distance(e.end(), out[2].start()), 0.0);
}

TEST(ReplaceBadEdge, SingleEdgeLoopConnectsItsOwnEnds) {
  const std::vector<Edge2D> loop = {fixture::line_edge({0, 0}, {2, 2}, 0, 7)};
  const auto out = replace_bad_edge(loop, 0, 10);
  EXPECT_EQ(out[0].start(), (Point2{2, 2}));
  EXPECT_EQ(out[0].end(), (Point2{0, 0}));
}

TEST(ReplaceBadEdge, ExactlyCollinear) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Edge2D> loop;
    for (int k = 0; k < 4; ++k) loop.push_back(fixture::line_edge({u(rng), u(rng)}, {u(rng), u(rng)}, k));
    const auto out = replace_bad_edge(loop, trial % 4, 50);
    const auto& pts = out[static_cast<std::size_t>(trial % 4)].points;
    for (const Point2& p : pts) EXPECT_NEAR(cross(pts.front(), pts.back(), p), 0.0, 1e-12);
  }
}

TEST(FitSimilarity, AxisAlignedExample) {
  const auto t = fit_similarity_2pt({0, 0}, {1, 0}, {0, 0}, {0, 2});
  EXPECT_NEAR(t.scale, 2.0, 1e-15);
  EXPECT_NEAR(t.angle, kPi / 2, 1e-15);
  EXPECT_NEAR(t.translation.x, 0.0, 1e-15);
  EXPECT_NEAR(t.translation.y, 0.0, 1e-15);
  EXPECT_FALSE(t.clamped);
}

TEST(FitSimilarity, IdentityWhenSourceEqualsTarget) {
  const auto t = fit_similarity_2pt({0.3, -0.2}, {1.1, 0.7}, {0.3, -0.2}, {1.1, 0.7});
  EXPECT_NEAR(t.scale, 1.0, 1e-15);
  EXPECT_NEAR(t.angle, 0.0, 1e-15);
  EXPECT_NEAR(t.translation.x, 0.0, 1e-15);
  EXPECT_NEAR(t.translation.y, 0.0, 1e-15);
}

TEST(FitSimilarity, ClampKeepsStartAndReportsResidual) {
  const Point2 s0{0.2, 0.1}, s1{0.5, 0.5};  // chord 0.5
  const Point2 d0{1, 1};
  const Point2 dir{0.6, 0.8};
  const Point2 d1 = d0 + 5.0 * 0.5 * dir;  // needs scale 5
  const auto t = fit_similarity_2pt(s0, s1, d0, d1);
  EXPECT_TRUE(t.clamped);
  EXPECT_DOUBLE_EQ(t.scale, 2.0);
  EXPECT_LT(distance(t.apply(s0), d0), 1e-12);
  const Point2 res = d1 - t.apply(s1);
  EXPECT_NEAR(distance(res, {0, 0}), 3.0 * 0.5, 1e-12);
  EXPECT_NEAR(std::abs(res.x * dir.y - res.y * dir.x), 0.0, 1e-12);  // along the target direction
  EXPECT_THROW(fit_similarity_2pt(s0, s0, d0, d1, {}, 3), DegenerateEdgeError);
}

TEST(FitSimilarity, EndpointExactnessAndShapePreservation) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const Point2 s0{u(rng), u(rng)}, s1{u(rng), u(rng)};
    const double len = distance(s0, s1);
    if (len < 1e-3) continue;
    const double ang = kPi * u(rng), sc = std::exp(0.6 * u(rng));  // within [0.55, 1.8]
    const Point2 d0{u(rng), u(rng)};
    const Point2 d1 = d0 + sc * len * Point2{std::cos(ang), std::sin(ang)};
    const auto t = fit_similarity_2pt(s0, s1, d0, d1);
    ASSERT_FALSE(t.clamped);
    EXPECT_LT(distance(t.apply(s0), d0), 1e-9);
    EXPECT_LT(distance(t.apply(s1), d1), 1e-9);
    const Point2 a{u(rng), u(rng)}, b{u(rng), u(rng)};
    EXPECT_NEAR(distance(t.apply(a), t.apply(b)), t.scale * distance(a, b), 1e-9);
  }
}

TEST(Snap, ClosedLoopUnchanged) {
  const auto sq = fixture::square_edges(2.0, {-1, -1}, 10);
  const auto r = snap_edges_to_joints(sq);
  for (std::size_t e = 0; e < sq.size(); ++e) {
    EXPECT_NEAR(r.transforms[e].scale, 1.0, 1e-12);
    for (std::size_t k = 0; k < sq[e].points.size(); ++k) EXPECT_LT(distance(r.loop[e].points[k], sq[e].points[k]), 1e-12);
  }
  EXPECT_EQ(r.closure_residual, 0.0);
}

TEST(Snap, PerturbedJointsCloseExactly) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    const auto loop = jittered_square(rng, 0.01);
    const auto r = snap_edges_to_joints(loop);
    EXPECT_LT(r.closure_residual, 1e-12);
    for (const auto& t : r.transforms) {
      EXPECT_FALSE(t.clamped);
      EXPECT_NEAR(t.scale, 1.0, 0.03);
    }
    // Idempotent once closed.
    const auto again = snap_edges_to_joints(r.loop);
    for (std::size_t e = 0; e < loop.size(); ++e)
      for (std::size_t k = 0; k < loop[e].points.size(); ++k)
        EXPECT_LT(distance(again.loop[e].points[k], r.loop[e].points[k]), 1e-9);
  }
}

TEST(Snap, ClampedEdgeLeavesResidual) {
  auto sq = fixture::square_edges(2.0, {-1, -1}, 10);
  // Shrink edge 1 ten-fold about its midpoint.
  const Point2 mid = 0.5 * (sq[1].start() + sq[1].end());
  for (auto& p : sq[1].points) p = mid + 0.1 * (p - mid);
  const auto r = snap_edges_to_joints(sq);
  EXPECT_TRUE(r.transforms[1].clamped);
  EXPECT_GT(r.closure_residual, 1e-3);
  EXPECT_DOUBLE_EQ(r.closure_residual, closure_residual(r.loop));
}

TEST(RefinePanelGeometry, WildEdgeReplacedThenClosed) {
  Panel p;
  p.edges = fixture::square_edges(2.0, {-1, -1}, 10);
  // A tiny edge far from where side 2 should be.
  p.edges[2] = fixture::line_edge({0.3, 0.2}, {0.2, 0.2}, 2, 10);
  PanelGeometryReport rep;
  const Panel out = refine_panel_geometry(p, {}, &rep);
  ASSERT_EQ(rep.replaced_edges.size(), 1u);
  EXPECT_TRUE(rep.closed);
  EXPECT_LT(rep.closure_residual, 1e-12);
  EXPECT_LT(closure_residual(out.edges), 1e-12);
}

TEST(RefineGeometry, CleanGroundTruthUnchanged) {
  for (Template t : kAllTemplates) {
    const auto gt = generate(TemplateSpec{t, 3, {4, 6}, {0.2, 0.6}, 31});
    const auto topo = refine_topology(as_raw(gt)).first;
    std::vector<PanelGeometryReport> reps;
    const auto g = refine_geometry(topo, {}, &reps);
    EXPECT_EQ(g.stage, Stage::GeometryRefined);
    ASSERT_EQ(g.panels.size(), gt.panels.size());
    for (std::size_t i = 0; i < g.panels.size(); ++i) {
      EXPECT_TRUE(reps[i].closed);
      const auto want = traversal_edges(gt.panels[i]);
      const auto got = traversal_edges(g.panels[i]);
      ASSERT_EQ(want.size(), got.size());
      // Same boundary up to the starting edge of the cycle.
      std::size_t shift = 0;
      while (shift < got.size() && distance(got[shift].start(), want[0].start()) > 1e-9) ++shift;
      ASSERT_LT(shift, got.size()) << to_string(t);
      for (std::size_t e = 0; e < want.size(); ++e)
        for (std::size_t k = 0; k < want[e].points.size(); ++k)
          EXPECT_LT(distance(got[(e + shift) % got.size()].points[k], want[e].points[k]), 1e-9);
    }
  }
}

TEST(RefineGeometry, JitteredCorpusCloses) {
  CorpusSpec spec;
  spec.tmpl.reset();
  spec.count = 40;
  int closed = 0, total = 0;
  for (int i = 0; i < spec.count; ++i) {
    const auto topo = refine_topology(make_sample(spec, i).raw).first;
    std::vector<PanelGeometryReport> reps;
    const auto g = refine_geometry(topo, {}, &reps);
    for (std::size_t k = 0; k < reps.size(); ++k) {
      ++total;
      closed += reps[k].closed;
      EXPECT_EQ(reps[k].closed, *g.panels[k].closure_residual <= 1e-6);
    }
  }
  EXPECT_GE(closed, total * 99 / 100);
}

TEST(RefineGeometry, PanelErrorsSurfaceFromParallelLoop) {
  const auto gt = generate(TemplateSpec{Template::Trapezoid, 4, {4, 6}, {0.2, 0.6}, 12});
  auto topo = refine_topology(as_raw(gt)).first;
  LoopOrder bad = LoopOrder::identity(topo.panels[2].edges.size());
  bad.order.back() = 99;
  topo.panels[2].loop_order = bad;
  EXPECT_THROW(refine_geometry(topo), ValidationError);
}

TEST(RefineGeometry, RejectsBadParams) {
  GeometryParams g;
  g.scale_clamp = {2.0, 0.5};
  EXPECT_THROW(g.validate(), ValidationError);
  g = {};
  g.brute_force_limit = 25;
  EXPECT_THROW(g.validate(), ValidationError);
}

TEST(Triangulate, UnitSquare) {
  Panel p;
  p.edges = fixture::square_edges();
  const PanelMesh m = triangulate_panel(p);
  EXPECT_EQ(m.triangles.size(), 2u);
  EXPECT_NEAR(m.area(), 1.0, 1e-12);
}

TEST(Triangulate, ConvexHexagonMatchesShoelace) {
  std::vector<Point2> ring;
  for (int k = 0; k < 6; ++k) ring.push_back({std::cos(kPi * k / 3.0) * (1.0 + 0.1 * k), std::sin(kPi * k / 3.0)});
  Panel p;
  for (int k = 0; k < 6; ++k) p.edges.push_back(fixture::line_edge(ring[k], ring[(k + 1) % 6], k, 4));
  const PanelMesh m = triangulate_panel(p);
  EXPECT_EQ(m.triangles.size(), 4u);
  EXPECT_NEAR(m.area(), oracle::shoelace(ring), 1e-6 * oracle::shoelace(ring));
}

TEST(Triangulate, AreaConservedAndPositiveOrientation) {
  // Star-shaped, non-convex rings traced clockwise and counter-clockwise.
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.4, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Point2> ring;
    const int n = 5 + trial;
    for (int k = 0; k < n; ++k) {
      const double r = u(rng), t = 2.0 * kPi * k / n;
      ring.push_back({r * std::cos(t), r * std::sin(t)});
    }
    if (trial % 2) std::reverse(ring.begin(), ring.end());
    const PanelMesh m = triangulate_ring(ring);
    EXPECT_EQ(m.triangles.size(), static_cast<std::size_t>(n - 2));
    const double want = std::abs(oracle::shoelace(ring));
    EXPECT_NEAR(m.area(), want, 1e-6 * want);
    for (const auto& tri : m.triangles)
      EXPECT_GT(cross(m.vertices[tri[0]], m.vertices[tri[1]], m.vertices[tri[2]]), 0.0);
  }
}

TEST(Triangulate, OpenBoundaryReportsGap) {
  Panel p;
  p.edges = fixture::square_edges();
  p.edges[2].points.back() = p.edges[2].points.back() + Point2{0.0, 0.1};
  try {
    triangulate_panel(p);
    FAIL() << "expected an open-boundary error";
  } catch (const OpenBoundaryError& e) {
    EXPECT_NEAR(e.max_gap, 0.1, 1e-12);
  }
}

TEST(Triangulate, SelfIntersectionReportsEdgePair) {
  // Bow tie: (0,0)->(1,1)->(1,0)->(0,1)->(0,0).
  Panel p;
  p.edges = {fixture::line_edge({0, 0}, {1, 1}, 0), fixture::line_edge({1, 1}, {1, 0}, 1),
             fixture::line_edge({1, 0}, {0, 1}, 2), fixture::line_edge({0, 1}, {0, 0}, 3)};
  try {
    triangulate_panel(p);
    FAIL() << "expected a self-intersection error";
  } catch (const SelfIntersectionError& e) {
    EXPECT_EQ(std::minmax(e.edge_a, e.edge_b), std::minmax(0, 2));
  }
}

TEST(Triangulate, RefinedCorpusPanels) {
  CorpusSpec spec;
  spec.tmpl.reset();
  spec.count = 12;
  for (int i = 0; i < spec.count; ++i) {
    const auto topo = refine_topology(make_sample(spec, i).raw).first;
    const auto g = refine_geometry(topo);
    for (const Panel& p : g.panels) {
      const PanelMesh m = triangulate_panel(p);
      std::vector<Point2> ring;
      for (const auto& e : traversal_edges(p))
        for (std::size_t k = 0; k + 1 < e.points.size(); ++k) ring.push_back(e.points[k]);
      const double want = std::abs(oracle::shoelace(ring));
      EXPECT_NEAR(m.area(), want, 1e-6 * want);
    }
  }
}
