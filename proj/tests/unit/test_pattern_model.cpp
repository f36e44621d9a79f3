#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "seamkit/errors.hpp"
#include "seamkit/pattern_model.hpp"

using namespace seamkit;

TEST(Validate, MinimalOnePatchNoCurves) {
  GarmentStructure s;
  s.add_patch(fixture::flat_patch(0));
  EXPECT_NO_THROW(validate(s));
  EXPECT_EQ(s.connectivity.rows(), 1u);
  EXPECT_EQ(s.connectivity.cols(), 0u);
}

TEST(Validate, ConnectivityShapeMismatchIsNamed) {
  GarmentStructure s;
  s.add_patch(fixture::flat_patch(0));
  s.add_patch(fixture::flat_patch(1, 1.0, kPatchGrid, {3, 0, 0}));
  s.add_curve(fixture::line_curve(0, {0, 0, 0}, {1, 0, 0}));
  s.add_curve(fixture::line_curve(1, {0, 1, 0}, {1, 1, 0}));
  s.connectivity = Connectivity(2, 3);
  try {
    validate(s);
    FAIL() << "expected a validation error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("connectivity"), std::string::npos);
  }
}

TEST(Validate, RejectsBadProbabilitiesAndNaN) {
  auto s = fixture::square_structure();
  s.curves[0].validity_prob = 1.5;
  EXPECT_THROW(validate(s), ValidationError);
  s = fixture::square_structure();
  s.curves[1].points[3].x = std::nan("");
  EXPECT_THROW(validate(s), ValidationError);
  s = fixture::square_structure();
  s.patches[0].points.pop_back();
  EXPECT_THROW(validate(s), ValidationError);
}

TEST(Validate, RejectsDuplicateIdsAndDanglingEdges) {
  auto s = fixture::square_structure();
  s.curves[1].id = s.curves[0].id;
  EXPECT_THROW(validate(s), ValidationError);
  s = fixture::square_structure();
  s.panels[0].edges[0].source_curve_id = 99;
  EXPECT_THROW(validate(s), ValidationError);
  s = fixture::square_structure();
  s.panels[0].scale = 0.0;
  EXPECT_THROW(validate(s), ValidationError);
}

TEST(Validate, RefinedPanelsMustMatchConnectivity) {
  auto s = fixture::square_structure();
  s.stage = Stage::GeometryRefined;
  EXPECT_NO_THROW(validate(s));
  s.connectivity(0, 2) = 0.0;
  EXPECT_THROW(validate(s), ValidationError);
}

TEST(Validate, LoopOrderMustBePermutation) {
  auto s = fixture::square_structure();
  s.panels[0].loop_order = LoopOrder{{0, 1, 1, 3}, {false, false, false, false}};
  EXPECT_THROW(validate(s), ValidationError);
  s.panels[0].loop_order = LoopOrder{{0, 3, 2, 1}, {false, true, true, true}};
  EXPECT_NO_THROW(validate(s));
}

TEST(Stage, NamesRoundTrip) {
  for (Stage st : {Stage::Raw, Stage::TopologyRefined, Stage::GeometryRefined, Stage::GroundTruth})
    EXPECT_EQ(stage_from_string(to_string(st)), st);
  EXPECT_THROW(stage_from_string("cooked"), ValidationError);
}

TEST(ResampleCurve, StraightSegmentThreePoints) {
  const Curve3D c = fixture::line_curve(0, {0, 0, 0}, {1, 0, 0}, 7);
  const auto r = resample_curve(c, 3);
  ASSERT_EQ(r.curve.points.size(), 3u);
  EXPECT_DOUBLE_EQ(r.curve.points[0].x, 0.0);
  EXPECT_NEAR(r.curve.points[1].x, 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(r.curve.points[2].x, 1.0);
  EXPECT_FALSE(r.degenerate);
}

TEST(ResampleCurve, TwoPointsAreTheEndpoints) {
  std::mt19937_64 rng(3);
  Curve3D c;
  c.points = fixture::random_points<Point3>(rng, 17);
  const auto r = resample_curve(c, 2);
  ASSERT_EQ(r.curve.points.size(), 2u);
  EXPECT_EQ(r.curve.points[0], c.points.front());
  EXPECT_EQ(r.curve.points[1], c.points.back());
}

TEST(ResampleCurve, DegenerateCurveIsFlagged) {
  Curve3D c;
  c.points = {{1, 2, 3}, {1, 2, 3}, {1, 2, 3}};
  const auto r = resample_curve(c, 5);
  EXPECT_TRUE(r.degenerate);
  for (const Point3& p : r.curve.points) EXPECT_EQ(p, (Point3{1, 2, 3}));
  EXPECT_THROW(resample_curve(c, 1), ValidationError);
}

// Length is preserved whenever resampling keeps every input vertex: collinear
// inputs, and uniform inputs whose segment count divides n - 1.
TEST(ResampleCurve, LengthPreservedWhenVerticesAreKept) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Curve3D c;
    std::vector<double> ts = {0.0, 1.0};
    for (int k = 0; k < 8; ++k) ts.push_back(u(rng));
    std::sort(ts.begin(), ts.end());
    const Point3 a{u(rng), u(rng), u(rng)}, b{u(rng) + 1, u(rng), u(rng)};
    for (double t : ts) c.points.push_back(lerp(a, b, t));
    const double len = polyline_length<Point3>(c.points);
    const auto r = resample_curve(c, c.points.size() + 5);
    EXPECT_NEAR(polyline_length<Point3>(r.curve.points), len, 1e-6 * len);
  }
  for (int trial = 0; trial < 20; ++trial) {
    Curve3D zig;
    for (int k = 0; k <= 6; ++k) zig.points.push_back({0.1 * k, (k % 2) * 0.1, 0.0});  // equal-length segments
    const double len = polyline_length<Point3>(zig.points);
    const auto r = resample_curve(zig, 6 * (trial + 1) + 1);
    EXPECT_NEAR(polyline_length<Point3>(r.curve.points), len, 1e-6 * len);
  }
}

// Smooth space curves: they do not fold back within one chord length, which
// is where the equal-chord solution is unique.
TEST(ResampleCurve, IdempotentAtFixedN) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const double ax = 0.5 + u(rng), ay = 0.3 * u(rng), az = 0.3 * u(rng), w = 1.0 + 3.0 * u(rng), ph = 6.0 * u(rng);
    Curve3D c;
    const int m = 20 + 10 * (trial % 8);
    for (int k = 0; k < m; ++k) {
      const double t = static_cast<double>(k) / (m - 1);
      c.points.push_back({ax * t, ay * std::sin(w * t + ph), az * std::cos(0.5 * w * t)});
    }
    for (std::size_t n : {5u, 17u, 50u, 120u}) {
      const auto once = resample_curve(c, n).curve;
      const auto twice = resample_curve(once, n).curve;
      ASSERT_EQ(once.points.size(), n);
      for (std::size_t k = 0; k < n; ++k) EXPECT_LT(distance(once.points[k], twice.points[k]), 1e-9);
    }
  }
}

TEST(ResampleCurve, EqualSpacingAndEndpoints) {
  Curve3D arc;
  for (int k = 0; k <= 200; ++k) {
    const double t = 1.5 * k / 200.0;
    arc.points.push_back({std::cos(t), std::sin(t), 0.1 * t});
  }
  const auto r = resample_curve(arc, 25).curve;
  EXPECT_EQ(r.points.front(), arc.points.front());
  EXPECT_EQ(r.points.back(), arc.points.back());
  const double d0 = distance(r.points[0], r.points[1]);
  for (std::size_t k = 1; k < r.points.size(); ++k) EXPECT_NEAR(distance(r.points[k - 1], r.points[k]), d0, 1e-9);
  // Equal chords on a smooth curve are equal arcs up to O(h^2).
  EXPECT_NEAR(polyline_length<Point3>(r.points), polyline_length<Point3>(arc.points), 1e-3);
}

TEST(AdaptiveSampling, StrideFormula) {
  const Patch3D p = fixture::flat_patch(0, 1.0, 20);
  const double h = 1.0 / 19.0;
  EXPECT_NEAR(mean_neighbor_spacing(p), h, 1e-12);
  EXPECT_EQ(adaptive_stride(p, 0.05), 1);
  EXPECT_EQ(sample_patch_adaptive(p, 0.05).size(), 400u);
  EXPECT_EQ(adaptive_stride(p, 0.11), 2);
  // 10 x 10 stride points plus the three corners the stride misses.
  EXPECT_EQ(sample_patch_adaptive(p, 0.11).size(), 103u);
  EXPECT_EQ(sample_patch_adaptive(p, 1e-9).size(), 400u);
  EXPECT_EQ(sample_patch_adaptive(p, 100.0).size(), 4u);
}

TEST(AdaptiveSampling, SubsetOfGridWithIndependentStride) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  for (int trial = 0; trial < 40; ++trial) {
    const double size = u(rng);
    const Patch3D p = fixture::flat_patch(0, size, 20);
    const double target = u(rng) * 0.1;
    // Independent recomputation: spacing of a uniform grid is size / (G - 1).
    const int k = std::max(1, std::min(20, static_cast<int>(std::lround(target / (size / 19.0)))));
    EXPECT_EQ(adaptive_stride(p, target), k);
    const auto pts = sample_patch_adaptive(p, target);
    std::set<std::pair<double, double>> grid;
    for (const Point3& q : p.points) grid.insert({q.x, q.y});
    for (const Point3& q : pts) EXPECT_TRUE(grid.count({q.x, q.y}));
    std::size_t per_axis = 0;
    for (int i = 0; i < 20; i += k) ++per_axis;
    std::size_t expected = per_axis * per_axis;
    const bool last = (19 % k) == 0;
    if (!last) expected += 3;
    EXPECT_EQ(pts.size(), expected);
  }
}

TEST(Denormalize, ScalesPoints) {
  Panel p;
  p.scale = 0.35;
  p.edges = {fixture::line_edge({1, -1}, {-1, -1})};
  const auto d = denormalize_panel(p);
  EXPECT_DOUBLE_EQ(d[0].points[0].x, 0.35);
  EXPECT_DOUBLE_EQ(d[0].points[0].y, -0.35);
  p.scale = 1.0;
  EXPECT_EQ(denormalize_panel(p)[0].points, p.edges[0].points);
}

TEST(Denormalize, AreaScalesWithSquare) {
  Panel p;
  p.scale = 0.42;
  p.edges = fixture::square_edges(1.5, {-0.75, -0.75}, 9);
  auto ring = [](const std::vector<Edge2D>& edges) {
    std::vector<Point2> r;
    for (const auto& e : edges)
      for (std::size_t k = 0; k + 1 < e.points.size(); ++k) r.push_back(e.points[k]);
    return r;
  };
  const double a0 = oracle::shoelace(ring(p.edges));
  const double a1 = oracle::shoelace(ring(denormalize_panel(p)));
  EXPECT_NEAR(a1, a0 * 0.42 * 0.42, 1e-12);
}

TEST(Denormalize, RenormalizingRecoversInput) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Edge2D> edges;
    for (int k = 0; k < 5; ++k) edges.push_back(fixture::line_edge({u(rng), u(rng)}, {u(rng), u(rng)}, k, 10));
    Panel p;
    p.scale = normalize_edges(edges);
    p.edges = edges;
    double max_abs = 0.0;
    for (const auto& e : edges)
      for (const auto& q : e.points) max_abs = std::max({max_abs, std::abs(q.x), std::abs(q.y)});
    EXPECT_NEAR(max_abs, 1.0, 1e-12);
    auto metric = denormalize_panel(p);
    const double s = normalize_edges(metric);
    EXPECT_NEAR(s, p.scale, 1e-9);
    for (std::size_t e = 0; e < edges.size(); ++e)
      for (std::size_t k = 0; k < edges[e].points.size(); ++k)
        EXPECT_LT(distance(metric[e].points[k], edges[e].points[k]), 1e-9);
  }
}

TEST(Traversal, AppliesOrderAndFlips) {
  Panel p;
  p.edges = fixture::square_edges();
  p.loop_order = LoopOrder{{0, 3, 2, 1}, {false, true, true, true}};
  const auto t = traversal_edges(p);
  EXPECT_EQ(t[1].start(), (Point2{0, 0}));
  EXPECT_EQ(t[1].end(), (Point2{0, 1}));
  EXPECT_TRUE(t[1].reversed);
}

TEST(AsRaw, DropsMasksAndSetsStage) {
  auto s = fixture::square_structure();
  s.masks = ValidityMasks{{1}, {1, 1, 1, 1}};
  const auto r = as_raw(s);
  EXPECT_EQ(r.stage, Stage::Raw);
  EXPECT_FALSE(r.masks.has_value());
  EXPECT_EQ(r.curves.size(), s.curves.size());
}
