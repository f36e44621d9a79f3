#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "seamkit/chamfer.hpp"
#include "seamkit/errors.hpp"
#include "seamkit/loop_order.hpp"
#include "seamkit/refine_topology.hpp"
#include "seamkit/synth.hpp"

using namespace seamkit;

namespace {

std::vector<Edge2D> random_edges(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Edge2D> out;
  for (std::size_t k = 0; k < n; ++k)
    out.push_back(fixture::line_edge({u(rng), u(rng)}, {u(rng), u(rng)}, static_cast<int>(k)));
  return out;
}

// Closed polygon with shuffled, randomly flipped edges.
std::vector<Edge2D> scrambled_polygon(std::mt19937_64& rng, std::size_t n) {
  std::vector<Point2> v;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = 2.0 * 3.141592653589793 * static_cast<double>(k) / static_cast<double>(n);
    v.push_back({std::cos(t), std::sin(t)});
  }
  std::vector<Edge2D> edges;
  for (std::size_t k = 0; k < n; ++k) edges.push_back(fixture::line_edge(v[k], v[(k + 1) % n], static_cast<int>(k), 5));
  std::shuffle(edges.begin(), edges.end(), rng);
  std::bernoulli_distribution flip(0.5);
  for (auto& e : edges)
    if (flip(rng)) std::reverse(e.points.begin(), e.points.end());
  return edges;
}

// Raw structure: one panel per patch, an edge (the curve's xy trace) for
// every listed adjacency.
struct Adj {
  std::size_t patch, curve;
  double prob = 1.0;
};

GarmentStructure raw_structure(const std::vector<double>& patch_probs, const std::vector<seamkit::Curve3D>& curves,
                               const std::vector<Adj>& adj) {
  GarmentStructure s;
  for (std::size_t i = 0; i < patch_probs.size(); ++i)
    s.add_patch(fixture::flat_patch(static_cast<int>(i), 1.0, kPatchGrid, {3.0 * static_cast<double>(i), 0, 0},
                                    patch_probs[i]));
  for (const auto& c : curves) s.add_curve(c);
  for (std::size_t i = 0; i < patch_probs.size(); ++i) s.panels.push_back(Panel{static_cast<int>(i), {}, 1.0, {}, {}});
  for (const Adj& a : adj) {
    s.connectivity(a.patch, a.curve) = a.prob;
    Edge2D e;
    e.source_curve_id = curves[a.curve].id;
    for (const Point3& p : curves[a.curve].points) e.points.push_back({p.x, p.y});
    s.panels[a.patch].edges.push_back(e);
  }
  return s;
}

}  // namespace

TEST(LoopCost, HandExamples) {
  EXPECT_DOUBLE_EQ(loop_cost(fixture::square_edges()), 0.0);
  const std::vector<Edge2D> two = {fixture::line_edge({0, 0}, {1, 0}), fixture::line_edge({0, 0}, {1, 0})};
  EXPECT_DOUBLE_EQ(loop_cost(two), 2.0);
  const std::vector<Edge2D> one = {fixture::line_edge({0, 0}, {3, 4})};
  EXPECT_DOUBLE_EQ(loop_cost(one), 25.0);
}

TEST(LoopCost, FlippingOneEdgeAddsInducedGaps) {
  auto sq = fixture::square_edges();
  std::reverse(sq[1].points.begin(), sq[1].points.end());
  // Edge 1 now runs (1,1)->(1,0): gaps (1,0)->(1,1) and (1,0)->(1,1), each 1.
  EXPECT_DOUBLE_EQ(loop_cost(sq), 2.0);
  EXPECT_DOUBLE_EQ(loop_cost(fixture::square_edges(), LoopOrder{{0, 1, 2, 3}, {false, true, false, false}}), 2.0);
}

TEST(LoopCost, RotationAndFullReversalInvariant) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const auto e = random_edges(rng, 6);
    const double c = loop_cost(e);
    auto rotated = e;
    std::rotate(rotated.begin(), rotated.begin() + 1 + trial % 5, rotated.end());
    EXPECT_NEAR(loop_cost(rotated), c, 1e-12);
    auto reversed = e;
    std::reverse(reversed.begin(), reversed.end());
    for (auto& x : reversed) std::reverse(x.points.begin(), x.points.end());
    EXPECT_NEAR(loop_cost(reversed), c, 1e-12);
  }
}

TEST(OptimalLoop, RecoversScrambledPolygon) {
  std::mt19937_64 rng(8);
  for (std::size_t n : {3u, 4u, 6u, 8u, 12u, 20u}) {
    const auto edges = scrambled_polygon(rng, n);
    const LoopSolution s = optimal_loop_order(edges);
    EXPECT_NEAR(s.cost, 0.0, 1e-20) << n;
    EXPECT_EQ(s.mode, n <= kDefaultBruteForceLimit ? LoopSearch::Exact : LoopSearch::Heuristic);
    EXPECT_EQ(s.order.order.front(), 0);
    EXPECT_FALSE(s.order.flips.front());
    EXPECT_NEAR(loop_cost(edges, s.order), s.cost, 1e-12);
  }
}

TEST(OptimalLoop, SingleEdgeWrapsAround) {
  const std::vector<Edge2D> one = {fixture::line_edge({0, 0}, {0.3, 0.4})};
  const auto s = optimal_loop_order(one);
  EXPECT_NEAR(s.cost, 0.25, 1e-15);
}

TEST(OptimalLoop, ExactMatchesEnumerationOracle) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const auto edges = random_edges(rng, 1 + static_cast<std::size_t>(trial % 6));
    const LoopSolution s = exact_loop_order(edges);
    EXPECT_NEAR(s.cost, oracle::loop_minimum(edges), 1e-12);
    EXPECT_NEAR(loop_cost(edges, s.order), s.cost, 1e-12);
  }
}

TEST(OptimalLoop, HeuristicNeverBeatsExact) {
  std::mt19937_64 rng(43);
  int equal = 0;
  const int trials = 200;
  for (int trial = 0; trial < trials; ++trial) {
    const auto edges = random_edges(rng, 6);
    const double exact = exact_loop_order(edges).cost;
    const double heur = heuristic_loop_order(edges).cost;
    EXPECT_GE(heur, exact - 1e-12);
    if (heur <= exact + 1e-12) ++equal;
  }
  EXPECT_GE(equal, trials * 95 / 100);
}

TEST(OptimalLoop, ExactRefusesHugeInput) {
  std::mt19937_64 rng(1);
  EXPECT_THROW(exact_loop_order(random_edges(rng, 21)), ValidationError);
}

TEST(PruneLoop, SpuriousDiagonalRemoved) {
  auto edges = fixture::square_edges();
  edges.push_back(fixture::line_edge({0, 0}, {1, 1}, 9));
  const auto r = prune_loop_edges(edges);
  ASSERT_EQ(r.removed.size(), 1u);
  EXPECT_EQ(r.removed[0].source_curve_id, 9);
  EXPECT_NEAR(r.solution.cost, 0.0, 1e-20);
  EXPECT_EQ(r.retained, (std::vector<int>{0, 1, 2, 3}));
}

TEST(PruneLoop, OptimalLoopUntouched) {
  const auto r = prune_loop_edges(fixture::square_edges());
  EXPECT_TRUE(r.removed.empty());
  EXPECT_EQ(r.retained.size(), 4u);
}

TEST(PruneLoop, DuplicateSideLosesOneCopy) {
  auto edges = fixture::square_edges();
  edges.push_back(fixture::line_edge({1, 0}, {1, 1}, 7));
  const auto r = prune_loop_edges(edges);
  ASSERT_EQ(r.removed.size(), 1u);
  EXPECT_TRUE(r.removed[0].source_curve_id == 1 || r.removed[0].source_curve_id == 7);
  EXPECT_NEAR(r.solution.cost, 0.0, 1e-20);
}

TEST(PruneLoop, TerminatesAndNeverIncreasesCost) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(trial % 6);
    const auto edges = random_edges(rng, n);
    const auto r = prune_loop_edges(edges);
    EXPECT_LE(r.removed.size(), n);
    EXPECT_GE(r.retained.size(), std::min<std::size_t>(3, n));
    EXPECT_LE(r.solution.cost, r.initial_cost + 1e-12);
    EXPECT_EQ(r.retained.size() + r.removed.size(), n);
  }
}

TEST(FilterThresholds, PatchCutoffAndInclusiveAdjacency) {
  const std::vector<Curve3D> curves = {fixture::line_curve(0, {0, 0, 0}, {1, 0, 0})};
  const auto s = raw_structure({0.71, 0.69}, curves, {{0, 0, 0.5}, {1, 0, 0.9}});
  const auto f = filter_thresholds(s, {});
  EXPECT_EQ(f.masks->patches, (std::vector<std::uint8_t>{1, 0}));
  EXPECT_EQ(f.connectivity(0, 0), 1.0);  // 0.5 >= eps_adj
  EXPECT_EQ(f.connectivity(1, 0), 0.0);  // invalid patch
  EXPECT_EQ(f.stage, Stage::TopologyRefined);
  ASSERT_EQ(f.panels.size(), 1u);
  EXPECT_EQ(f.panels[0].edges.size(), 1u);
}

TEST(FilterThresholds, AllCertainKeepsEverything) {
  const auto gt = generate(TemplateSpec{Template::Trapezoid, 3, {4, 6}, {0.2, 0.6}, 4});
  const auto f = filter_thresholds(as_raw(gt), {});
  EXPECT_TRUE(std::all_of(f.masks->patches.begin(), f.masks->patches.end(), [](auto m) { return m == 1; }));
  EXPECT_TRUE(std::all_of(f.masks->curves.begin(), f.masks->curves.end(), [](auto m) { return m == 1; }));
  EXPECT_EQ(f.connectivity.values(), gt.connectivity.values());
}

TEST(FilterThresholds, MonotoneInThresholds) {
  CorpusSpec spec;
  spec.tmpl.reset();
  spec.count = 6;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int i = 0; i < spec.count; ++i) {
    const auto raw = make_sample(spec, i).raw;
    for (int trial = 0; trial < 10; ++trial) {
      TopologyThresholds lo{u(rng), u(rng), u(rng)};
      TopologyThresholds hi = lo;
      hi.eps_p = std::min(1.0, lo.eps_p + 0.1);
      hi.eps_c = std::min(1.0, lo.eps_c + 0.2);
      hi.eps_adj = std::min(1.0, lo.eps_adj + 0.05);
      const auto a = filter_thresholds(raw, lo), b = filter_thresholds(raw, hi);
      for (std::size_t k = 0; k < a.masks->patches.size(); ++k) EXPECT_LE(b.masks->patches[k], a.masks->patches[k]);
      for (std::size_t k = 0; k < a.masks->curves.size(); ++k) EXPECT_LE(b.masks->curves[k], a.masks->curves[k]);
      for (std::size_t k = 0; k < a.connectivity.values().size(); ++k)
        EXPECT_LE(b.connectivity.values()[k], a.connectivity.values()[k]);
    }
  }
}

TEST(FilterThresholds, ZeroValidPatchesGivesEmptyResult) {
  const std::vector<Curve3D> curves = {fixture::line_curve(0, {0, 0, 0}, {1, 0, 0})};
  const auto s = raw_structure({0.1, 0.2}, curves, {{0, 0}, {1, 0}});
  const auto [r, log] = refine_topology(s);
  EXPECT_TRUE(r.panels.empty());
  EXPECT_TRUE(std::all_of(r.connectivity.values().begin(), r.connectivity.values().end(), [](double v) { return v == 0.0; }));
}

TEST(MergeDuplicates, LowerProbabilityRemovedAndAdjacencyUnioned) {
  const std::vector<Curve3D> curves = {fixture::line_curve(0, {0, 0, 0}, {1, 0, 0}, 50, 0.9),
                                       fixture::line_curve(1, {0, 0, 0}, {1, 0, 0}, 50, 0.8)};
  const auto s = filter_thresholds(raw_structure({1.0, 1.0}, curves, {{0, 0}, {1, 1}}), {});
  const auto [m, log] = merge_duplicate_curves(s, {});
  EXPECT_EQ(m.masks->curves, (std::vector<std::uint8_t>{1, 0}));
  EXPECT_EQ(m.connectivity(0, 0), 1.0);
  EXPECT_EQ(m.connectivity(1, 0), 1.0);
  EXPECT_EQ(m.connectivity(1, 1), 0.0);
  ASSERT_EQ(log.merged_pairs.size(), 1u);
  EXPECT_EQ(log.merged_pairs[0].kept_curve, 0);
  EXPECT_EQ(log.merged_pairs[0].removed_curve, 1);
  // The panel that saw only the removed curve now references the survivor.
  ASSERT_EQ(m.panels[1].edges.size(), 1u);
  EXPECT_EQ(m.panels[1].edges[0].source_curve_id, 0);
}

TEST(MergeDuplicates, FiveCentimetresApartIsKept) {
  const std::vector<Curve3D> curves = {fixture::line_curve(0, {0, 0, 0}, {1, 0, 0}, 50, 0.9),
                                       fixture::line_curve(1, {0, 0.05, 0}, {1, 0.05, 0}, 50, 0.8)};
  ASSERT_NEAR(oracle::chamfer_directional(curves[0].points, curves[1].points), 0.05, 1e-12);
  const auto s = filter_thresholds(raw_structure({1.0}, curves, {{0, 0}, {0, 1}}), {});
  const auto [m, log] = merge_duplicate_curves(s, {});
  EXPECT_TRUE(log.merged_pairs.empty());
  EXPECT_EQ(m.masks->curves, (std::vector<std::uint8_t>{1, 1}));
}

TEST(MergeDuplicates, SingleCurveUnchanged) {
  const std::vector<Curve3D> curves = {fixture::line_curve(0, {0, 0, 0}, {1, 0, 0})};
  const auto s = filter_thresholds(raw_structure({1.0}, curves, {{0, 0}}), {});
  const auto [m, log] = merge_duplicate_curves(s, {});
  EXPECT_TRUE(log.merged_pairs.empty());
  EXPECT_EQ(m.connectivity.values(), s.connectivity.values());
}

TEST(MergeDuplicates, NeverLosesAdjacencySupport) {
  CorpusSpec spec;
  spec.tmpl.reset();
  spec.count = 10;
  spec.corruption.duplicate_curve_prob = 0.6;
  for (int i = 0; i < spec.count; ++i) {
    const auto f = filter_thresholds(make_sample(spec, i).raw, {});
    const auto [m, log] = merge_duplicate_curves(f, {});
    // Every patch adjacent to some curve before merging still is afterwards.
    for (std::size_t r = 0; r < f.patches.size(); ++r) {
      bool before = false, after = false;
      for (std::size_t c = 0; c < f.curves.size(); ++c) {
        before = before || f.connectivity(r, c) >= 0.5;
        after = after || m.connectivity(r, c) >= 0.5;
      }
      EXPECT_EQ(before, after);
    }
    // Each removed curve's adjacency moved onto its survivor.
    for (const auto& rec : log.merged_pairs) {
      const auto kept = *m.curve_index(rec.kept_curve), gone = *f.curve_index(rec.removed_curve);
      for (std::size_t r = 0; r < f.patches.size(); ++r)
        if (f.connectivity(r, gone) >= 0.5) EXPECT_EQ(m.connectivity(r, kept), 1.0);
    }
  }
}

TEST(Subcurves, FirstHalfRemoved) {
  const std::vector<Curve3D> curves = {fixture::line_curve(0, {0, 0, 0}, {1, 0, 0}),
                                       fixture::line_curve(1, {0, 0, 0}, {0.5, 0, 0}, 25)};
  const auto s = filter_thresholds(raw_structure({1.0}, curves, {{0, 0}, {0, 1}}), {});
  const auto [r, log] = remove_subcurves(s, {});
  EXPECT_EQ(r.masks->curves, (std::vector<std::uint8_t>{1, 0}));
  ASSERT_EQ(log.removed_subcurves.size(), 1u);
  EXPECT_EQ(log.removed_subcurves[0].main_curve, 0);
  EXPECT_EQ(r.panels[0].edges.size(), 1u);
}

TEST(Subcurves, DifferentAdjacencyKept) {
  const std::vector<Curve3D> curves = {fixture::line_curve(0, {0, 0, 0}, {1, 0, 0}),
                                       fixture::line_curve(1, {0, 0, 0}, {0.5, 0, 0}, 25)};
  const auto s = filter_thresholds(raw_structure({1.0, 1.0}, curves, {{0, 0}, {1, 0}, {0, 1}}), {});
  const auto [r, log] = remove_subcurves(s, {});
  EXPECT_TRUE(log.removed_subcurves.empty());
}

TEST(Subcurves, DirectionalDistanceJustAboveThresholdKept) {
  // A parallel half-length segment offset by 0.041 m.
  // Both sampled every 5 mm so each sub-curve point sits right above a main-curve point.
  const std::vector<Curve3D> curves = {fixture::line_curve(0, {0, 0, 0}, {1, 0, 0}, 201),
                                       fixture::line_curve(1, {0.2, 0, 0.041}, {0.7, 0, 0.041}, 101)};
  const double cd = oracle::chamfer_directional(curves[1].points, curves[0].points);
  ASSERT_NEAR(cd, 0.041, 1e-12);
  const auto s = filter_thresholds(raw_structure({1.0}, curves, {{0, 0}, {0, 1}}), {});
  EXPECT_TRUE(remove_subcurves(s, {}).second.removed_subcurves.empty());
  TopologyThresholds loose;
  loose.sub_cd = 0.042;
  EXPECT_EQ(remove_subcurves(s, loose).second.removed_subcurves.size(), 1u);
}

TEST(RefineTopology, CleanGroundTruthIsNoOp) {
  for (Template t : kAllTemplates) {
    const auto gt = generate(TemplateSpec{t, 3, {4, 6}, {0.2, 0.6}, 12});
    const auto [r, log] = refine_topology(as_raw(gt));
    EXPECT_EQ(r.connectivity.values(), gt.connectivity.values()) << to_string(t);
    EXPECT_TRUE(log.merged_pairs.empty());
    EXPECT_TRUE(log.removed_subcurves.empty());
    EXPECT_TRUE(log.pruned_edges.empty());
    ASSERT_EQ(r.panels.size(), gt.panels.size());
    for (std::size_t i = 0; i < r.panels.size(); ++i) EXPECT_EQ(r.panels[i].edges.size(), gt.panels[i].edges.size());
  }
}

TEST(RefineTopology, PanelsMatchConnectivityRowsAndAreDeterministic) {
  CorpusSpec spec;
  spec.tmpl.reset();
  spec.count = 12;
  for (int i = 0; i < spec.count; ++i) {
    const auto raw = make_sample(spec, i).raw;
    const auto [a, la] = refine_topology(raw);
    const auto [b, lb] = refine_topology(raw);
    EXPECT_EQ(to_json(la), to_json(lb));
    EXPECT_NO_THROW(validate(a));
    for (const Panel& p : a.panels) {
      const std::size_t row = *a.patch_index(p.patch_id);
      std::size_t ones = 0;
      for (std::size_t c = 0; c < a.curves.size(); ++c) ones += a.connectivity(row, c) >= 0.5;
      EXPECT_EQ(ones, p.edges.size());
    }
  }
}

TEST(RefineTopology, RejectsNonRawInput) {
  EXPECT_THROW(refine_topology(fixture::square_structure()), ValidationError);
  TopologyThresholds bad;
  bad.eps_c = 0.0;
  EXPECT_THROW(bad.validate(), ValidationError);
}
