// seamkit command-line front end: synth, refine, eval, render, triangulate.
//
// Exit status: 0 success, 1 partial failure (some samples failed), 2 usage
// or validation error.

#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json_config.hpp"
#include "seamkit/errors.hpp"
#include "seamkit/export.hpp"
#include "seamkit/metrics.hpp"
#include "seamkit/pipeline.hpp"
#include "seamkit/serialization.hpp"
#include "seamkit/synth.hpp"
#include "seamkit/triangulate.hpp"

namespace fs = std::filesystem;
using namespace seamkit;

namespace {

constexpr int kOk = 0;
constexpr int kPartial = 1;
constexpr int kUsage = 2;

template <typename T>
std::string pair_str(const std::pair<T, T>& p) {
  std::ostringstream os;
  os << p.first << ',' << p.second;
  return os.str();
}

int default_threads() {
  if (const char* env = std::getenv("SEAMKIT_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring invalid SEAMKIT_THREADS='" << env << "'\n";
  }
  return omp_get_max_threads();
}

struct Input {
  std::string name;  // file stem
  fs::path path;
};

// A single file, or every *.json directly inside a directory, by name.
std::vector<Input> list_inputs(const fs::path& in) {
  std::vector<Input> out;
  if (fs::is_regular_file(in)) {
    out.push_back({in.stem().string(), in});
    return out;
  }
  if (!fs::is_directory(in)) throw IoError("input not found: " + in.string());
  for (const auto& e : fs::directory_iterator(in))
    if (e.is_regular_file() && e.path().extension() == ".json") out.push_back({e.path().stem().string(), e.path()});
  std::sort(out.begin(), out.end(), [](const Input& a, const Input& b) { return a.name < b.name; });
  return out;
}

// Outcome of one per-sample work item.
struct ItemStatus {
  bool ok = true;
  bool usage = false;  // validation / stage error
  std::string message;
};

template <typename Fn>
ItemStatus guarded(Fn&& fn) {
  ItemStatus s;
  try {
    fn();
  } catch (const ValidationError& e) {
    s = {false, true, e.what()};
  } catch (const ParseError& e) {
    s = {false, true, e.what()};
  } catch (const std::exception& e) {
    s = {false, false, e.what()};
  }
  return s;
}

int summarize(const std::vector<Input>& inputs, const std::vector<ItemStatus>& status) {
  bool usage = false, failed = false;
  for (std::size_t i = 0; i < status.size(); ++i) {
    if (status[i].ok) continue;
    std::cerr << inputs[i].name << ": " << status[i].message << "\n";
    usage = usage || status[i].usage;
    failed = true;
  }
  return usage ? kUsage : failed ? kPartial : kOk;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  std::string tmpl = "rect";
  int count = 10;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> corruption_seed;
  TemplateSpec spec;
  CorruptionSpec corruption;
  std::string out;
};

void add_synth(CLI::App& app, SynthArgs& a) {
  auto* sub = app.add_subcommand("synth", "Generate paired ground-truth / raw-prediction corpora");
  sub->add_option("--template", a.tmpl, "Template: rect, trapezoid, skirt, tube or mixed")
      ->check(CLI::IsMember({"rect", "trapezoid", "skirt", "tube", "mixed"}));
  sub->add_option("--count", a.count, "Number of samples")->check(CLI::NonNegativeNumber);
  sub->add_option("--seed", a.seed, "Corpus seed (per-sample seeds are derived from it)");
  sub->add_option("--corruption_seed", a.corruption_seed, "Corruption seed (defaults to --seed)");
  sub->add_option("--panel_count", a.spec.panel_count, "Panels per sample");
  sub->add_option("--edge_count_range", a.spec.edge_count_range, "Edges per panel [min max] (trapezoid, skirt)")
      ->default_str(pair_str(a.spec.edge_count_range));
  sub->add_option("--scale_range", a.spec.scale_range, "Panel half-extent in meters [min max]")
      ->default_str(pair_str(a.spec.scale_range));
  sub->add_option("--duplicate_curve_prob", a.corruption.duplicate_curve_prob, "Chance per curve of a near-duplicate");
  sub->add_option("--duplicate_jitter", a.corruption.duplicate_jitter, "Duplicate offset in meters");
  sub->add_option("--subcurve_prob", a.corruption.subcurve_prob, "Chance per curve of a 40-60% fragment");
  sub->add_option("--spurious_edge_prob", a.corruption.spurious_edge_prob, "Chance per panel of a spurious chord edge");
  sub->add_option("--endpoint_jitter_sigma", a.corruption.endpoint_jitter_sigma,
                  "Std. dev. of 2D edge endpoint jitter (normalized units)");
  sub->add_option("--prob_noise_sigma", a.corruption.prob_noise_sigma, "Std. dev. of probability noise");
  sub->add_option("--drop_prob", a.corruption.drop_prob, "Chance per patch / curve of a low-probability ghost");
  sub->add_option("--edge_shuffle_prob", a.corruption.edge_shuffle_prob,
                  "Chance per panel that raw edges are shuffled and flipped");
  sub->add_option("--out", a.out, "Output directory (gt/, raw/, manifest.json)")->required();
}

int cmd_synth(SynthArgs& a) {
  CorpusSpec spec;
  spec.tmpl = a.tmpl == "mixed" ? std::nullopt : std::optional<Template>(template_from_string(a.tmpl));
  spec.base = a.spec;
  spec.base.seed = a.seed;
  if (spec.tmpl) spec.base.tmpl = *spec.tmpl;
  spec.corruption = a.corruption;
  spec.corruption.seed = a.corruption_seed.value_or(a.seed);
  spec.count = a.count;
  spec.corruption.validate();
  {
    TemplateSpec probe = spec.base;
    if (!spec.tmpl) probe.tmpl = Template::RectPanel;
    probe.validate();
    if (spec.tmpl == Template::MultiPanelTube && probe.panel_count < 2)
      throw ValidationError("tube template needs at least 2 panels");
  }

  const fs::path out(a.out);
  fs::create_directories(out / "gt");
  fs::create_directories(out / "raw");

  std::vector<Input> names(static_cast<std::size_t>(a.count));
  std::vector<ItemStatus> status(names.size());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < a.count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    names[k].name = sample_name(i, a.count);
    status[k] = guarded([&] {
      const CorpusSample s = make_sample(spec, i);
      save(s.gt, out / "gt" / (s.name + ".json"));
      save(s.raw, out / "raw" / (s.name + ".json"));
    });
  }
  write_text_file(out / "manifest.json", manifest(spec).dump(2) + "\n");
  const int rc = summarize(names, status);
  std::cout << "synth: " << a.count << " samples -> " << out.string() << "\n";
  return rc;
}

// ---------------------------------------------------------------- refine

struct RefineArgs {
  std::string in, out;
  PipelineOptions opt;
  bool no_refine = false;
  bool skip_merge = false, skip_subcurve = false, skip_prune = false, skip_geometry = false;
  bool as_raw = false;
};

void add_refine(CLI::App& app, RefineArgs& a) {
  auto* sub = app.add_subcommand("refine", "Topology + geometry refinement of raw predictions");
  auto& t = a.opt.thresholds;
  auto& r = a.opt.rules;
  auto& g = a.opt.geometry;
  sub->add_option("--in", a.in, "Raw structure file or directory of *.json")->required()->check(CLI::ExistingPath);
  sub->add_option("--out", a.out, "Output directory (NNN.json, logs/NNN.json)")->required();
  sub->add_option("--eps_p", t.eps_p, "Patch validity threshold");
  sub->add_option("--eps_c", t.eps_c, "Curve validity threshold");
  sub->add_option("--eps_adj", t.eps_adj, "Patch-curve adjacency threshold");
  sub->add_option("--dup_cd", t.dup_cd, "Duplicate-merge Chamfer threshold (meters, both directions)");
  sub->add_option("--sub_cd", t.sub_cd, "Sub-curve Chamfer threshold (meters, sub -> main)");
  sub->add_option("--prune_margin", t.prune_margin, "Minimum loop-cost reduction to prune an edge");
  sub->add_option("--brute_force_limit", r.brute_force_limit, "Largest panel solved exactly by loop ordering");
  sub->add_option("--min_edges", r.min_edges, "Pruning never goes below this many edges");
  sub->add_option("--tau_gap", g.tau_gap, "Bad-edge ratio (endpoint gaps / chord)");
  sub->add_option("--scale_clamp", g.scale_clamp, "Similarity scale clamp [min max]")->default_str(pair_str(g.scale_clamp));
  sub->add_option("--closure_tol", g.closure_tol, "Closure tolerance (normalized units)");
  sub->add_option("--edge_samples", g.edge_samples, "Samples on a replacement edge");
  sub->add_flag("--no-refine", a.no_refine, "Threshold filtering only (no merge, sub-curve, pruning or geometry)");
  sub->add_flag("--skip-merge", a.skip_merge, "Skip duplicate-curve merging");
  sub->add_flag("--skip-subcurve", a.skip_subcurve, "Skip sub-curve removal");
  sub->add_flag("--skip-prune", a.skip_prune, "Skip loop pruning");
  sub->add_flag("--skip-geometry", a.skip_geometry, "Stop after topology refinement");
  sub->add_flag("--as-raw", a.as_raw, "Accept ground-truth inputs as raw predictions");
}

int cmd_refine(RefineArgs& a) {
  PipelineOptions opt = a.opt;
  if (a.no_refine) {
    const PipelineOptions t = PipelineOptions::threshold_only();
    opt.rules.merge_duplicates = t.rules.merge_duplicates;
    opt.rules.remove_subcurves = t.rules.remove_subcurves;
    opt.rules.prune_loops = t.rules.prune_loops;
    opt.refine_geometry = false;
  }
  if (a.skip_merge) opt.rules.merge_duplicates = false;
  if (a.skip_subcurve) opt.rules.remove_subcurves = false;
  if (a.skip_prune) opt.rules.prune_loops = false;
  if (a.skip_geometry) opt.refine_geometry = false;
  opt.validate();

  const auto inputs = list_inputs(a.in);
  const fs::path out(a.out);
  fs::create_directories(out / "logs");
  std::vector<ItemStatus> status(inputs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(inputs.size()); ++i) {
    const Input& in = inputs[static_cast<std::size_t>(i)];
    status[static_cast<std::size_t>(i)] = guarded([&] {
      GarmentStructure s = load(in.path);
      if (a.as_raw && s.stage == Stage::GroundTruth) s = as_raw(s);
      if (s.stage != Stage::Raw)
        throw ValidationError("expected stage raw, found " + std::string(to_string(s.stage)));
      const PipelineResult r = refine(s, opt);
      save(r.structure, out / (in.name + ".json"));
      write_text_file(out / "logs" / (in.name + ".json"), canonical_dump(to_json(r)));
    });
  }
  const int rc = summarize(inputs, status);
  std::cout << "refine: " << inputs.size() << " inputs -> " << out.string() << "\n";
  return rc;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::string pred, gt, format = "table", out;
  MetricConfig cfg;
};

void add_eval(CLI::App& app, EvalArgs& a) {
  auto* sub = app.add_subcommand("eval", "Matched-element metrics of predictions against ground truth");
  sub->add_option("--pred", a.pred, "Directory of predicted structures")->required()->check(CLI::ExistingDirectory);
  sub->add_option("--gt", a.gt, "Directory of ground-truth structures")->required()->check(CLI::ExistingDirectory);
  sub->add_option("--format", a.format, "Report format: table or json")->check(CLI::IsMember({"table", "json"}));
  sub->add_option("--out", a.out, "Write the report to this file instead of stdout");
  sub->add_option("--w_geo", a.cfg.w_geo, "Geometry loss weight");
  sub->add_option("--w_cls", a.cfg.w_cls, "Classification (BCE) loss weight");
  sub->add_option("--w_scale", a.cfg.w_scale, "Panel scale loss weight");
  sub->add_option("--raster_resolution", a.cfg.raster_resolution, "IoU raster size (pixels per side)");
  sub->add_option("--negative_weight", a.cfg.negative_weight, "BCE weight of invalid (target 0) terms");
  sub->add_option("--adaptive_spacing", a.cfg.adaptive_spacing, "Target spacing (meters) of adaptive patch sampling");
}

int cmd_eval(EvalArgs& a) {
  a.cfg.validate();
  const CorpusReport r = evaluate_corpus(a.pred, a.gt, a.cfg);
  const std::string text = a.format == "json" ? to_json(r).dump(2) + "\n" : format_table(r);
  if (a.out.empty())
    std::cout << text;
  else {
    if (const fs::path parent = fs::path(a.out).parent_path(); !parent.empty()) fs::create_directories(parent);
    write_text_file(a.out, text);
  }
  for (const auto& m : r.missing) std::cerr << "missing pair: " << m << "\n";
  for (const auto& s : r.samples)
    if (!s.report) std::cerr << s.name << ": " << s.error << "\n";
  return r.complete() ? kOk : kPartial;
}

// ---------------------------------------------------------------- render / triangulate

struct RenderArgs {
  std::string in, out;
};

void add_render(CLI::App& app, RenderArgs& a) {
  auto* sub = app.add_subcommand("render", "SVG panel layouts and OBJ point sets");
  sub->add_option("--in", a.in, "Structure file or directory of *.json")->required()->check(CLI::ExistingPath);
  sub->add_option("--out", a.out, "Output directory (NNN.svg, NNN.obj)")->required();
}

int cmd_render(RenderArgs& a) {
  const auto inputs = list_inputs(a.in);
  const fs::path out(a.out);
  fs::create_directories(out);
  std::vector<ItemStatus> status(inputs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(inputs.size()); ++i) {
    const Input& in = inputs[static_cast<std::size_t>(i)];
    status[static_cast<std::size_t>(i)] = guarded([&] {
      const GarmentStructure s = load(in.path);
      export_svg(s, out / (in.name + ".svg"));
      export_obj(s, out / (in.name + ".obj"));
    });
  }
  const int rc = summarize(inputs, status);
  std::cout << "render: " << inputs.size() << " inputs -> " << out.string() << "\n";
  return rc;
}

struct TriangulateArgs {
  std::string in, out;
  double closure_tol = 1e-6;
};

void add_triangulate(CLI::App& app, TriangulateArgs& a) {
  auto* sub = app.add_subcommand("triangulate", "Triangulate panel interiors; report closure per panel");
  sub->add_option("--in", a.in, "Structure file or directory of *.json")->required()->check(CLI::ExistingPath);
  sub->add_option("--out", a.out, "Output directory (NNN.obj, triangulation.json)")->required();
  sub->add_option("--closure_tol", a.closure_tol, "Largest joint gap accepted (normalized units)");
}

int cmd_triangulate(TriangulateArgs& a) {
  if (!(a.closure_tol > 0.0)) throw ValidationError("closure_tol must be positive");
  const auto inputs = list_inputs(a.in);
  const fs::path out(a.out);
  fs::create_directories(out);

  std::vector<ItemStatus> status(inputs.size());
  std::vector<nlohmann::json> reports(inputs.size());
  std::vector<int> failures(inputs.size(), 0);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(inputs.size()); ++i) {
    const auto k = static_cast<std::size_t>(i);
    const Input& in = inputs[k];
    status[k] = guarded([&] {
      const GarmentStructure s = load(in.path);
      std::vector<PanelMesh> meshes(s.panels.size());
      std::vector<PanelMeshEntry> entries;
      nlohmann::json panels = nlohmann::json::array();
      for (std::size_t p = 0; p < s.panels.size(); ++p) {
        nlohmann::json pj = {{"patch_id", s.panels[p].patch_id}};
        try {
          meshes[p] = triangulate_panel(s.panels[p], a.closure_tol);
          entries.push_back({s.panels[p].patch_id, s.panels[p].scale, &meshes[p]});
          pj["status"] = "ok";
          pj["triangles"] = meshes[p].triangles.size();
        } catch (const OpenBoundaryError& e) {
          pj["status"] = "open";
          pj["max_gap"] = e.max_gap;
          ++failures[k];
        } catch (const SelfIntersectionError& e) {
          pj["status"] = "self_intersection";
          pj["edges"] = {e.edge_a, e.edge_b};
          ++failures[k];
        } catch (const std::exception& e) {
          pj["status"] = "failed";
          pj["message"] = e.what();
          ++failures[k];
        }
        panels.push_back(std::move(pj));
      }
      export_obj(s, out / (in.name + ".obj"), entries);
      reports[k] = {{"name", in.name}, {"panels", std::move(panels)}};
    });
  }

  int total = 0, failed = 0;
  nlohmann::json samples = nlohmann::json::array();
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    if (!status[k].ok) continue;
    for (const auto& p : reports[k]["panels"]) {
      ++total;
      std::cout << inputs[k].name << " panel " << p["patch_id"].get<int>() << ": " << p["status"].get<std::string>();
      if (p.contains("max_gap")) std::cout << " (gap " << p["max_gap"].get<double>() << ")";
      if (p.contains("edges")) std::cout << " (edges " << p["edges"][0] << ", " << p["edges"][1] << ")";
      std::cout << "\n";
    }
    failed += failures[k];
    samples.push_back(reports[k]);
  }
  write_text_file(out / "triangulation.json",
                  nlohmann::json{{"panels", total}, {"failures", failed}, {"samples", std::move(samples)}}.dump(2) + "\n");
  std::cout << "triangulate: " << total - failed << "/" << total << " panels ok\n";
  const int rc = summarize(inputs, status);
  return rc != kOk ? rc : failed > 0 ? kPartial : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"seamkit: sewing-pattern structure synthesis, refinement and evaluation"};
  app.option_defaults()->always_capture_default();
  app.config_formatter(std::make_shared<seamkit::cli::JsonOrTomlConfig>());
  app.set_config("--config", "", "TOML or JSON config file; command-line flags take precedence");
  int threads = default_threads();
  app.add_option("--threads", threads, "Worker threads (default: SEAMKIT_THREADS or all cores)")
      ->check(CLI::PositiveNumber);
  app.require_subcommand(1);
  app.fallthrough();

  SynthArgs synth;
  RefineArgs refine_args;
  EvalArgs eval;
  RenderArgs render;
  TriangulateArgs tri;
  add_synth(app, synth);
  add_refine(app, refine_args);
  add_eval(app, eval);
  add_render(app, render);
  add_triangulate(app, tri);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  omp_set_num_threads(threads);

  try {
    if (app.got_subcommand("synth")) return cmd_synth(synth);
    if (app.got_subcommand("refine")) return cmd_refine(refine_args);
    if (app.got_subcommand("eval")) return cmd_eval(eval);
    if (app.got_subcommand("render")) return cmd_render(render);
    if (app.got_subcommand("triangulate")) return cmd_triangulate(tri);
  } catch (const seamkit::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const seamkit::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const seamkit::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kPartial;
  }
  return kUsage;
}
