#include "seamkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <set>
#include <sstream>

#include "seamkit/chamfer.hpp"
#include "seamkit/errors.hpp"
#include "seamkit/loop_order.hpp"
#include "seamkit/raster.hpp"
#include "seamkit/serialization.hpp"

namespace seamkit {

using nlohmann::json;

void MetricConfig::validate() const {
  if (!(w_geo >= 0.0 && w_cls >= 0.0 && w_scale >= 0.0)) throw ValidationError("loss weights must be non-negative");
  if (raster_resolution < 16) throw ValidationError("raster_resolution must be at least 16");
  if (!(negative_weight >= 0.0)) throw ValidationError("negative_weight must be non-negative");
  if (!(adaptive_spacing > 0.0)) throw ValidationError("adaptive_spacing must be positive");
}

namespace {

// Parallel loops park exceptions per item; the lowest index wins.
void rethrow_first(const std::vector<std::exception_ptr>& errors) {
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<std::size_t> valid_patches(const GarmentStructure& s) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < s.patches.size(); ++i)
    if (s.patch_valid(i)) out.push_back(i);
  return out;
}

std::vector<std::size_t> valid_curves(const GarmentStructure& s) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < s.curves.size(); ++i)
    if (s.curve_valid(i)) out.push_back(i);
  return out;
}

// Matches subsets and maps the result back to full element indices.
template <typename P, typename Get>
Matching match_subsets(const std::vector<std::size_t>& pi, const std::vector<std::size_t>& gi, Get get,
                       std::size_t pred_total, std::size_t gt_total, std::vector<double>* cost_out = nullptr) {
  std::vector<std::vector<P>> a, b;
  for (std::size_t i : pi) a.push_back(get(true, i));
  for (std::size_t i : gi) b.push_back(get(false, i));
  const std::vector<double> cost = pairwise_chamfer(a, b);
  const Matching local = hungarian_match(cost, a.size(), b.size());

  Matching m;
  std::vector<char> pred_used(pred_total, 0), gt_used(gt_total, 0);
  for (const auto& [p, g] : local.pairs) {
    const auto fp = static_cast<int>(pi[static_cast<std::size_t>(p)]);
    const auto fg = static_cast<int>(gi[static_cast<std::size_t>(g)]);
    m.pairs.emplace_back(fp, fg);
    const double c = cost[static_cast<std::size_t>(p) * b.size() + static_cast<std::size_t>(g)];
    m.total_cost += c;
    if (cost_out) cost_out->push_back(c);
    pred_used[static_cast<std::size_t>(fp)] = 1;
    gt_used[static_cast<std::size_t>(fg)] = 1;
  }
  for (std::size_t i = 0; i < pred_total; ++i)
    if (!pred_used[i]) m.unmatched_pred.push_back(static_cast<int>(i));
  for (std::size_t i = 0; i < gt_total; ++i)
    if (!gt_used[i]) m.unmatched_gt.push_back(static_cast<int>(i));
  return m;
}

std::map<int, std::size_t> panel_by_patch(const GarmentStructure& s) {
  std::map<int, std::size_t> out;
  for (std::size_t k = 0; k < s.panels.size(); ++k) out.emplace(s.panels[k].patch_id, k);
  return out;
}

struct MatchDetail {
  ElementMatchings m;
  std::vector<double> patch_costs;  // aligned with m.patches.pairs
  std::vector<double> curve_costs;  // aligned with m.curves.pairs
};

MatchDetail match_detail(const GarmentStructure& pred, const GarmentStructure& gt) {
  MatchDetail d;
  d.m.patches = match_subsets<Point3>(
      valid_patches(pred), valid_patches(gt),
      [&](bool is_pred, std::size_t i) { return (is_pred ? pred : gt).patches[i].points; }, pred.patches.size(),
      gt.patches.size(), &d.patch_costs);
  d.m.curves = match_subsets<Point3>(
      valid_curves(pred), valid_curves(gt),
      [&](bool is_pred, std::size_t i) { return (is_pred ? pred : gt).curves[i].points; }, pred.curves.size(),
      gt.curves.size(), &d.curve_costs);

  const auto pred_panels = panel_by_patch(pred);
  const auto gt_panels = panel_by_patch(gt);
  std::vector<std::pair<int, int>> pairs;
  std::vector<char> pred_used(pred.panels.size(), 0), gt_used(gt.panels.size(), 0);
  for (std::size_t k = 0; k < d.m.patches.pairs.size(); ++k) {
    const auto [p, g] = d.m.patches.pairs[k];
    const auto ip = pred_panels.find(pred.patches[static_cast<std::size_t>(p)].id);
    const auto ig = gt_panels.find(gt.patches[static_cast<std::size_t>(g)].id);
    if (ip == pred_panels.end() || ig == gt_panels.end()) continue;
    pairs.emplace_back(static_cast<int>(ip->second), static_cast<int>(ig->second));
    d.m.panels.total_cost += d.patch_costs[k];
    pred_used[ip->second] = 1;
    gt_used[ig->second] = 1;
  }
  std::sort(pairs.begin(), pairs.end());
  d.m.panels.pairs = std::move(pairs);
  for (std::size_t i = 0; i < pred.panels.size(); ++i)
    if (!pred_used[i]) d.m.panels.unmatched_pred.push_back(static_cast<int>(i));
  for (std::size_t i = 0; i < gt.panels.size(); ++i)
    if (!gt_used[i]) d.m.panels.unmatched_gt.push_back(static_cast<int>(i));
  return d;
}

double bce(double p, double target, double negative_weight) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("BCE: probability " + std::to_string(p) + " outside [0, 1]");
  const double q = std::clamp(p, kBceClamp, 1.0 - kBceClamp);
  return target > 0.5 ? -std::log(q) : -negative_weight * std::log1p(-q);
}

// Edges of a panel in traversal order; an optimal order is computed when the
// panel does not carry one.
std::vector<Edge2D> ordered_edges(const Panel& p) {
  if (p.loop_order || p.edges.empty()) return traversal_edges(p);
  Panel ordered = p;
  ordered.loop_order = optimal_loop_order(p.edges).order;
  return traversal_edges(ordered);
}

std::vector<Point2> metric_ring_ordered(const Panel& p) {
  std::vector<Point2> ring;
  for (const Edge2D& e : ordered_edges(p))
    for (std::size_t k = 0; k + 1 < e.points.size(); ++k) ring.push_back(p.scale * e.points[k]);
  return ring;
}

std::vector<Point2> metric_boundary(const Panel& p) {
  std::vector<Point2> pts = boundary_points(p);
  for (Point2& q : pts) q = p.scale * q;
  return pts;
}

const Edge2D* edge_for_curve(const Panel& p, int curve_id) {
  for (const Edge2D& e : p.edges)
    if (e.source_curve_id == curve_id) return &e;
  return nullptr;
}

}  // namespace

ElementMatchings match_elements(const GarmentStructure& pred, const GarmentStructure& gt) {
  return match_detail(pred, gt).m;
}

double panel_iou(const Panel& pred, const Panel& gt, int resolution) {
  const auto a = metric_ring_ordered(pred);
  const auto b = metric_ring_ordered(gt);
  return polygon_iou(a, b, resolution);
}

Losses compute_losses(const GarmentStructure& pred, const GarmentStructure& gt, const ElementMatchings& m,
                      const MetricConfig& cfg) {
  cfg.validate();
  Losses l;

  // Geometry: matched patches, curves, and edges of matched panels.
  double geo = 0.0;
  for (const auto& [p, g] : m.patches.pairs)
    geo += chamfer_symmetric<Point3>(pred.patches[static_cast<std::size_t>(p)].points,
                                     gt.patches[static_cast<std::size_t>(g)].points);
  for (const auto& [p, g] : m.curves.pairs)
    geo += chamfer_symmetric<Point3>(pred.curves[static_cast<std::size_t>(p)].points,
                                     gt.curves[static_cast<std::size_t>(g)].points);
  double scale = 0.0;
  for (const auto& [p, g] : m.panels.pairs) {
    const Panel& pp = pred.panels[static_cast<std::size_t>(p)];
    const Panel& gp = gt.panels[static_cast<std::size_t>(g)];
    for (const Edge2D& e : pp.edges) {
      const auto ci = pred.curve_index(e.source_curve_id);
      if (!ci) continue;
      const int gi = m.curves.gt_for(static_cast<int>(*ci));
      if (gi < 0) continue;
      const Edge2D* ge = edge_for_curve(gp, gt.curves[static_cast<std::size_t>(gi)].id);
      if (ge) geo += chamfer_symmetric<Point2>(e.points, ge->points);
    }
    const double ds = pp.scale - gp.scale;
    scale += ds * ds;
  }

  // Classification: matched -> 1, unmatched -> 0; connectivity targets
  // follow the matched indices into the ground truth.
  const double w = cfg.negative_weight;
  double patch_bce = 0.0, curve_bce = 0.0, conn_bce = 0.0;
  std::vector<int> patch_gt(pred.patches.size(), -1), curve_gt(pred.curves.size(), -1);
  for (const auto& [p, g] : m.patches.pairs) patch_gt[static_cast<std::size_t>(p)] = g;
  for (const auto& [p, g] : m.curves.pairs) curve_gt[static_cast<std::size_t>(p)] = g;
  for (std::size_t i = 0; i < pred.patches.size(); ++i)
    patch_bce += bce(pred.patches[i].validity_prob, patch_gt[i] >= 0 ? 1.0 : 0.0, w);
  for (std::size_t i = 0; i < pred.curves.size(); ++i)
    curve_bce += bce(pred.curves[i].validity_prob, curve_gt[i] >= 0 ? 1.0 : 0.0, w);
  for (std::size_t r = 0; r < pred.connectivity.rows(); ++r) {
    for (std::size_t c = 0; c < pred.connectivity.cols(); ++c) {
      double target = 0.0;
      if (patch_gt[r] >= 0 && curve_gt[c] >= 0)
        target = gt.connectivity(static_cast<std::size_t>(patch_gt[r]), static_cast<std::size_t>(curve_gt[c])) >= 0.5
                     ? 1.0
                     : 0.0;
      conn_bce += bce(pred.connectivity(r, c), target, w);
    }
  }
  double cls = 0.0;
  if (!pred.patches.empty()) cls += patch_bce / static_cast<double>(pred.patches.size());
  if (!pred.curves.empty()) cls += curve_bce / static_cast<double>(pred.curves.size());
  if (!pred.connectivity.values().empty()) cls += conn_bce / static_cast<double>(pred.connectivity.values().size());

  l.geo = cfg.w_geo * geo;
  l.cls = cfg.w_cls * cls;
  l.scale = cfg.w_scale * scale;
  l.total = l.geo + l.cls + l.scale;
  return l;
}

double clamp_floor_loss_cls(const GarmentStructure& pred, const MetricConfig& cfg) {
  // Targets of 1 cost -log(1 - eps); targets of 0 cost -w log(1 - eps).
  const double floor = -std::log1p(-kBceClamp);
  const double group = std::max(1.0, cfg.negative_weight) * floor;
  int groups = 0;
  groups += !pred.patches.empty();
  groups += !pred.curves.empty();
  groups += !pred.connectivity.values().empty();
  return cfg.w_cls * groups * group;
}

double overall_accuracy(double acc_p, double acc_e) { return acc_p * acc_e; }

MetricReport evaluate(const GarmentStructure& pred, const GarmentStructure& gt, const MetricConfig& cfg) {
  cfg.validate();
  const MatchDetail d = match_detail(pred, gt);
  MetricReport r;
  r.sample_count = 1;

  const bool count_ok = pred.panels.size() == gt.panels.size();
  r.acc_p = count_ok ? 1.0 : 0.0;
  if (count_ok) {
    // Unmatched panels count as wrong; two empty patterns agree vacuously.
    if (gt.panels.empty()) {
      r.acc_e = 1.0;
    } else {
      int correct = 0;
      for (const auto& [p, g] : d.m.panels.pairs)
        correct += pred.panels[static_cast<std::size_t>(p)].edges.size() ==
                   gt.panels[static_cast<std::size_t>(g)].edges.size();
      r.acc_e = static_cast<double>(correct) / static_cast<double>(gt.panels.size());
    }
    r.acc_e_samples = 1;
  }
  r.acc_o = overall_accuracy(*r.acc_p, r.acc_e.value_or(0.0));

  const std::size_t np = d.m.panels.pairs.size();
  if (np > 0) {
    std::vector<double> cd(np), iou(np);
    std::vector<std::exception_ptr> errors(np);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(np); ++k) {
      try {
        const auto [p, g] = d.m.panels.pairs[static_cast<std::size_t>(k)];
        const Panel& pp = pred.panels[static_cast<std::size_t>(p)];
        const Panel& gp = gt.panels[static_cast<std::size_t>(g)];
        const auto a = metric_boundary(pp);
        const auto b = metric_boundary(gp);
        cd[static_cast<std::size_t>(k)] = a.empty() || b.empty() ? 0.0 : chamfer_symmetric<Point2>(a, b);
        iou[static_cast<std::size_t>(k)] = panel_iou(pp, gp, cfg.raster_resolution);
      } catch (...) {
        errors[static_cast<std::size_t>(k)] = std::current_exception();
      }
    }
    rethrow_first(errors);
    double cs = 0.0, is = 0.0;
    for (std::size_t k = 0; k < np; ++k) {
      cs += cd[k];
      is += iou[k];
    }
    r.cd_e = cs / static_cast<double>(np);
    r.iou = is / static_cast<double>(np);
    r.panel_pairs = static_cast<int>(np);
  }

  const std::size_t nq = d.m.patches.pairs.size();
  if (nq > 0) {
    double base = 0.0;
    for (double c : d.patch_costs) base += c;
    std::vector<double> adapt(nq);
    std::vector<std::exception_ptr> errors(nq);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(nq); ++k) {
      try {
        const auto [p, g] = d.m.patches.pairs[static_cast<std::size_t>(k)];
        const auto a = sample_patch_adaptive(pred.patches[static_cast<std::size_t>(p)], cfg.adaptive_spacing);
        const auto b = sample_patch_adaptive(gt.patches[static_cast<std::size_t>(g)], cfg.adaptive_spacing);
        adapt[static_cast<std::size_t>(k)] = chamfer_symmetric<Point3>(a, b);
      } catch (...) {
        errors[static_cast<std::size_t>(k)] = std::current_exception();
      }
    }
    rethrow_first(errors);
    double as = 0.0;
    for (double c : adapt) as += c;
    r.cd_p_base = base / static_cast<double>(nq);
    r.cd_p_adapt = as / static_cast<double>(nq);
    r.patch_pairs = static_cast<int>(nq);
  }

  const std::size_t nc = d.m.curves.pairs.size();
  if (nc > 0) {
    double s = 0.0;
    for (double c : d.curve_costs) s += c;
    r.cd_c = s / static_cast<double>(nc);
    r.curve_pairs = static_cast<int>(nc);
  }

  const Losses l = compute_losses(pred, gt, d.m, cfg);
  r.loss_geo = l.geo;
  r.loss_cls = l.cls;
  r.loss_scale = l.scale;
  r.loss_total = l.total;
  return r;
}

MetricReport aggregate(std::span<const MetricReport> reports) {
  MetricReport out;
  double acc_p = 0.0, acc_e = 0.0, cd_e = 0.0, iou = 0.0, cd_pb = 0.0, cd_pa = 0.0, cd_c = 0.0;
  double lg = 0.0, lc = 0.0, ls = 0.0, lt = 0.0;
  for (const MetricReport& r : reports) {
    const double n = r.sample_count;
    out.sample_count += r.sample_count;
    acc_p += r.acc_p.value_or(0.0) * n;
    if (r.acc_e) {
      acc_e += *r.acc_e * r.acc_e_samples;
      out.acc_e_samples += r.acc_e_samples;
    }
    if (r.cd_e) cd_e += *r.cd_e * r.panel_pairs;
    if (r.iou) iou += *r.iou * r.panel_pairs;
    if (r.cd_e) out.panel_pairs += r.panel_pairs;
    if (r.cd_p_base) {
      cd_pb += *r.cd_p_base * r.patch_pairs;
      cd_pa += r.cd_p_adapt.value_or(0.0) * r.patch_pairs;
      out.patch_pairs += r.patch_pairs;
    }
    if (r.cd_c) {
      cd_c += *r.cd_c * r.curve_pairs;
      out.curve_pairs += r.curve_pairs;
    }
    lg += r.loss_geo * n;
    lc += r.loss_cls * n;
    ls += r.loss_scale * n;
    lt += r.loss_total * n;
  }
  if (out.sample_count == 0) return out;
  const double n = out.sample_count;
  out.acc_p = acc_p / n;
  if (out.acc_e_samples > 0) out.acc_e = acc_e / out.acc_e_samples;
  out.acc_o = overall_accuracy(*out.acc_p, out.acc_e.value_or(0.0));
  if (out.panel_pairs > 0) {
    out.cd_e = cd_e / out.panel_pairs;
    out.iou = iou / out.panel_pairs;
  }
  if (out.patch_pairs > 0) {
    out.cd_p_base = cd_pb / out.patch_pairs;
    out.cd_p_adapt = cd_pa / out.patch_pairs;
  }
  if (out.curve_pairs > 0) out.cd_c = cd_c / out.curve_pairs;
  out.loss_geo = lg / n;
  out.loss_cls = lc / n;
  out.loss_scale = ls / n;
  out.loss_total = lt / n;
  return out;
}

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> opt_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if (!j.at(key).is_number()) throw ParseError(std::string("metric report: '") + key + "' is not a number");
  return j.at(key).get<double>();
}

double num_from(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw ParseError(std::string("metric report: missing number '") + key + "'");
  return j.at(key).get<double>();
}

int int_from(const json& j, const char* key) {
  if (!j.contains(key)) return 0;
  if (!j.at(key).is_number_integer()) throw ParseError(std::string("metric report: '") + key + "' is not an integer");
  return j.at(key).get<int>();
}

}  // namespace

json to_json(const MetricReport& r) {
  return {{"acc_p", opt(r.acc_p)},
          {"acc_e", opt(r.acc_e)},
          {"acc_o", opt(r.acc_o)},
          {"cd_e", opt(r.cd_e)},
          {"cd_p_base", opt(r.cd_p_base)},
          {"cd_p_adapt", opt(r.cd_p_adapt)},
          {"cd_c", opt(r.cd_c)},
          {"iou", opt(r.iou)},
          {"loss_geo", r.loss_geo},
          {"loss_cls", r.loss_cls},
          {"loss_scale", r.loss_scale},
          {"loss_total", r.loss_total},
          {"sample_count", r.sample_count},
          {"acc_e_samples", r.acc_e_samples},
          {"panel_pairs", r.panel_pairs},
          {"patch_pairs", r.patch_pairs},
          {"curve_pairs", r.curve_pairs}};
}

MetricReport report_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("metric report: expected an object");
  MetricReport r;
  r.acc_p = opt_from(j, "acc_p");
  r.acc_e = opt_from(j, "acc_e");
  r.acc_o = opt_from(j, "acc_o");
  r.cd_e = opt_from(j, "cd_e");
  r.cd_p_base = opt_from(j, "cd_p_base");
  r.cd_p_adapt = opt_from(j, "cd_p_adapt");
  r.cd_c = opt_from(j, "cd_c");
  r.iou = opt_from(j, "iou");
  r.loss_geo = num_from(j, "loss_geo");
  r.loss_cls = num_from(j, "loss_cls");
  r.loss_scale = num_from(j, "loss_scale");
  r.loss_total = num_from(j, "loss_total");
  r.sample_count = int_from(j, "sample_count");
  r.acc_e_samples = int_from(j, "acc_e_samples");
  r.panel_pairs = int_from(j, "panel_pairs");
  r.patch_pairs = int_from(j, "patch_pairs");
  r.curve_pairs = int_from(j, "curve_pairs");
  return r;
}

bool CorpusReport::complete() const {
  if (!missing.empty()) return false;
  return std::all_of(samples.begin(), samples.end(), [](const SampleReport& s) { return s.report.has_value(); });
}

namespace {

std::set<std::string> json_files(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::set<std::string> out;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".json") out.insert(entry.path().filename().string());
  return out;
}

}  // namespace

CorpusReport evaluate_corpus(const std::filesystem::path& pred_dir, const std::filesystem::path& gt_dir,
                             const MetricConfig& cfg) {
  cfg.validate();
  const auto pred_files = json_files(pred_dir);
  const auto gt_files = json_files(gt_dir);

  CorpusReport out;
  std::vector<std::string> names;
  for (const auto& f : gt_files) (pred_files.count(f) ? names : out.missing).push_back(f);
  for (const auto& f : pred_files)
    if (!gt_files.count(f)) out.missing.push_back(f);
  std::sort(out.missing.begin(), out.missing.end());

  out.samples.resize(names.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(names.size()); ++i) {
    SampleReport& s = out.samples[static_cast<std::size_t>(i)];
    s.name = names[static_cast<std::size_t>(i)];
    try {
      s.report = evaluate(load(pred_dir / s.name), load(gt_dir / s.name), cfg);
    } catch (const std::exception& e) {
      s.error = e.what();
    }
  }

  std::vector<MetricReport> ok;
  for (const SampleReport& s : out.samples)
    if (s.report) ok.push_back(*s.report);
  out.aggregate = aggregate(ok);
  return out;
}

json to_json(const CorpusReport& r) {
  json samples = json::array();
  for (const SampleReport& s : r.samples) {
    json j = {{"name", s.name}};
    if (s.report)
      j["report"] = to_json(*s.report);
    else
      j["error"] = s.error;
    samples.push_back(std::move(j));
  }
  return {{"chamfer", kChamferConvention},
          {"aggregate", to_json(r.aggregate)},
          {"samples", std::move(samples)},
          {"missing", r.missing}};
}

namespace {

std::string cell(const std::optional<double>& v, const char* fmt) {
  if (!v) return "-";
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, *v);
  return buf;
}

}  // namespace

std::string format_table(const CorpusReport& r) {
  const std::vector<std::string> header = {"sample", "Acc_p", "Acc_e", "Acc_o", "CD_e", "IoU", "CD_p(base)",
                                           "CD_p(adapt)", "CD_c"};
  std::vector<std::vector<std::string>> rows;
  auto add = [&](const std::string& name, const MetricReport& m) {
    rows.push_back({name, cell(m.acc_p, "%.4f"), cell(m.acc_e, "%.4f"), cell(m.acc_o, "%.4f"),
                    cell(m.cd_e, "%.6f"), cell(m.iou, "%.4f"), cell(m.cd_p_base, "%.6f"),
                    cell(m.cd_p_adapt, "%.6f"), cell(m.cd_c, "%.6f")});
  };
  for (const SampleReport& s : r.samples) {
    if (s.report)
      add(s.name, *s.report);
    else
      rows.push_back({s.name, "error: " + s.error});
  }
  add("ALL", r.aggregate);

  std::vector<std::size_t> width(header.size(), 0);
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows)
    if (row.size() == header.size())
      for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());

  std::ostringstream os;
  os << "# chamfer: " << kChamferConvention << "\n";
  auto line = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << "  ";
      if (row.size() == header.size()) {
        const std::string pad(width[c] - row[c].size(), ' ');
        os << (c == 0 ? row[c] + pad : pad + row[c]);
      } else {
        os << row[c];
      }
    }
    os << "\n";
  };
  line(header);
  for (const auto& row : rows) line(row);
  for (const auto& m : r.missing) os << "# missing pair: " << m << "\n";
  return os.str();
}

}  // namespace seamkit
