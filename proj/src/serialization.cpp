#include "seamkit/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "seamkit/errors.hpp"

namespace seamkit {

using nlohmann::json;

double canonical_double(double v) {
  if (!std::isfinite(v) || v == 0.0) return v == 0.0 ? 0.0 : v;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", kJsonDigits, v);
  return std::strtod(buf, nullptr);
}

namespace {

json point_json(Point3 p) {
  return json::array({canonical_double(p.x), canonical_double(p.y), canonical_double(p.z)});
}

json point_json(Point2 p) { return json::array({canonical_double(p.x), canonical_double(p.y)}); }

template <typename P>
json points_json(const std::vector<P>& pts) {
  json arr = json::array();
  for (const P& p : pts) arr.push_back(point_json(p));
  return arr;
}

const json& field(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(where + ": missing key '" + key + "'");
  return *it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where + ": expected a number");
  return j.get<double>();
}

Point3 point3(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) throw ParseError(where + ": expected [x,y,z]");
  return {number(j[0], where), number(j[1], where), number(j[2], where)};
}

Point2 point2(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw ParseError(where + ": expected [x,y]");
  return {number(j[0], where), number(j[1], where)};
}

template <typename P, typename F>
std::vector<P> points(const json& j, const std::string& where, F parse) {
  if (!j.is_array()) throw ParseError(where + ": expected an array of points");
  std::vector<P> out;
  out.reserve(j.size());
  for (const json& p : j) out.push_back(parse(p, where));
  return out;
}

std::vector<std::uint8_t> mask(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected an array");
  std::vector<std::uint8_t> out;
  for (const json& v : j) {
    if (!v.is_number_integer()) throw ParseError(where + ": expected integers");
    const auto x = v.get<long long>();
    if (x != 0 && x != 1) throw ValidationError(where + ": mask entry is not binary");
    out.push_back(static_cast<std::uint8_t>(x));
  }
  return out;
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ParseError(where + ": expected an integer");
  return j.get<int>();
}

}  // namespace

json to_json(const GarmentStructure& s) {
  json j;
  j["stage"] = std::string(to_string(s.stage));

  json curves = json::array();
  for (const Curve3D& c : s.curves) {
    curves.push_back({{"id", c.id},
                      {"points", points_json(c.points)},
                      {"validity_prob", canonical_double(c.validity_prob)}});
  }
  j["curves"] = std::move(curves);

  json patches = json::array();
  for (const Patch3D& p : s.patches) {
    patches.push_back({{"id", p.id},
                       {"grid_size", p.grid_size},
                       {"points", points_json(p.points)},
                       {"validity_prob", canonical_double(p.validity_prob)}});
  }
  j["patches"] = std::move(patches);

  // Row-major, patches x curves.
  json conn = json::array();
  for (double v : s.connectivity.values()) conn.push_back(canonical_double(v));
  j["connectivity"] = std::move(conn);

  json panels = json::array();
  for (const Panel& p : s.panels) {
    json edges = json::array();
    for (const Edge2D& e : p.edges) {
      edges.push_back({{"source_curve_id", e.source_curve_id},
                       {"reversed", e.reversed},
                       {"points", points_json(e.points)}});
    }
    json pj = {{"patch_id", p.patch_id}, {"scale", canonical_double(p.scale)}, {"edges", std::move(edges)}};
    if (p.loop_order) {
      json flips = json::array();
      for (bool f : p.loop_order->flips) flips.push_back(f);
      pj["loop_order"] = {{"order", p.loop_order->order}, {"flips", std::move(flips)}};
    }
    if (p.closure_residual) pj["closure_residual"] = canonical_double(*p.closure_residual);
    panels.push_back(std::move(pj));
  }
  j["panels"] = std::move(panels);

  if (s.masks) {
    j["masks"] = {{"patches", s.masks->patches}, {"curves", s.masks->curves}};
  }
  if (s.annotations) {
    const Annotations& a = *s.annotations;
    j["annotations"] = {{"curve_origin", a.curve_origin},
                        {"curve_kind", a.curve_kind},
                        {"patch_origin", a.patch_origin},
                        {"patch_kind", a.patch_kind}};
  }
  return j;
}

GarmentStructure structure_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("garment file: top level must be an object");
  GarmentStructure s;
  const json& stage = field(j, "stage", "garment file");
  if (!stage.is_string()) throw ParseError("stage: expected a string");
  s.stage = stage_from_string(stage.get<std::string>());

  for (const json& c : field(j, "curves", "garment file")) {
    const std::string where = "curve";
    Curve3D curve;
    curve.id = integer(field(c, "id", where), where);
    curve.points = points<Point3>(field(c, "points", where), where, point3);
    curve.validity_prob = number(field(c, "validity_prob", where), where);
    s.curves.push_back(std::move(curve));
  }

  for (const json& p : field(j, "patches", "garment file")) {
    const std::string where = "patch";
    Patch3D patch;
    patch.id = integer(field(p, "id", where), where);
    patch.grid_size = integer(field(p, "grid_size", where), where);
    patch.points = points<Point3>(field(p, "points", where), where, point3);
    patch.validity_prob = number(field(p, "validity_prob", where), where);
    s.patches.push_back(std::move(patch));
  }

  const json& conn = field(j, "connectivity", "garment file");
  if (!conn.is_array()) throw ParseError("connectivity: expected a row-major array of numbers");
  const std::size_t rows = s.patches.size();
  const std::size_t cols = s.curves.size();
  if (conn.size() != rows * cols)
    throw ValidationError("connectivity: " + std::to_string(conn.size()) + " entries but structure has " +
                          std::to_string(rows) + " patches x " + std::to_string(cols) + " curves");
  s.connectivity = Connectivity(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) s.connectivity(r, c) = number(conn[r * cols + c], "connectivity");

  for (const json& pj : field(j, "panels", "garment file")) {
    const std::string where = "panel";
    Panel panel;
    panel.patch_id = integer(field(pj, "patch_id", where), where);
    panel.scale = number(field(pj, "scale", where), where);
    for (const json& ej : field(pj, "edges", where)) {
      Edge2D e;
      e.source_curve_id = integer(field(ej, "source_curve_id", "edge"), "edge");
      const json& rev = field(ej, "reversed", "edge");
      if (!rev.is_boolean()) throw ParseError("edge: reversed must be a boolean");
      e.reversed = rev.get<bool>();
      e.points = points<Point2>(field(ej, "points", "edge"), "edge", point2);
      panel.edges.push_back(std::move(e));
    }
    if (auto it = pj.find("loop_order"); it != pj.end()) {
      LoopOrder lo;
      for (const json& v : field(*it, "order", "loop_order")) lo.order.push_back(integer(v, "loop_order"));
      for (const json& v : field(*it, "flips", "loop_order")) {
        if (!v.is_boolean()) throw ParseError("loop_order: flips must be booleans");
        lo.flips.push_back(v.get<bool>());
      }
      panel.loop_order = std::move(lo);
    }
    if (auto it = pj.find("closure_residual"); it != pj.end())
      panel.closure_residual = number(*it, "closure_residual");
    s.panels.push_back(std::move(panel));
  }

  if (auto it = j.find("masks"); it != j.end()) {
    ValidityMasks m;
    m.patches = mask(field(*it, "patches", "masks"), "masks.patches");
    m.curves = mask(field(*it, "curves", "masks"), "masks.curves");
    s.masks = std::move(m);
  } else if (s.stage != Stage::Raw) {
    s.masks = ValidityMasks{std::vector<std::uint8_t>(s.patches.size(), 1),
                            std::vector<std::uint8_t>(s.curves.size(), 1)};
  }

  if (auto it = j.find("annotations"); it != j.end()) {
    try {
      Annotations a;
      a.curve_origin = field(*it, "curve_origin", "annotations").get<std::vector<int>>();
      a.curve_kind = field(*it, "curve_kind", "annotations").get<std::vector<std::string>>();
      a.patch_origin = field(*it, "patch_origin", "annotations").get<std::vector<int>>();
      a.patch_kind = field(*it, "patch_kind", "annotations").get<std::vector<std::string>>();
      s.annotations = std::move(a);
    } catch (const json::exception& e) {
      throw ParseError(std::string("annotations: ") + e.what());
    }
  }

  validate(s);
  return s;
}

std::string canonical_dump(const json& j) { return j.dump() + "\n"; }

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GarmentStructure load(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  try {
    return structure_from_json(j);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void save(const GarmentStructure& s, const std::filesystem::path& path) {
  validate(s);
  write_text_file(path, canonical_dump(to_json(s)));
}

}  // namespace seamkit
