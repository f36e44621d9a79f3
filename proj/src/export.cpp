#include "seamkit/export.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "seamkit/serialization.hpp"

namespace seamkit {

namespace {

constexpr double kPixelsPerMeter = 400.0;
constexpr double kGap = 0.1;  // meters between panels

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string stroke(std::size_t k, std::size_t n) {
  const double hue = 360.0 * static_cast<double>(k) / static_cast<double>(std::max<std::size_t>(n, 1));
  return "hsl(" + fmt(hue) + ",70%,40%)";
}

}  // namespace

std::string svg_document(const GarmentStructure& s) {
  std::ostringstream body;
  double cursor = kGap;
  double height = 2.0 * kGap;
  for (const Panel& p : s.panels) {
    const auto edges = denormalize_panel(p);
    double minx = 0.0, maxx = 0.0, miny = 0.0, maxy = 0.0;
    bool first = true;
    for (const Edge2D& e : edges)
      for (const Point2& q : e.points) {
        if (first) {
          minx = maxx = q.x;
          miny = maxy = q.y;
          first = false;
        }
        minx = std::min(minx, q.x);
        maxx = std::max(maxx, q.x);
        miny = std::min(miny, q.y);
        maxy = std::max(maxy, q.y);
      }
    // SVG y grows downward; flip so panels read as drawn.
    const double dx = cursor - minx;
    const double dy = kGap + maxy;
    body << "  <g id=\"panel-" << p.patch_id << "\">\n";
    for (std::size_t k = 0; k < edges.size(); ++k) {
      body << "    <polyline fill=\"none\" stroke=\"" << stroke(k, edges.size())
           << "\" stroke-width=\"2\" data-curve=\"" << edges[k].source_curve_id << "\" points=\"";
      for (std::size_t i = 0; i < edges[k].points.size(); ++i) {
        const Point2 q = edges[k].points[i];
        body << (i ? " " : "") << fmt((q.x + dx) * kPixelsPerMeter) << "," << fmt((dy - q.y) * kPixelsPerMeter);
      }
      body << "\"/>\n";
    }
    body << "  </g>\n";
    cursor += (maxx - minx) + kGap;
    height = std::max(height, (maxy - miny) + 2.0 * kGap);
  }
  const double width = std::max(cursor, 2.0 * kGap);

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(width * kPixelsPerMeter)
     << "\" height=\"" << fmt(height * kPixelsPerMeter) << "\" viewBox=\"0 0 " << fmt(width * kPixelsPerMeter) << " "
     << fmt(height * kPixelsPerMeter) << "\">\n"
     << body.str() << "</svg>\n";
  return os.str();
}

void export_svg(const GarmentStructure& s, const std::filesystem::path& path) {
  write_text_file(path, svg_document(s));
}

std::string obj_document(const GarmentStructure& s, std::span<const PanelMeshEntry> meshes) {
  std::ostringstream os;
  os << "# stage " << to_string(s.stage) << "\n";
  std::size_t next = 1;
  for (const Patch3D& p : s.patches) {
    os << "o patch_" << p.id << "\n";
    for (const Point3& q : p.points) os << "v " << fmt(q.x) << " " << fmt(q.y) << " " << fmt(q.z) << "\n";
    next += p.points.size();
  }
  for (const Curve3D& c : s.curves) {
    os << "o curve_" << c.id << "\n";
    for (const Point3& q : c.points) os << "v " << fmt(q.x) << " " << fmt(q.y) << " " << fmt(q.z) << "\n";
    os << "l";
    for (std::size_t i = 0; i < c.points.size(); ++i) os << " " << next + i;
    os << "\n";
    next += c.points.size();
  }
  for (const PanelMeshEntry& m : meshes) {
    if (!m.mesh) continue;
    os << "o panel_" << m.patch_id << "\n";
    for (const Point2& q : m.mesh->vertices) os << "v " << fmt(m.scale * q.x) << " " << fmt(m.scale * q.y) << " 0\n";
    for (const auto& t : m.mesh->triangles)
      os << "f " << next + static_cast<std::size_t>(t[0]) << " " << next + static_cast<std::size_t>(t[1]) << " "
         << next + static_cast<std::size_t>(t[2]) << "\n";
    next += m.mesh->vertices.size();
  }
  return os.str();
}

void export_obj(const GarmentStructure& s, const std::filesystem::path& path, std::span<const PanelMeshEntry> meshes) {
  write_text_file(path, obj_document(s, meshes));
}

}  // namespace seamkit
