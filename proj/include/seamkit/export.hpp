#pragma once

#include <filesystem>
#include <span>
#include <string>

#include "seamkit/pattern_model.hpp"
#include "seamkit/triangulate.hpp"

namespace seamkit {

/// Panels laid out left to right in metric units, one <g> per panel, one
/// <polyline> per edge with its own stroke colour.
std::string svg_document(const GarmentStructure& s);
void export_svg(const GarmentStructure& s, const std::filesystem::path& path);

struct PanelMeshEntry {
  int patch_id = 0;
  double scale = 1.0;  // mesh vertices are panel-normalized
  const PanelMesh* mesh = nullptr;
};

/// Patch grid points and curve samples as vertices (in that order), curves as
/// `l` polylines. Panel meshes, when given, follow as flat (z = 0) objects
/// with triangle faces in metric units.
std::string obj_document(const GarmentStructure& s, std::span<const PanelMeshEntry> meshes = {});
void export_obj(const GarmentStructure& s, const std::filesystem::path& path,
                std::span<const PanelMeshEntry> meshes = {});

}  // namespace seamkit
