#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "seamkit/pattern_model.hpp"

namespace seamkit {

/// Significant digits written for every floating-point value.
inline constexpr int kJsonDigits = 12;

/// Rounds `v` to kJsonDigits significant digits.
double canonical_double(double v);

nlohmann::json to_json(const GarmentStructure& s);
/// Throws ParseError for schema violations and ValidationError for invariant violations.
GarmentStructure structure_from_json(const nlohmann::json& j);

GarmentStructure load(const std::filesystem::path& path);
/// Validates, then writes the canonical form (sorted keys, rounded floats).
void save(const GarmentStructure& s, const std::filesystem::path& path);

std::string canonical_dump(const nlohmann::json& j);
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace seamkit
