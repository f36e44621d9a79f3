#pragma once

#include <CLI11.hpp>

namespace seamkit::cli {

/// Config reader for CLI11 that accepts JSON (when the file starts with '{')
/// and falls back to TOML otherwise. Nested JSON objects map to subcommand
/// sections, arrays to multi-value options.
class JsonOrTomlConfig : public CLI::ConfigTOML {
 public:
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override;
};

}  // namespace seamkit::cli
