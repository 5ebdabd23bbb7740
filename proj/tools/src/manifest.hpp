#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "table.hpp"

namespace floquetlab::cli {

struct OutputFile {
  std::string file;
  std::vector<Column> columns;  // empty for JSON outputs
};

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> params;
  std::string hash;
  std::string version;
  std::string timestamp;
  std::vector<OutputFile> outputs;

  nlohmann::ordered_json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

inline constexpr const char* kManifestName = "manifest.json";

std::string sha256_hex(std::string_view data);

/// SHA-256 of the compact JSON {"command": ..., "params": {...}}; std::map
/// keeps the keys sorted, so equal parameter maps hash equally.
std::string params_hash(const std::string& command, const std::map<std::string, std::string>& params);

/// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// The manifest in `dir`, if present and readable.
std::optional<RunManifest> read_manifest(const std::filesystem::path& dir);

/// ISO 8601 UTC, second resolution.
std::string utc_timestamp();

}  // namespace floquetlab::cli
