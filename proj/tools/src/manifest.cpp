#include "manifest.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace floquetlab::cli {

namespace fs = std::filesystem;

nlohmann::ordered_json RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["params"] = params;
  j["hash"] = hash;
  j["version"] = version;
  j["timestamp"] = timestamp;
  auto outs = nlohmann::ordered_json::array();
  for (const auto& o : outputs) {
    nlohmann::ordered_json entry;
    entry["file"] = o.file;
    if (!o.columns.empty()) {
      auto cols = nlohmann::ordered_json::array();
      for (const auto& c : o.columns) cols.push_back({{"name", c.name}, {"unit", c.unit}});
      entry["columns"] = std::move(cols);
    }
    outs.push_back(std::move(entry));
  }
  j["outputs"] = std::move(outs);
  return j;
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.params = j.at("params").get<std::map<std::string, std::string>>();
  m.hash = j.at("hash").get<std::string>();
  m.version = j.at("version").get<std::string>();
  m.timestamp = j.at("timestamp").get<std::string>();
  for (const auto& o : j.at("outputs")) {
    OutputFile f;
    f.file = o.at("file").get<std::string>();
    if (o.contains("columns")) {
      for (const auto& c : o["columns"]) {
        f.columns.push_back({c.at("name").get<std::string>(), c.at("unit").get<std::string>()});
      }
    }
    m.outputs.push_back(std::move(f));
  }
  return m;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

std::string params_hash(const std::string& command, const std::map<std::string, std::string>& params) {
  nlohmann::json j;
  j["command"] = command;
  j["params"] = params;
  return sha256_hex(j.dump());
}

void write_atomic(const fs::path& path, std::string_view content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  fs::rename(tmp, path);
}

std::optional<RunManifest> read_manifest(const fs::path& dir) {
  std::ifstream in(dir / kManifestName);
  if (!in) return std::nullopt;
  try {
    return RunManifest::from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception&) {
    return std::nullopt;
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace floquetlab::cli
