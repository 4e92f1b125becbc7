#include "ghz/manifest.hpp"

#include <algorithm>

#include "ghz/errors.hpp"
#include "ghz/io.hpp"
#include "json.hpp"

namespace ghz {

std::string manifest_json(const Manifest& manifest) {
  nlohmann::json doc;
  doc["config_hash"] = manifest.config_hash;
  doc["seed"] = manifest.seed;
  doc["version"] = manifest.version;
  doc["started_at"] = manifest.started_at;
  doc["finished_at"] = manifest.finished_at;
  auto files = manifest.files;
  std::sort(files.begin(), files.end(),
            [](const ManifestFile& a, const ManifestFile& b) { return a.name < b.name; });
  doc["files"] = nlohmann::json::array();
  for (const auto& file : files)
    doc["files"].push_back({{"name", file.name}, {"sha256", file.sha256}});
  return doc.dump(2) + "\n";
}

void write_manifest(const std::string& dir, const Manifest& manifest) {
  write_file_atomic(dir + "/manifest.json", manifest_json(manifest));
}

Manifest read_manifest(const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("manifest is not valid JSON: ") + e.what());
  }
  Manifest manifest;
  manifest.config_hash = doc.value("config_hash", "");
  manifest.seed = doc.value("seed", std::uint64_t{0});
  manifest.version = doc.value("version", "");
  manifest.started_at = doc.value("started_at", "");
  manifest.finished_at = doc.value("finished_at", "");
  if (doc.contains("files"))
    for (const auto& file : doc["files"])
      manifest.files.push_back({file.value("name", ""), file.value("sha256", "")});
  return manifest;
}

}  // namespace ghz
