#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ghz {

inline constexpr const char* kVersion = "0.1.0";

struct ManifestFile {
  std::string name;
  std::string sha256;
};

// Written next to every run's outputs; ties the artifacts to the exact
// configuration and seed so a run can be reproduced or audited later.
struct Manifest {
  std::string config_hash;
  std::uint64_t seed = 0;
  std::string version = kVersion;
  std::string started_at;
  std::string finished_at;
  std::vector<ManifestFile> files;  // sorted by name, manifest itself excluded
};

std::string manifest_json(const Manifest& manifest);
void write_manifest(const std::string& dir, const Manifest& manifest);
Manifest read_manifest(const std::string& path);

}  // namespace ghz
