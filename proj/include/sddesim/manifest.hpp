#pragma once

#include <string>
#include <vector>

#include "sddesim/config.hpp"
#include "sddesim/truncation.hpp"

namespace sdde {

struct FileChecksum {
  std::string path;  // relative to the manifest's directory
  std::string fnv1a64;
};

// Emitted exactly once per run; the embedded config plus the master
// seed reproduce every CSV byte for byte.
struct RunManifest {
  std::string library_version;
  RunConfig config;
  AdmissibilityReport admissibility;
  double wall_clock_seconds = 0.0;
  std::vector<FileChecksum> outputs;
};

void write_manifest(const std::string& path, const RunManifest& manifest);
RunManifest read_manifest(const std::string& path);

}  // namespace sdde
