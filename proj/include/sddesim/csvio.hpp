#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sddesim/ensemble.hpp"
#include "sddesim/scheme.hpp"

namespace sdde {

// Pinned column sets (schema version 1). Acceptance and plotting
// consume these files; headers are golden-tested.
inline constexpr const char* kMeansHeader = "t,psi,initial,dt,mean,stderr";
inline constexpr const char* kEcdfHeader = "psi,initial,dt,value,cdf";
inline constexpr const char* kDistancesHeader = "t,method,value,n,epsilon";

// Deterministic shortest-exact double formatting ("%.17g").
std::string format_double(double v);

void write_means_csv(const std::string& path, const EnsembleResults& r);
void write_ecdf_csv(const std::string& path, const EnsembleResults& r);
void write_distances_csv(const std::string& path, const EnsembleResults& r);

void write_trajectory_csv(const std::string& path, const Trajectory& traj);
void write_segment_csv(const std::string& path, const Segment& seg);

// Minimal CSV reader: no quoting, comma-separated, first row is the
// header. ParseError carries the file and line number.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;  // ParseError if absent
};

CsvTable read_csv(const std::string& path);

// FNV-1a 64-bit digest of a file's bytes, hex-encoded. Integrity tag
// for manifests, not a cryptographic hash.
std::string fnv1a_file_hex(const std::string& path);

}  // namespace sdde
