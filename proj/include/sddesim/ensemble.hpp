#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sddesim/config.hpp"
#include "sddesim/measure.hpp"
#include "sddesim/truncation.hpp"

namespace sdde {

// In-memory results of one ensemble run; the CSV layer is a plain
// serialization of this.
struct EnsembleResults {
  Grid grid;
  std::vector<std::string> initial_labels;
  std::vector<std::string> psi_labels;
  std::vector<std::int64_t> mean_steps;
  // means[initial][psi][obs]
  std::vector<std::vector<std::vector<MeanResult>>> means;
  // Raw psi values at the ECDF step: ecdf_values[initial][psi][sample]
  std::int64_t ecdf_step = 0;
  std::vector<std::vector<std::vector<double>>> ecdf_values;
  // Segment measures at the distance steps (subsampled, one initial).
  std::vector<EmpiricalSegmentMeasure> distance_measures;
  std::string distance_initial;
  std::vector<CauchyRow> distances;
  std::vector<double> bl_bounds;  // aligned with distances
  AdmissibilityReport admissibility;
  StreamStats stats;  // aggregated over all trajectories
};

// Pure compute path (no files); trajectories are distributed over a
// bounded worker pool and merged by index, so results do not depend on
// the worker count.
EnsembleResults run_ensemble_core(const ResolvedConfig& cfg);

struct RunOutputs {
  std::vector<std::string> files;  // all written files, manifest last
  std::string manifest_path;
  EnsembleResults results;
};

// Full run: compute, write means.csv / ecdf.csv / distances.csv and the
// manifest into cfg.out_dir. Partial outputs are removed on failure.
RunOutputs run_ensemble(const RunConfig& cfg);

// Order-independent index-parallel loop; rethrows the first worker
// exception. workers < 1 is a usage error.
void parallel_for_indexed(std::size_t count, int workers,
                          const std::function<void(std::size_t)>& body);

}  // namespace sdde
