#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sddesim/grid.hpp"
#include "sddesim/measure.hpp"
#include "sddesim/scheme.hpp"

namespace sdde {

struct FunctionalSpec {
  std::string label;  // CSV label
  std::string kind;   // cos-norm | clip-norm
  double param = 0.0; // clip level for clip-norm
};

struct InitialSpecConfig {
  std::string label;
  // brownian | const:v1,v2,... | affine:b1,..;s1,.. | the builtin aliases
  // xi1/xi2/xi3 of the example model
  std::string text;
};

// Everything needed to reproduce a run bit-identically (together with
// the library version and master seed).
struct RunConfig {
  std::string model_name = "paper-example-5.1";
  double phi_coeff = 16.0;
  double phi_power = 4.0;
  double nu = 0.01;

  // Grid: N wins when nonzero, otherwise dt must divide tau exactly.
  std::int64_t N = 0;
  double dt = 1e-3;
  // Horizon: steps win when nonzero, otherwise time must be grid-aligned.
  std::int64_t horizon_steps = 0;
  double horizon_time = 10.0;

  std::size_t samples = 2000;
  std::vector<InitialSpecConfig> initials;
  std::vector<FunctionalSpec> functionals;

  // Observation plan. mean_stride 0 defaults to N/10; ecdf_time < 0
  // defaults to the horizon. Times must be grid-aligned; no rounding.
  std::int64_t mean_stride = 0;
  double ecdf_time = -1.0;
  std::vector<double> distance_times;
  std::string distance_method = "exact";  // exact | entropic | none
  std::string distance_initial;           // label, default last initial
  std::size_t distance_subsample = 512;
  double epsilon = 0.01;

  std::uint64_t master_seed = 12345;
  std::string out_dir = "out";
  int workers = 1;
  bool override_admissibility = false;
};

// Fully resolved plan: validated grid, step indices, concrete initial
// data and functionals.
struct ResolvedConfig {
  RunConfig raw;
  const SddeModel* model = nullptr;
  TruncationRule rule;
  Grid grid;
  std::vector<InitialData> initials;
  std::vector<TestFunctional> functionals;
  std::vector<std::int64_t> mean_steps;
  std::int64_t ecdf_step = 0;
  std::vector<std::int64_t> distance_steps;
  std::size_t distance_initial_index = 0;
  TransportMethod distance_method = TransportMethod::ExactAssignment;
  bool distances_enabled = true;
};

// Collects every violated field into one ConfigError.
ResolvedConfig resolve_config(const RunConfig& cfg);

// Sectioned key=value text; '#' and ';' start comments. Unknown keys
// are an error (typos must not silently disappear).
RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin);

// The builtin end-to-end experiment: the example model, its power-law
// growth function, initial data xi1 (Brownian), xi2 (affine), xi3
// (constant), functionals psi1 = cos-norm and psi2 = 2^norm, means on
// [0,horizon], ECDFs at the horizon, distances at t in {1,5,horizon}.
RunConfig paper_example_config(double dt = 1e-3, std::size_t samples = 2000,
                               double horizon_time = 10.0);

InitialData parse_initial_spec(const InitialSpecConfig& spec, int model_d);
TestFunctional make_functional(const FunctionalSpec& spec);

}  // namespace sdde
