#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sddesim/grid.hpp"
#include "sddesim/model.hpp"
#include "sddesim/rng.hpp"
#include "sddesim/truncation.hpp"

namespace sdde {

// Initial segment xi(theta), theta in [-tau, 0].
struct InitialData {
  enum class Kind { ConstantVector, AffineInTheta, BrownianPath, GridSamples };

  Kind kind = Kind::ConstantVector;
  std::string label;
  std::vector<double> constant;                  // ConstantVector: xi == c
  std::vector<double> affine_base, affine_slope; // AffineInTheta: c0 + theta*c1
  std::vector<double> samples;                   // GridSamples: (N+1) x d

  static InitialData constant_vec(std::string label, std::vector<double> c);
  static InitialData affine(std::string label, std::vector<double> base,
                            std::vector<double> slope);
  // (B_1(-theta), ..., B_d(-theta)) with an independent Brownian motion
  // per trajectory, drawn from the InitialData substream.
  static InitialData brownian(std::string label);
  static InitialData grid_samples(std::string label,
                                  std::vector<double> samples);
};

// Untruncated node values xi(t_k), k = -N..0, flattened (N+1) x d.
std::vector<double> eval_initial_nodes(const InitialData& init, int d,
                                       const Grid& grid,
                                       const rng::SeedSpec& seed);

// Raw scheme output: truncated states u(t_k) for k = -N..n_steps.
struct Trajectory {
  Grid grid;
  int d = 1;
  double radius = 0.0;  // truncation radius applied at every index
  std::vector<double> values;  // (N + n_steps + 1) x d
  std::string model_name;
  std::uint64_t master_seed = 0;
  std::uint64_t trajectory_index = 0;
  double max_state_norm = 0.0;

  std::span<const double> at(std::int64_t k) const;  // k in [-N, n_steps]
  std::int64_t node_count() const { return grid.N + grid.n_steps + 1; }
};

// One function-valued state Y_{t_k}: N+1 nodes on theta = (j-N)*dt,
// linear interpolation between nodes.
struct Segment {
  std::int64_t N = 0;
  double dt = 0.0;
  int d = 1;
  std::vector<double> nodes;  // (N+1) x d

  std::span<const double> node(std::int64_t j) const;
};

struct SimulateOptions {
  // Gate on the model's certificates when present; AdmissibilityError
  // when the gate fails and no override is set.
  bool enforce_admissibility = true;
  bool override_admissibility = false;
};

Trajectory simulate(const SddeModel& model, const TruncationRule& rule,
                    const Grid& grid, const InitialData& init,
                    std::uint64_t master_seed, std::uint64_t trajectory_index,
                    const SimulateOptions& opts = {});

// Streaming variant: keeps only the rolling N+1 window and hands each
// requested segment to the callback. obs_steps must be sorted, unique,
// within [0, n_steps].
struct StreamStats {
  double max_state_norm = 0.0;
  std::int64_t states_stored = 0;
  std::int64_t radius_violations = 0;  // must be 0; nonzero flags a bug
};

StreamStats simulate_segments(
    const SddeModel& model, const TruncationRule& rule, const Grid& grid,
    const InitialData& init, std::uint64_t master_seed,
    std::uint64_t trajectory_index, std::span<const std::int64_t> obs_steps,
    const std::function<void(std::int64_t step, const Segment&)>& on_segment,
    const SimulateOptions& opts = {});

// Right-continuous piecewise constant value at t in [-tau, horizon].
std::vector<double> piecewise_constant(const Trajectory& traj, double t);

// Piecewise linear interpolant; over [-tau,0] this interpolates the
// stored (already truncated) initial nodes.
std::vector<double> piecewise_linear(const Trajectory& traj, double t);

Segment extract_segment(const Trajectory& traj, std::int64_t k);

// sup over theta of the Euclidean norm of the interpolated path. For a
// piecewise-linear path the per-interval quadratic attains its max at
// the interval endpoints, so this reduces over nodes (see kernels.hpp).
double segment_sup_norm(const Segment& seg);

// sup over theta of |A(theta) - B(theta)|; grids must match.
double segment_sup_dist(const Segment& a, const Segment& b);

// Re-evaluates f,g along the stored truncated states and checks the
// step-size-dependent linear growth envelopes
//   |f| <= K dt^-nu (1 + |u(t)| + |u(t-tau)|)
//   |g| <= K^(1/2) dt^(-nu/2) (1 + |u(t)| + |u(t-tau)|).
// A ratio above 1 means the configured phi does not dominate the
// model's local growth - a configuration fault, not a scheme bug.
struct GrowthReport {
  double max_drift_ratio = 0.0;
  double max_diffusion_ratio = 0.0;
  std::int64_t worst_drift_step = 0;
  std::int64_t worst_diffusion_step = 0;
  bool ok = true;
};

GrowthReport coefficient_growth_check(const Trajectory& traj,
                                      const SddeModel& model,
                                      const TruncationRule& rule);

}  // namespace sdde
