#include "sddesim/scheme.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

#include "sddesim/errors.hpp"
#include "sddesim/kernels.hpp"

namespace sdde {

InitialData InitialData::constant_vec(std::string label, std::vector<double> c) {
  InitialData init;
  init.kind = Kind::ConstantVector;
  init.label = std::move(label);
  init.constant = std::move(c);
  return init;
}

InitialData InitialData::affine(std::string label, std::vector<double> base,
                                std::vector<double> slope) {
  InitialData init;
  init.kind = Kind::AffineInTheta;
  init.label = std::move(label);
  init.affine_base = std::move(base);
  init.affine_slope = std::move(slope);
  return init;
}

InitialData InitialData::brownian(std::string label) {
  InitialData init;
  init.kind = Kind::BrownianPath;
  init.label = std::move(label);
  return init;
}

InitialData InitialData::grid_samples(std::string label,
                                      std::vector<double> samples) {
  InitialData init;
  init.kind = Kind::GridSamples;
  init.label = std::move(label);
  init.samples = std::move(samples);
  return init;
}

std::vector<double> eval_initial_nodes(const InitialData& init, int d,
                                       const Grid& grid,
                                       const rng::SeedSpec& seed) {
  const std::size_t n = static_cast<std::size_t>(grid.N) + 1;
  const std::size_t ud = static_cast<std::size_t>(d);
  std::vector<double> out(n * ud);
  switch (init.kind) {
    case InitialData::Kind::ConstantVector: {
      if (init.constant.size() != ud)
        throw UsageError("initial data '" + init.label +
                         "': constant vector has wrong dimension");
      for (std::size_t j = 0; j < n; ++j)
        std::memcpy(&out[j * ud], init.constant.data(), sizeof(double) * ud);
      break;
    }
    case InitialData::Kind::AffineInTheta: {
      if (init.affine_base.size() != ud || init.affine_slope.size() != ud)
        throw UsageError("initial data '" + init.label +
                         "': affine coefficients have wrong dimension");
      for (std::size_t j = 0; j < n; ++j) {
        const double theta = grid.time_at(static_cast<std::int64_t>(j) - grid.N);
        for (std::size_t c = 0; c < ud; ++c)
          out[j * ud + c] = init.affine_base[c] + theta * init.affine_slope[c];
      }
      break;
    }
    case InitialData::Kind::BrownianPath: {
      out = rng::brownian_initial_path(seed.with(rng::Stream::InitialData), d,
                                       grid);
      break;
    }
    case InitialData::Kind::GridSamples: {
      if (init.samples.size() != n * ud) {
        std::ostringstream os;
        os << "initial data '" << init.label << "': grid samples need exactly "
           << n << " x " << d << " values, got " << init.samples.size();
        throw UsageError(os.str());
      }
      out = init.samples;
      break;
    }
  }
  return out;
}

std::span<const double> Trajectory::at(std::int64_t k) const {
  if (k < -grid.N || k > grid.n_steps)
    throw UsageError("trajectory index out of range: k=" + std::to_string(k));
  return {values.data() + (k + grid.N) * d, static_cast<std::size_t>(d)};
}

std::span<const double> Segment::node(std::int64_t j) const {
  if (j < 0 || j > N)
    throw UsageError("segment node index out of range: j=" + std::to_string(j));
  return {nodes.data() + j * d, static_cast<std::size_t>(d)};
}

namespace {

void gate_admissibility(const SddeModel& model, const TruncationRule& rule,
                        const Grid& grid, const SimulateOptions& opts) {
  if (!opts.enforce_admissibility || opts.override_admissibility) return;
  if (!model.dissipativity || !model.contraction) return;  // nothing to gate on
  const auto rep =
      admissible_dt(*model.dissipativity, *model.contraction, rule.K, rule.nu, grid.dt);
  if (!rep.ok) {
    std::ostringstream os;
    os << "step size dt=" << grid.dt << " fails the admissibility gates"
       << " (margin_a=" << rep.margin_a << ", margin_b=" << rep.margin_b
       << ", dt_max=" << rep.dt_max << "); pass the override to proceed anyway";
    throw AdmissibilityError(os.str());
  }
}

inline double norm_of(std::span<const double> v) {
  double s = 0.0;
  for (double a : v) s += a * a;
  return std::sqrt(s);
}

void check_finite(std::span<const double> v, std::int64_t step) {
  for (double a : v)
    if (!std::isfinite(a))
      throw NumericError(
          "non-finite state at step k=" + std::to_string(step) +
          "; with truncation active this indicates a bug or a broken model");
}

// One recursion step: out = u + f(u, u_delay)*dt + g(u, u_delay)*dW,
// then radial truncation. dW has m entries.
struct Stepper {
  const SddeModel& model;
  double dt;
  double radius;
  std::vector<double> fbuf, gbuf;

  Stepper(const SddeModel& m, double dt_, double radius_)
      : model(m), dt(dt_), radius(radius_), fbuf(m.d),
        gbuf(static_cast<std::size_t>(m.d) * m.m) {}

  void step(std::span<const double> u, std::span<const double> u_delay,
            std::span<const double> dW, std::span<double> out) {
    model.drift(u, u_delay, fbuf);
    model.diffusion(u, u_delay, gbuf);
    const int d = model.d, m = model.m;
    for (int c = 0; c < d; ++c) {
      double acc = u[c] + fbuf[c] * dt;
      const double* grow = gbuf.data() + static_cast<std::size_t>(c) * m;
      for (int j = 0; j < m; ++j) acc += grow[j] * dW[j];
      out[c] = acc;
    }
    truncate_in_place(out, radius);
  }
};

}  // namespace

Trajectory simulate(const SddeModel& model, const TruncationRule& rule,
                    const Grid& grid, const InitialData& init,
                    std::uint64_t master_seed, std::uint64_t trajectory_index,
                    const SimulateOptions& opts) {
  gate_admissibility(model, rule, grid, opts);
  const double radius = truncation_radius(rule, grid.dt);
  const int d = model.d;

  Trajectory traj;
  traj.grid = grid;
  traj.d = d;
  traj.radius = radius;
  traj.model_name = model.name;
  traj.master_seed = master_seed;
  traj.trajectory_index = trajectory_index;
  traj.values.resize(static_cast<std::size_t>(grid.N + grid.n_steps + 1) * d);

  const rng::SeedSpec seed{master_seed, trajectory_index,
                           rng::Stream::SchemeNoise};
  // u(t_k) = Gamma(xi(t_k)) for k = -N..0.
  auto xi = eval_initial_nodes(init, d, grid, seed);
  for (std::int64_t j = 0; j <= grid.N; ++j) {
    std::span<double> node{traj.values.data() + j * d, static_cast<std::size_t>(d)};
    std::memcpy(node.data(), &xi[j * d], sizeof(double) * d);
    truncate_in_place(node, radius);
    traj.max_state_norm = std::max(traj.max_state_norm, norm_of(node));
  }

  rng::GaussianStream noise(seed);
  std::vector<double> dW(model.m);
  const double sqrt_dt = std::sqrt(grid.dt);
  Stepper stepper(model, grid.dt, radius);
  for (std::int64_t k = 0; k < grid.n_steps; ++k) {
    for (double& w : dW) w = sqrt_dt * noise.next();
    const double* cur = traj.values.data() + (k + grid.N) * d;
    const double* delay = traj.values.data() + k * d;  // index k-N
    std::span<double> out{traj.values.data() + (k + 1 + grid.N) * d,
                          static_cast<std::size_t>(d)};
    stepper.step({cur, static_cast<std::size_t>(d)},
                 {delay, static_cast<std::size_t>(d)}, dW, out);
    check_finite(out, k + 1);
    traj.max_state_norm = std::max(traj.max_state_norm, norm_of(out));
  }
  return traj;
}

StreamStats simulate_segments(
    const SddeModel& model, const TruncationRule& rule, const Grid& grid,
    const InitialData& init, std::uint64_t master_seed,
    std::uint64_t trajectory_index, std::span<const std::int64_t> obs_steps,
    const std::function<void(std::int64_t, const Segment&)>& on_segment,
    const SimulateOptions& opts) {
  gate_admissibility(model, rule, grid, opts);
  for (std::size_t i = 0; i < obs_steps.size(); ++i) {
    if (obs_steps[i] < 0 || obs_steps[i] > grid.n_steps)
      throw UsageError("observation step out of range: " +
                       std::to_string(obs_steps[i]));
    if (i > 0 && obs_steps[i] <= obs_steps[i - 1])
      throw UsageError("observation steps must be sorted and unique");
  }
  const double radius = truncation_radius(rule, grid.dt);
  const int d = model.d;
  const std::int64_t W = grid.N + 1;  // ring window size
  const double slack = radius * (1.0 + 1e-12);

  StreamStats stats;
  std::vector<double> ring(static_cast<std::size_t>(W) * d);
  auto slot = [&](std::int64_t k) {
    return static_cast<std::size_t>((k + grid.N) % W) * d;
  };
  auto account = [&](std::span<const double> v) {
    const double n = norm_of(v);
    stats.max_state_norm = std::max(stats.max_state_norm, n);
    if (n > slack) ++stats.radius_violations;
    ++stats.states_stored;
  };

  const rng::SeedSpec seed{master_seed, trajectory_index,
                           rng::Stream::SchemeNoise};
  auto xi = eval_initial_nodes(init, d, grid, seed);
  for (std::int64_t k = -grid.N; k <= 0; ++k) {
    std::span<double> node{ring.data() + slot(k), static_cast<std::size_t>(d)};
    std::memcpy(node.data(), &xi[(k + grid.N) * d], sizeof(double) * d);
    truncate_in_place(node, radius);
    account(node);
  }

  Segment seg;
  seg.N = grid.N;
  seg.dt = grid.dt;
  seg.d = d;
  seg.nodes.resize(static_cast<std::size_t>(W) * d);
  auto emit = [&](std::int64_t k) {
    for (std::int64_t j = 0; j <= grid.N; ++j)
      std::memcpy(&seg.nodes[j * d], &ring[slot(k - grid.N + j)],
                  sizeof(double) * d);
    on_segment(k, seg);
  };

  std::size_t next_obs = 0;
  if (next_obs < obs_steps.size() && obs_steps[next_obs] == 0) {
    emit(0);
    ++next_obs;
  }

  rng::GaussianStream noise(seed);
  std::vector<double> dW(model.m);
  std::vector<double> cur(d), delay(d);
  const double sqrt_dt = std::sqrt(grid.dt);
  Stepper stepper(model, grid.dt, radius);
  for (std::int64_t k = 0; k < grid.n_steps; ++k) {
    for (double& w : dW) w = sqrt_dt * noise.next();
    std::memcpy(cur.data(), &ring[slot(k)], sizeof(double) * d);
    std::memcpy(delay.data(), &ring[slot(k - grid.N)], sizeof(double) * d);
    std::span<double> out{ring.data() + slot(k + 1), static_cast<std::size_t>(d)};
    stepper.step(cur, delay, dW, out);
    check_finite(out, k + 1);
    account(out);
    if (next_obs < obs_steps.size() && obs_steps[next_obs] == k + 1) {
      emit(k + 1);
      ++next_obs;
    }
  }
  return stats;
}

namespace {

// Locate k with t_k <= t < t_{k+1} under t_j = j*dt in floating point;
// floor plus a fix-up so exact node times land on their own index.
std::int64_t locate(const Grid& g, double t, const char* who) {
  const double lo = -g.tau, hi = g.horizon();
  if (!(t >= lo && t <= hi)) {
    std::ostringstream os;
    os << who << ": t=" << t << " outside [" << lo << ", " << hi << "]";
    throw UsageError(os.str());
  }
  auto node_time = [&](std::int64_t k) { return static_cast<double>(k) * g.dt; };
  std::int64_t k = static_cast<std::int64_t>(std::floor(t / g.dt));
  while (k + 1 <= g.n_steps && node_time(k + 1) <= t) ++k;
  while (k > -g.N && node_time(k) > t) --k;
  if (k >= g.n_steps) k = g.n_steps - 1;  // t == horizon uses the last interval
  if (k < -g.N) k = -g.N;
  return k;
}

}  // namespace

std::vector<double> piecewise_constant(const Trajectory& traj, double t) {
  const Grid& g = traj.grid;
  if (g.n_steps == 0 && t == 0.0) {
    auto v = traj.at(0);
    return {v.begin(), v.end()};
  }
  const std::int64_t k = locate(g, t, "piecewise_constant");
  // Right-continuous: t == t_{k+1} already resolved to index k+1 by locate,
  // except at the horizon where the last node value is returned.
  const std::int64_t idx = (t >= g.horizon()) ? g.n_steps : k;
  auto v = traj.at(idx);
  return {v.begin(), v.end()};
}

std::vector<double> piecewise_linear(const Trajectory& traj, double t) {
  const Grid& g = traj.grid;
  if (g.n_steps == 0 && t == 0.0) {
    auto v = traj.at(0);
    return {v.begin(), v.end()};
  }
  const std::int64_t k = locate(g, t, "piecewise_linear");
  const double tk = g.time_at(k), tk1 = g.time_at(k + 1);
  auto u0 = traj.at(k);
  if (t == tk) return {u0.begin(), u0.end()};
  auto u1 = traj.at(k + 1);
  if (t == tk1) return {u1.begin(), u1.end()};
  const double w1 = (tk1 - t) / g.dt, w2 = (t - tk) / g.dt;
  std::vector<double> out(traj.d);
  for (int c = 0; c < traj.d; ++c) out[c] = w1 * u0[c] + w2 * u1[c];
  return out;
}

Segment extract_segment(const Trajectory& traj, std::int64_t k) {
  if (k < 0 || k > traj.grid.n_steps)
    throw UsageError("extract_segment: step index out of range: " +
                     std::to_string(k));
  Segment seg;
  seg.N = traj.grid.N;
  seg.dt = traj.grid.dt;
  seg.d = traj.d;
  // Node j holds u(t_{k-N+j}), stored at offset (k+j)*d.
  const double* first = traj.values.data() + k * traj.d;
  seg.nodes.assign(first, first + (traj.grid.N + 1) * traj.d);
  return seg;
}

double segment_sup_norm(const Segment& seg) {
  return std::sqrt(kernels::max_norm_sq(
      seg.nodes.data(), static_cast<std::size_t>(seg.N) + 1,
      static_cast<std::size_t>(seg.d)));
}

double segment_sup_dist(const Segment& a, const Segment& b) {
  if (a.N != b.N || a.d != b.d || a.dt != b.dt)
    throw UsageError("segment_sup_dist: segments live on different grids");
  return std::sqrt(kernels::max_dist_sq(
      a.nodes.data(), b.nodes.data(), static_cast<std::size_t>(a.N) + 1,
      static_cast<std::size_t>(a.d)));
}

GrowthReport coefficient_growth_check(const Trajectory& traj,
                                      const SddeModel& model,
                                      const TruncationRule& rule) {
  if (model.d != traj.d)
    throw UsageError("coefficient_growth_check: model dimension mismatch");
  const Grid& g = traj.grid;
  const double f_cap = rule.K * std::pow(g.dt, -rule.nu);
  const double g_cap = std::sqrt(rule.K) * std::pow(g.dt, -rule.nu / 2.0);

  GrowthReport rep;
  std::vector<double> f(model.d), gg(static_cast<std::size_t>(model.d) * model.m);
  for (std::int64_t k = 0; k <= g.n_steps; ++k) {
    auto u = traj.at(k);
    auto v = traj.at(k - g.N);
    model.drift(u, v, f);
    model.diffusion(u, v, gg);
    const double envelope = 1.0 + norm_of(u) + norm_of(v);
    double fn = 0.0;
    for (double a : f) fn += a * a;
    const double fr = std::sqrt(fn) / (f_cap * envelope);
    const double gr = std::sqrt(frobenius_norm_sq(gg)) / (g_cap * envelope);
    if (fr > rep.max_drift_ratio) {
      rep.max_drift_ratio = fr;
      rep.worst_drift_step = k;
    }
    if (gr > rep.max_diffusion_ratio) {
      rep.max_diffusion_ratio = gr;
      rep.worst_diffusion_step = k;
    }
  }
  rep.ok = rep.max_drift_ratio <= 1.0 && rep.max_diffusion_ratio <= 1.0;
  return rep;
}

}  // namespace sdde
