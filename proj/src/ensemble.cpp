#include "sddesim/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <filesystem>
#include <mutex>
#include <thread>

#include "sddesim/csvio.hpp"
#include "sddesim/errors.hpp"
#include "sddesim/manifest.hpp"
#include "sddesim/version.hpp"

namespace sdde {

void parallel_for_indexed(std::size_t count, int workers,
                          const std::function<void(std::size_t)>& body) {
  if (workers < 1) throw UsageError("parallel_for_indexed: workers must be >= 1");
  if (count == 0) return;
  const std::size_t nw = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
  if (nw == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(nw);
  for (std::size_t w = 0; w < nw; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

namespace {

AdmissibilityReport gate(const ResolvedConfig& rc) {
  const SddeModel& model = *rc.model;
  AdmissibilityReport rep;
  rep.dt = rc.grid.dt;
  rep.K = rc.rule.K;
  rep.nu = rc.rule.nu;
  rep.ok = true;  // no certificates, nothing to gate on
  if (model.dissipativity && model.contraction) {
    rep = admissible_dt(*model.dissipativity, *model.contraction, rc.rule.K,
                        rc.rule.nu, rc.grid.dt);
    if (!rep.ok && !rc.raw.override_admissibility)
      throw AdmissibilityError(
          "step size fails the admissibility gates (margin_a=" +
          std::to_string(rep.margin_a) + ", margin_b=" +
          std::to_string(rep.margin_b) + ", dt_max=" +
          std::to_string(rep.dt_max) + "); set override-admissibility to proceed");
  }
  return rep;
}

}  // namespace

EnsembleResults run_ensemble_core(const ResolvedConfig& rc) {
  const SddeModel& model = *rc.model;
  const std::size_t n = rc.raw.samples;
  const std::size_t n_init = rc.initials.size();
  const std::size_t n_psi = rc.functionals.size();
  const std::size_t n_obs = rc.mean_steps.size();

  EnsembleResults res;
  res.grid = rc.grid;
  res.mean_steps = rc.mean_steps;
  res.ecdf_step = rc.ecdf_step;
  res.admissibility = gate(rc);
  for (const auto& init : rc.initials) res.initial_labels.push_back(init.label);
  for (const auto& psi : rc.functionals) res.psi_labels.push_back(psi.label);

  // Merge all observation steps into one sorted plan per trajectory.
  std::vector<std::int64_t> obs = rc.mean_steps;
  obs.push_back(rc.ecdf_step);
  const bool want_distances = rc.distances_enabled;
  if (want_distances)
    obs.insert(obs.end(), rc.distance_steps.begin(), rc.distance_steps.end());
  std::sort(obs.begin(), obs.end());
  obs.erase(std::unique(obs.begin(), obs.end()), obs.end());

  std::vector<std::int64_t> mean_index(static_cast<std::size_t>(rc.grid.n_steps) + 1, -1);
  for (std::size_t o = 0; o < n_obs; ++o)
    mean_index[static_cast<std::size_t>(rc.mean_steps[o])] = static_cast<std::int64_t>(o);
  std::vector<std::int64_t> dist_index(static_cast<std::size_t>(rc.grid.n_steps) + 1, -1);
  for (std::size_t di = 0; di < rc.distance_steps.size(); ++di)
    dist_index[static_cast<std::size_t>(rc.distance_steps[di])] = static_cast<std::int64_t>(di);

  // Subsample of trajectory indices whose segments feed the transport
  // solves; chosen up front so workers know what to keep.
  const std::size_t sub_n = want_distances ? std::min(rc.raw.distance_subsample, n) : 0;
  std::vector<std::size_t> sub_idx;
  std::vector<std::int64_t> sub_slot(n, -1);
  if (want_distances) {
    sub_idx = subsample_indices(n, sub_n, rc.raw.master_seed);
    for (std::size_t s = 0; s < sub_idx.size(); ++s)
      sub_slot[sub_idx[s]] = static_cast<std::int64_t>(s);
  }

  res.means.assign(n_init, std::vector<std::vector<MeanResult>>(
                               n_psi, std::vector<MeanResult>(n_obs)));
  res.ecdf_values.assign(n_init, std::vector<std::vector<double>>(
                                     n_psi, std::vector<double>(n)));
  std::vector<StreamStats> traj_stats(n);

  for (std::size_t ii = 0; ii < n_init; ++ii) {
    const bool keep_segments = want_distances && ii == rc.distance_initial_index;

    std::vector<std::vector<std::vector<double>>> mean_vals(
        n_psi, std::vector<std::vector<double>>(n_obs, std::vector<double>(n)));
    std::vector<EmpiricalSegmentMeasure> dist_measures;
    if (keep_segments) {
      dist_measures.resize(rc.distance_steps.size());
      for (std::size_t di = 0; di < rc.distance_steps.size(); ++di) {
        dist_measures[di].samples.resize(sub_n);
        dist_measures[di].time_label = rc.grid.time_at(rc.distance_steps[di]);
      }
    }

    SimulateOptions opts;
    opts.override_admissibility = true;  // gated once above
    parallel_for_indexed(n, rc.raw.workers, [&](std::size_t i) {
      auto on_segment = [&](std::int64_t step, const Segment& seg) {
        const std::int64_t mo = mean_index[static_cast<std::size_t>(step)];
        if (mo >= 0)
          for (std::size_t pp = 0; pp < n_psi; ++pp)
            mean_vals[pp][static_cast<std::size_t>(mo)][i] = rc.functionals[pp](seg);
        if (step == rc.ecdf_step)
          for (std::size_t pp = 0; pp < n_psi; ++pp)
            res.ecdf_values[ii][pp][i] =
                (mo >= 0) ? mean_vals[pp][static_cast<std::size_t>(mo)][i]
                          : rc.functionals[pp](seg);
        if (keep_segments && sub_slot[i] >= 0) {
          const std::int64_t di = dist_index[static_cast<std::size_t>(step)];
          if (di >= 0)
            dist_measures[static_cast<std::size_t>(di)]
                .samples[static_cast<std::size_t>(sub_slot[i])] = seg;
        }
      };
      // Trajectory indices are offset per initial so ensembles from
      // different initial data use independent noise substreams; shared
      // streams would couple them pathwise through the contraction and
      // make cross-initial comparisons vacuous.
      const std::uint64_t traj_index = static_cast<std::uint64_t>(ii) * n + i;
      const StreamStats st = simulate_segments(model, rc.rule, rc.grid,
                                               rc.initials[ii], rc.raw.master_seed,
                                               traj_index, obs, on_segment, opts);
      traj_stats[i].max_state_norm = std::max(traj_stats[i].max_state_norm, st.max_state_norm);
      traj_stats[i].states_stored += st.states_stored;
      traj_stats[i].radius_violations += st.radius_violations;
    });

    for (std::size_t pp = 0; pp < n_psi; ++pp)
      for (std::size_t oo = 0; oo < n_obs; ++oo)
        res.means[ii][pp][oo] = mean_and_stderr(mean_vals[pp][oo]);

    if (keep_segments) {
      res.distance_measures = std::move(dist_measures);
      res.distance_initial = rc.initials[ii].label;
    }
  }

  for (const auto& st : traj_stats) {
    res.stats.max_state_norm = std::max(res.stats.max_state_norm, st.max_state_norm);
    res.stats.states_stored += st.states_stored;
    res.stats.radius_violations += st.radius_violations;
  }

  if (want_distances && res.distance_measures.size() >= 2) {
    TransportOptions topts;
    topts.epsilon = rc.raw.epsilon;
    res.distances = cauchy_diagnostic(res.distance_measures, rc.distance_method, topts);
    const auto dict = default_bl_dictionary(model.d, rc.grid.N, rc.grid.dt,
                                            rc.raw.master_seed);
    const auto& last = res.distance_measures.back();
    for (std::size_t j = 0; j + 1 < res.distance_measures.size(); ++j)
      res.bl_bounds.push_back(bl_lower_bound(res.distance_measures[j], last, dict));
  }
  return res;
}

RunOutputs run_ensemble(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const ResolvedConfig rc = resolve_config(cfg);

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(cfg.out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + cfg.out_dir + "': " + ec.message());

  RunOutputs out;
  auto cleanup = [&]() {
    for (const auto& f : out.files) fs::remove(f, ec);
  };
  try {
    out.results = run_ensemble_core(rc);

    const std::string means_path = cfg.out_dir + "/means.csv";
    write_means_csv(means_path, out.results);
    out.files.push_back(means_path);

    const std::string ecdf_path = cfg.out_dir + "/ecdf.csv";
    write_ecdf_csv(ecdf_path, out.results);
    out.files.push_back(ecdf_path);

    if (!out.results.distances.empty()) {
      const std::string dist_path = cfg.out_dir + "/distances.csv";
      write_distances_csv(dist_path, out.results);
      out.files.push_back(dist_path);
    }

    RunManifest manifest;
    manifest.library_version = kVersion;
    manifest.config = cfg;
    manifest.admissibility = out.results.admissibility;
    manifest.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const auto& f : out.files)
      manifest.outputs.push_back({fs::path(f).filename().string(), fnv1a_file_hex(f)});
    out.manifest_path = cfg.out_dir + "/manifest.json";
    write_manifest(out.manifest_path, manifest);
    out.files.push_back(out.manifest_path);
  } catch (...) {
    cleanup();
    throw;
  }
  return out;
}

}  // namespace sdde
