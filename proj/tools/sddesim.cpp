// Command-line front end: ensemble runs, the builtin example experiment,
// single-trajectory export, certificate checks, plotting, and manifest
// replay. Exit codes: 0 success, 2 configuration error, 3 admissibility
// failure, 4 numeric failure.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sddesim/config.hpp"
#include "sddesim/csvio.hpp"
#include "sddesim/ensemble.hpp"
#include "sddesim/errors.hpp"
#include "sddesim/kernels.hpp"
#include "sddesim/manifest.hpp"
#include "sddesim/plot.hpp"
#include "sddesim/version.hpp"

namespace {

using namespace sdde;

void print_admissibility(const AdmissibilityReport& r) {
  std::printf("admissibility @ dt=%s: %s\n", format_double(r.dt).c_str(),
              r.ok ? "ok" : "FAILED");
  std::printf("  a-gate: a2 - 6K^2 dt^(1-2nu) = %s (margin over a3: %s)\n",
              format_double(r.threshold_a).c_str(),
              format_double(r.margin_a).c_str());
  std::printf("  b-gate: b1 - 4K^2 dt^(1-2nu) = %s (margin over b2: %s)\n",
              format_double(r.threshold_b).c_str(),
              format_double(r.margin_b).c_str());
  std::printf("  dt_max = %s\n", format_double(r.dt_max).c_str());
}

InitialSpecConfig parse_initial_flag(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) return {text, text};
  return {text.substr(0, eq), text.substr(eq + 1)};
}

void run_and_report(const RunConfig& cfg, bool plots) {
  const RunOutputs out = run_ensemble(cfg);
  for (const auto& f : out.files) std::printf("wrote %s\n", f.c_str());
  if (out.results.stats.radius_violations != 0)
    throw NumericError("stored states exceeded the truncation radius: " +
                       std::to_string(out.results.stats.radius_violations));
  std::printf("max stored state norm: %s (radius bound holds on %lld states)\n",
              format_double(out.results.stats.max_state_norm).c_str(),
              static_cast<long long>(out.results.stats.states_stored));
  for (std::size_t j = 0; j < out.results.distances.size(); ++j) {
    const auto& row = out.results.distances[j];
    std::printf("distance t=%s -> t_last: %s (n=%zu)", format_double(row.t).c_str(),
                format_double(row.dist.value).c_str(), row.dist.n);
    if (j < out.results.bl_bounds.size())
      std::printf("  [bl lower bound %s]", format_double(out.results.bl_bounds[j]).c_str());
    std::printf("\n");
  }
  if (plots) {
    for (const auto& f :
         emit_means_plots(cfg.out_dir + "/means.csv", cfg.out_dir))
      std::printf("wrote %s\n", f.c_str());
    for (const auto& f : emit_ecdf_plots(cfg.out_dir + "/ecdf.csv", cfg.out_dir))
      std::printf("wrote %s\n", f.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SDDE truncated Euler-Maruyama segment simulator"};
  app.set_version_flag("--version", sdde::kVersion);
  app.require_subcommand(1);

  // ---- run ----------------------------------------------------------
  auto* run = app.add_subcommand("run", "run an ensemble experiment");
  std::string cfg_path;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  double dt = 0.0;
  std::int64_t steps = 0;
  std::string model, out_dir, distance_method;
  std::vector<std::string> initial_flags;
  int workers = 0;
  bool override_adm = false, plots = false;
  run->add_option("--config", cfg_path, "sectioned key=value config file");
  auto* o_seed = run->add_option("--seed", seed, "master seed");
  auto* o_samples = run->add_option("--samples", samples, "ensemble size");
  auto* o_dt = run->add_option("--dt", dt, "step size (tau/dt must be integral)");
  auto* o_steps = run->add_option("--steps", steps, "horizon in steps");
  auto* o_model = run->add_option("--model", model, "builtin model name");
  auto* o_init = run->add_option("--initial", initial_flags,
                                 "initial data label=spec (repeatable)");
  auto* o_out = run->add_option("--out-dir", out_dir, "output directory");
  auto* o_workers = run->add_option("--workers", workers, "worker threads");
  auto* o_override = run->add_flag("--override-admissibility", override_adm,
                                   "run even when the step-size gates fail");
  auto* o_dist = run->add_option("--distance-method", distance_method,
                                 "exact | entropic | none");
  run->add_flag("--plots", plots, "emit SVG plots next to the CSVs");

  // ---- example ------------------------------------------------------
  auto* example = app.add_subcommand("example", "run the builtin example experiment");
  double ex_dt = 1e-3, ex_horizon = 10.0;
  std::size_t ex_samples = 2000;
  std::uint64_t ex_seed = 12345;
  std::string ex_out = "out-example";
  int ex_workers = 1;
  bool ex_plots = false;
  example->add_option("--dt", ex_dt, "step size (default 1e-3)");
  example->add_option("--samples", ex_samples, "ensemble size (default 2000)");
  example->add_option("--horizon", ex_horizon, "time horizon (default 10)");
  example->add_option("--seed", ex_seed, "master seed");
  example->add_option("--out-dir", ex_out, "output directory");
  example->add_option("--workers", ex_workers, "worker threads");
  example->add_flag("--plots", ex_plots, "emit SVG plots next to the CSVs");

  // ---- trajectory ---------------------------------------------------
  auto* traj_cmd = app.add_subcommand("trajectory", "simulate one trajectory to CSV");
  std::string t_model = "paper-example-5.1", t_initial = "xi3",
              t_out = "trajectory.csv", t_segment_out;
  double t_dt = 1e-3;
  std::int64_t t_steps = 1000, t_segment_at = -1;
  std::uint64_t t_seed = 12345, t_index = 0;
  bool t_override = false;
  traj_cmd->add_option("--model", t_model, "builtin model name");
  traj_cmd->add_option("--initial", t_initial, "initial data spec");
  traj_cmd->add_option("--dt", t_dt, "step size");
  traj_cmd->add_option("--steps", t_steps, "horizon in steps");
  traj_cmd->add_option("--seed", t_seed, "master seed");
  traj_cmd->add_option("--index", t_index, "trajectory index");
  traj_cmd->add_option("--out", t_out, "trajectory CSV path");
  traj_cmd->add_option("--segment-at", t_segment_at, "also export the segment at this step");
  traj_cmd->add_option("--segment-out", t_segment_out, "segment CSV path");
  traj_cmd->add_flag("--override-admissibility", t_override, "skip the step-size gates");

  // ---- check --------------------------------------------------------
  auto* check = app.add_subcommand("check", "falsify certificates by sampling and print the step-size gates");
  std::string c_model = "paper-example-5.1";
  std::uint64_t c_seed = 12345;
  std::size_t c_points = sdde::kDefaultCertSamples;
  double c_dt = 1e-3;
  check->add_option("--model", c_model, "builtin model name");
  check->add_option("--seed", c_seed, "sampler seed");
  check->add_option("--points", c_points, "sample count");
  check->add_option("--dt", c_dt, "step size for the gates");

  // ---- plot ---------------------------------------------------------
  auto* plot = app.add_subcommand("plot", "render CSV outputs to SVG");
  std::string p_means, p_ecdf, p_out = ".";
  plot->add_option("--means", p_means, "means.csv path");
  plot->add_option("--ecdf", p_ecdf, "ecdf.csv path");
  plot->add_option("--out-dir", p_out, "output directory");

  // ---- rerun --------------------------------------------------------
  auto* rerun = app.add_subcommand("rerun", "re-execute a run from its manifest");
  std::string r_manifest, r_out;
  rerun->add_option("manifest", r_manifest, "manifest.json path")->required();
  rerun->add_option("--out-dir", r_out, "output directory (default from manifest)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      RunConfig cfg = cfg_path.empty() ? RunConfig{} : parse_config_file(cfg_path);
      if (cfg_path.empty()) {
        cfg.initials.clear();
        cfg.functionals = {{"psi1", "cos-norm", 0.0}, {"psi2", "clip-norm", 2.0}};
        cfg.distance_times = {};
        cfg.distance_method = "none";
      }
      if (o_seed->count()) cfg.master_seed = seed;
      if (o_samples->count()) cfg.samples = samples;
      if (o_dt->count()) { cfg.dt = dt; cfg.N = 0; }
      if (o_steps->count()) cfg.horizon_steps = steps;
      if (o_model->count()) cfg.model_name = model;
      if (o_init->count()) {
        cfg.initials.clear();
        for (const auto& f : initial_flags) cfg.initials.push_back(parse_initial_flag(f));
      }
      if (o_out->count()) cfg.out_dir = out_dir;
      if (o_workers->count()) cfg.workers = workers;
      if (o_override->count()) cfg.override_admissibility = override_adm;
      if (o_dist->count()) cfg.distance_method = distance_method;
      run_and_report(cfg, plots);
    } else if (*example) {
      RunConfig cfg = paper_example_config(ex_dt, ex_samples, ex_horizon);
      cfg.master_seed = ex_seed;
      cfg.out_dir = ex_out;
      cfg.workers = ex_workers;
      run_and_report(cfg, ex_plots);
    } else if (*traj_cmd) {
      const SddeModel& m = builtin_model(t_model);
      const auto init = parse_initial_spec(parse_initial_flag(t_initial), m.d);
      const double K = compute_K(m, [](double R) { return 16.0 * R * R * R * R; });
      const auto rule = make_power_rule(16.0, 4.0, 0.01, K);
      const std::int64_t N = static_cast<std::int64_t>(std::llround(m.tau / t_dt));
      const Grid grid = make_grid(m.tau, N, t_steps);
      SimulateOptions opts;
      opts.override_admissibility = t_override;
      const Trajectory traj = simulate(m, rule, grid, init, t_seed, t_index, opts);
      write_trajectory_csv(t_out, traj);
      std::printf("wrote %s\n", t_out.c_str());
      if (t_segment_at >= 0) {
        const Segment seg = extract_segment(traj, t_segment_at);
        const std::string path = t_segment_out.empty() ? "segment.csv" : t_segment_out;
        write_segment_csv(path, seg);
        std::printf("wrote %s\n", path.c_str());
      }
    } else if (*check) {
      const SddeModel& m = builtin_model(c_model);
      if (!m.dissipativity || !m.contraction)
        throw ConfigError("model '" + c_model + "' ships no certificates to check");
      const auto rep_d = check_dissipativity(m, *m.dissipativity, c_seed, c_points);
      std::printf("dissipativity: %zu samples, %zu violations, worst margin %s\n",
                  rep_d.n_samples, rep_d.n_violations,
                  format_double(rep_d.worst_margin).c_str());
      const auto rep_c = check_contraction(m, *m.contraction, c_seed, c_points);
      std::printf("contraction:   %zu samples, %zu violations, worst margin %s\n",
                  rep_c.n_samples, rep_c.n_violations,
                  format_double(rep_c.worst_margin).c_str());
      const double K = compute_K(m, [](double R) { return 16.0 * R * R * R * R; });
      const auto rule = make_power_rule(16.0, 4.0, 0.01, K);
      print_admissibility(admissible_dt(*m.dissipativity, *m.contraction, rule.K,
                                        rule.nu, c_dt));
      if (!rep_d.consistent() || !rep_c.consistent()) return 4;
    } else if (*plot) {
      if (p_means.empty() && p_ecdf.empty())
        throw ConfigError("plot: give --means and/or --ecdf");
      if (!p_means.empty())
        for (const auto& f : emit_means_plots(p_means, p_out))
          std::printf("wrote %s\n", f.c_str());
      if (!p_ecdf.empty())
        for (const auto& f : emit_ecdf_plots(p_ecdf, p_out))
          std::printf("wrote %s\n", f.c_str());
    } else if (*rerun) {
      const RunManifest m = read_manifest(r_manifest);
      RunConfig cfg = m.config;
      if (!r_out.empty()) cfg.out_dir = r_out;
      const RunOutputs out = run_ensemble(cfg);
      bool identical = true;
      for (const auto& rec : m.outputs) {
        if (rec.path == "manifest.json") continue;  // carries wall clock
        const std::string fresh = cfg.out_dir + "/" + rec.path;
        const std::string digest = fnv1a_file_hex(fresh);
        const bool same = digest == rec.fnv1a64;
        identical = identical && same;
        std::printf("%s: %s\n", rec.path.c_str(), same ? "reproduced" : "MISMATCH");
      }
      if (!identical) return 4;
    }
  } catch (const AdmissibilityError& e) {
    std::fprintf(stderr, "admissibility failure: %s\n", e.what());
    return 3;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return 4;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "parse error: %s\n", e.what());
    return 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
