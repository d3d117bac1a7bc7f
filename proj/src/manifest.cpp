#include "sddesim/manifest.hpp"

#include <fstream>

#include <json.hpp>

#include "sddesim/errors.hpp"

namespace sdde {

using nlohmann::json;

namespace {

json config_to_json(const RunConfig& c) {
  json j;
  j["model"] = c.model_name;
  j["phi-coeff"] = c.phi_coeff;
  j["phi-power"] = c.phi_power;
  j["nu"] = c.nu;
  j["N"] = c.N;
  j["dt"] = c.dt;
  j["horizon-steps"] = c.horizon_steps;
  j["horizon"] = c.horizon_time;
  j["samples"] = c.samples;
  json inits = json::array();
  for (const auto& i : c.initials) inits.push_back({{"label", i.label}, {"spec", i.text}});
  j["initials"] = inits;
  json psis = json::array();
  for (const auto& f : c.functionals)
    psis.push_back({{"label", f.label}, {"kind", f.kind}, {"param", f.param}});
  j["functionals"] = psis;
  j["mean-stride-steps"] = c.mean_stride;
  j["ecdf-time"] = c.ecdf_time;
  j["distance-times"] = c.distance_times;
  j["distance-method"] = c.distance_method;
  j["distance-initial"] = c.distance_initial;
  j["distance-subsample"] = c.distance_subsample;
  j["epsilon"] = c.epsilon;
  j["seed"] = c.master_seed;
  j["out-dir"] = c.out_dir;
  j["workers"] = c.workers;
  j["override-admissibility"] = c.override_admissibility;
  return j;
}

RunConfig config_from_json(const json& j) {
  RunConfig c;
  c.model_name = j.at("model").get<std::string>();
  c.phi_coeff = j.at("phi-coeff").get<double>();
  c.phi_power = j.at("phi-power").get<double>();
  c.nu = j.at("nu").get<double>();
  c.N = j.at("N").get<std::int64_t>();
  c.dt = j.at("dt").get<double>();
  c.horizon_steps = j.at("horizon-steps").get<std::int64_t>();
  c.horizon_time = j.at("horizon").get<double>();
  c.samples = j.at("samples").get<std::size_t>();
  c.initials.clear();
  for (const auto& i : j.at("initials"))
    c.initials.push_back({i.at("label").get<std::string>(), i.at("spec").get<std::string>()});
  c.functionals.clear();
  for (const auto& f : j.at("functionals"))
    c.functionals.push_back({f.at("label").get<std::string>(),
                             f.at("kind").get<std::string>(),
                             f.at("param").get<double>()});
  c.mean_stride = j.at("mean-stride-steps").get<std::int64_t>();
  c.ecdf_time = j.at("ecdf-time").get<double>();
  c.distance_times = j.at("distance-times").get<std::vector<double>>();
  c.distance_method = j.at("distance-method").get<std::string>();
  c.distance_initial = j.at("distance-initial").get<std::string>();
  c.distance_subsample = j.at("distance-subsample").get<std::size_t>();
  c.epsilon = j.at("epsilon").get<double>();
  c.master_seed = j.at("seed").get<std::uint64_t>();
  c.out_dir = j.at("out-dir").get<std::string>();
  c.workers = j.at("workers").get<int>();
  c.override_admissibility = j.at("override-admissibility").get<bool>();
  return c;
}

json admissibility_to_json(const AdmissibilityReport& r) {
  return json{{"ok", r.ok},
              {"threshold-a", r.threshold_a},
              {"threshold-b", r.threshold_b},
              {"margin-a", r.margin_a},
              {"margin-b", r.margin_b},
              {"dt-max", r.dt_max},
              {"dt", r.dt},
              {"K", r.K},
              {"nu", r.nu}};
}

AdmissibilityReport admissibility_from_json(const json& j) {
  AdmissibilityReport r;
  r.ok = j.at("ok").get<bool>();
  r.threshold_a = j.at("threshold-a").get<double>();
  r.threshold_b = j.at("threshold-b").get<double>();
  r.margin_a = j.at("margin-a").get<double>();
  r.margin_b = j.at("margin-b").get<double>();
  r.dt_max = j.at("dt-max").get<double>();
  r.dt = j.at("dt").get<double>();
  r.K = j.at("K").get<double>();
  r.nu = j.at("nu").get<double>();
  return r;
}

}  // namespace

void write_manifest(const std::string& path, const RunManifest& m) {
  json j;
  j["library-version"] = m.library_version;
  j["config"] = config_to_json(m.config);
  j["admissibility"] = admissibility_to_json(m.admissibility);
  j["wall-clock-seconds"] = m.wall_clock_seconds;
  json files = json::array();
  for (const auto& f : m.outputs)
    files.push_back({{"path", f.path}, {"fnv1a64", f.fnv1a64}});
  j["outputs"] = files;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
}

RunManifest read_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open manifest '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("manifest '" + path + "': " + e.what());
  }
  RunManifest m;
  try {
    m.library_version = j.at("library-version").get<std::string>();
    m.config = config_from_json(j.at("config"));
    m.admissibility = admissibility_from_json(j.at("admissibility"));
    m.wall_clock_seconds = j.at("wall-clock-seconds").get<double>();
    for (const auto& f : j.at("outputs"))
      m.outputs.push_back({f.at("path").get<std::string>(),
                           f.at("fnv1a64").get<std::string>()});
  } catch (const json::exception& e) {
    throw ParseError("manifest '" + path + "': " + e.what());
  }
  return m;
}

}  // namespace sdde
