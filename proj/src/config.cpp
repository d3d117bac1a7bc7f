#include "sddesim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sddesim/errors.hpp"

namespace sdde {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<double> parse_vector(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(what + ": cannot parse number '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError(what + ": empty vector");
  return out;
}

}  // namespace

InitialData parse_initial_spec(const InitialSpecConfig& spec, int model_d) {
  const std::string& text = spec.text;
  if (text == "brownian" || text == "xi1") return InitialData::brownian(spec.label);
  if (text == "xi2") {
    if (model_d != 2)
      throw ConfigError("initial '" + spec.label + "': alias xi2 needs a d=2 model");
    return InitialData::affine(spec.label, {0.0, 1.0}, {2.0, 1.0});
  }
  if (text == "xi3") {
    if (model_d != 2)
      throw ConfigError("initial '" + spec.label + "': alias xi3 needs a d=2 model");
    return InitialData::constant_vec(spec.label, {-3.0, 4.0});
  }
  if (text.rfind("const:", 0) == 0) {
    auto v = parse_vector(text.substr(6), "initial '" + spec.label + "'");
    if (v.size() != static_cast<std::size_t>(model_d))
      throw ConfigError("initial '" + spec.label + "': expected " +
                        std::to_string(model_d) + " components");
    return InitialData::constant_vec(spec.label, std::move(v));
  }
  if (text.rfind("affine:", 0) == 0) {
    const std::string body = text.substr(7);
    const auto semi = body.find(';');
    if (semi == std::string::npos)
      throw ConfigError("initial '" + spec.label +
                        "': affine needs 'base;slope' separated by ';'");
    auto base = parse_vector(body.substr(0, semi), "initial '" + spec.label + "' base");
    auto slope = parse_vector(body.substr(semi + 1), "initial '" + spec.label + "' slope");
    if (base.size() != static_cast<std::size_t>(model_d) ||
        slope.size() != static_cast<std::size_t>(model_d))
      throw ConfigError("initial '" + spec.label + "': expected " +
                        std::to_string(model_d) + " components");
    return InitialData::affine(spec.label, std::move(base), std::move(slope));
  }
  throw ConfigError("initial '" + spec.label + "': unknown spec '" + text +
                    "' (want brownian | const:... | affine:base;slope | xi1/xi2/xi3)");
}

TestFunctional make_functional(const FunctionalSpec& spec) {
  TestFunctional psi;
  if (spec.kind == "cos-norm") {
    psi = cos_norm();
  } else if (spec.kind == "clip-norm") {
    if (!(spec.param > 0.0))
      throw ConfigError("functional '" + spec.label + "': clip-norm needs a positive level");
    psi = clip_norm(spec.param);
  } else {
    throw ConfigError("functional '" + spec.label + "': unknown kind '" + spec.kind +
                      "' (want cos-norm | clip-norm)");
  }
  psi.label = spec.label;
  return psi;
}

namespace {

// Steps = time/dt, demanding grid alignment instead of rounding.
std::int64_t aligned_steps(double time, double dt, const std::string& what,
                           std::vector<std::string>& issues) {
  const double ratio = time / dt;
  const std::int64_t steps = static_cast<std::int64_t>(std::llround(ratio));
  if (std::fabs(static_cast<double>(steps) * dt - time) >
      1e-9 * std::max(1.0, std::fabs(time))) {
    issues.push_back(what + ": " + std::to_string(time) +
                     " is not aligned to the grid (dt=" + std::to_string(dt) + ")");
    return -1;
  }
  return steps;
}

}  // namespace

ResolvedConfig resolve_config(const RunConfig& cfg) {
  std::vector<std::string> issues;
  ResolvedConfig rc;
  rc.raw = cfg;

  try {
    rc.model = &builtin_model(cfg.model_name);
  } catch (const UsageError& e) {
    issues.push_back(e.what());
  }

  if (rc.model) {
    try {
      const double K = compute_K(*rc.model, [&](double R) {
        return cfg.phi_coeff * std::pow(R, cfg.phi_power);
      });
      rc.rule = make_power_rule(cfg.phi_coeff, cfg.phi_power, cfg.nu, K);
    } catch (const UsageError& e) {
      issues.push_back(std::string("truncation rule: ") + e.what());
    }

    const double tau = rc.model->tau;
    std::int64_t N = cfg.N;
    if (N == 0) {
      if (!(cfg.dt > 0.0)) {
        issues.push_back("grid: dt must be > 0");
      } else {
        N = static_cast<std::int64_t>(std::llround(tau / cfg.dt));
        if (N < 1 || std::fabs(static_cast<double>(N) * cfg.dt - tau) > 1e-9 * tau) {
          issues.push_back("grid: dt=" + std::to_string(cfg.dt) +
                           " does not divide tau=" + std::to_string(tau) + " exactly");
          N = 0;
        }
      }
    }
    if (N > 0) {
      const double dt = tau / static_cast<double>(N);
      std::int64_t horizon = cfg.horizon_steps;
      if (horizon == 0 && cfg.horizon_time > 0.0)
        horizon = aligned_steps(cfg.horizon_time, dt, "horizon", issues);
      if (horizon < 0) horizon = 0;
      try {
        rc.grid = make_grid(tau, N, horizon);
      } catch (const ConfigError& e) {
        issues.push_back(e.what());
      }
    }
  }

  if (cfg.samples < 1) issues.push_back("samples: must be >= 1");
  if (cfg.workers < 1) issues.push_back("workers: must be >= 1");

  if (rc.model) {
    if (cfg.initials.empty()) issues.push_back("initial: at least one initial data spec is required");
    for (const auto& spec : cfg.initials) {
      try {
        rc.initials.push_back(parse_initial_spec(spec, rc.model->d));
      } catch (const ConfigError& e) {
        issues.push_back(e.what());
      }
    }
  }
  if (cfg.functionals.empty()) issues.push_back("functionals: at least one functional is required");
  for (const auto& spec : cfg.functionals) {
    try {
      rc.functionals.push_back(make_functional(spec));
    } catch (const ConfigError& e) {
      issues.push_back(e.what());
    }
  }

  if (rc.grid.n_steps > 0 || rc.grid.N > 0) {
    const Grid& g = rc.grid;
    std::int64_t stride = cfg.mean_stride;
    if (stride == 0) stride = std::max<std::int64_t>(1, g.N / 10);
    if (stride < 1) {
      issues.push_back("mean-stride-steps: must be >= 1");
    } else {
      for (std::int64_t k = 0; k <= g.n_steps; k += stride) rc.mean_steps.push_back(k);
      if (rc.mean_steps.empty() || rc.mean_steps.back() != g.n_steps)
        rc.mean_steps.push_back(g.n_steps);
    }

    if (cfg.ecdf_time < 0.0) {
      rc.ecdf_step = g.n_steps;
    } else {
      const std::int64_t s = aligned_steps(cfg.ecdf_time, g.dt, "ecdf-time", issues);
      if (s >= 0) {
        if (s > g.n_steps) issues.push_back("ecdf-time: beyond the horizon");
        else rc.ecdf_step = s;
      }
    }

    for (double t : cfg.distance_times) {
      const std::int64_t s = aligned_steps(t, g.dt, "distance-times", issues);
      if (s < 0) continue;
      if (s > g.n_steps) issues.push_back("distance-times: " + std::to_string(t) + " beyond the horizon");
      else rc.distance_steps.push_back(s);
    }
    std::sort(rc.distance_steps.begin(), rc.distance_steps.end());
    rc.distance_steps.erase(
        std::unique(rc.distance_steps.begin(), rc.distance_steps.end()),
        rc.distance_steps.end());
  }

  if (cfg.distance_method == "none" || rc.distance_steps.empty()) {
    rc.distances_enabled = false;
  } else if (cfg.distance_method == "exact") {
    rc.distance_method = TransportMethod::ExactAssignment;
  } else if (cfg.distance_method == "entropic") {
    rc.distance_method = TransportMethod::Entropic;
  } else {
    issues.push_back("distance-method: unknown '" + cfg.distance_method +
                     "' (want exact | entropic | none)");
  }
  if (rc.distances_enabled && rc.distance_steps.size() < 2)
    issues.push_back("distance-times: need at least two grid-aligned times");
  if (rc.distances_enabled && cfg.distance_subsample < 2)
    issues.push_back("distance-subsample: must be >= 2");
  if (!(cfg.epsilon > 0.0)) issues.push_back("epsilon: must be > 0");

  if (!cfg.initials.empty()) {
    rc.distance_initial_index = cfg.initials.size() - 1;
    if (!cfg.distance_initial.empty()) {
      bool found = false;
      for (std::size_t i = 0; i < cfg.initials.size(); ++i)
        if (cfg.initials[i].label == cfg.distance_initial) {
          rc.distance_initial_index = i;
          found = true;
        }
      if (!found)
        issues.push_back("distance-initial: no initial labeled '" +
                         cfg.distance_initial + "'");
    }
  }

  if (!issues.empty()) {
    std::ostringstream os;
    os << "invalid configuration (" << issues.size() << " issue"
       << (issues.size() > 1 ? "s" : "") << "):";
    for (const auto& s : issues) os << "\n  - " << s;
    throw ConfigError(os.str());
  }
  return rc;
}

namespace {

struct IniEntry {
  std::string section, key, value;
  long line;
};

std::vector<IniEntry> parse_ini(const std::string& text, const std::string& origin) {
  std::vector<IniEntry> entries;
  std::istringstream in(text);
  std::string line;
  std::string section;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // '#' starts a comment; ';' stays verbatim (the affine initial-data
    // syntax uses it as the base/slope separator).
    const auto comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError(origin, lineno, "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(origin, lineno, "expected key = value");
    entries.push_back({section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), lineno});
  }
  return entries;
}

double to_double(const IniEntry& e, const std::string& origin) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument(e.value);
    return v;
  } catch (const std::exception&) {
    throw ParseError(origin, e.line, "cannot parse number '" + e.value + "' for " + e.key);
  }
}

std::int64_t to_int(const IniEntry& e, const std::string& origin) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument(e.value);
    return v;
  } catch (const std::exception&) {
    throw ParseError(origin, e.line, "cannot parse integer '" + e.value + "' for " + e.key);
  }
}

std::uint64_t to_uint(const IniEntry& e, const std::string& origin) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument(e.value);
    return v;
  } catch (const std::exception&) {
    throw ParseError(origin, e.line, "cannot parse unsigned '" + e.value + "' for " + e.key);
  }
}

bool to_bool(const IniEntry& e, const std::string& origin) {
  if (e.value == "true" || e.value == "1" || e.value == "yes") return true;
  if (e.value == "false" || e.value == "0" || e.value == "no") return false;
  throw ParseError(origin, e.line, "cannot parse boolean '" + e.value + "' for " + e.key);
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  cfg.initials.clear();
  cfg.functionals.clear();
  cfg.distance_times.clear();
  bool saw_distance_times = false;

  for (const auto& e : parse_ini(text, origin)) {
    const std::string where = e.section + "." + e.key;
    if (e.section == "run") {
      if (e.key == "model") cfg.model_name = e.value;
      else if (e.key == "samples") cfg.samples = static_cast<std::size_t>(to_uint(e, origin));
      else if (e.key == "seed") cfg.master_seed = to_uint(e, origin);
      else if (e.key == "workers") cfg.workers = static_cast<int>(to_int(e, origin));
      else if (e.key == "out-dir") cfg.out_dir = e.value;
      else if (e.key == "override-admissibility") cfg.override_admissibility = to_bool(e, origin);
      else throw ParseError(origin, e.line, "unknown key '" + where + "'");
    } else if (e.section == "grid") {
      if (e.key == "N") cfg.N = to_int(e, origin);
      else if (e.key == "dt") cfg.dt = to_double(e, origin);
      else if (e.key == "horizon") cfg.horizon_time = to_double(e, origin);
      else if (e.key == "horizon-steps") cfg.horizon_steps = to_int(e, origin);
      else throw ParseError(origin, e.line, "unknown key '" + where + "'");
    } else if (e.section == "scheme") {
      if (e.key == "phi-coeff") cfg.phi_coeff = to_double(e, origin);
      else if (e.key == "phi-power") cfg.phi_power = to_double(e, origin);
      else if (e.key == "nu") cfg.nu = to_double(e, origin);
      else throw ParseError(origin, e.line, "unknown key '" + where + "'");
    } else if (e.section == "observe") {
      if (e.key == "mean-stride-steps") cfg.mean_stride = to_int(e, origin);
      else if (e.key == "ecdf-time") cfg.ecdf_time = to_double(e, origin);
      else if (e.key == "distance-times") {
        saw_distance_times = true;
        if (e.value != "none")
          cfg.distance_times = parse_vector(e.value, "observe.distance-times");
      } else if (e.key == "distance-method") cfg.distance_method = e.value;
      else if (e.key == "distance-initial") cfg.distance_initial = e.value;
      else if (e.key == "distance-subsample") cfg.distance_subsample = static_cast<std::size_t>(to_uint(e, origin));
      else if (e.key == "epsilon") cfg.epsilon = to_double(e, origin);
      else throw ParseError(origin, e.line, "unknown key '" + where + "'");
    } else if (e.section == "initial") {
      cfg.initials.push_back({e.key, e.value});
    } else if (e.section == "functionals") {
      FunctionalSpec spec;
      spec.label = e.key;
      const auto colon = e.value.find(':');
      if (colon == std::string::npos) {
        spec.kind = e.value;
      } else {
        spec.kind = e.value.substr(0, colon);
        IniEntry tmp = e;
        tmp.value = e.value.substr(colon + 1);
        spec.param = to_double(tmp, origin);
      }
      cfg.functionals.push_back(std::move(spec));
    } else {
      throw ParseError(origin, e.line, "unknown section '" + e.section + "'");
    }
  }
  (void)saw_distance_times;
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

RunConfig paper_example_config(double dt, std::size_t samples,
                               double horizon_time) {
  RunConfig cfg;
  cfg.model_name = "paper-example-5.1";
  cfg.phi_coeff = 16.0;
  cfg.phi_power = 4.0;
  cfg.nu = 0.01;
  cfg.dt = dt;
  cfg.N = 0;
  cfg.horizon_steps = 0;
  cfg.horizon_time = horizon_time;
  cfg.samples = samples;
  cfg.initials = {{"xi1", "brownian"}, {"xi2", "affine:0,1;2,1"}, {"xi3", "const:-3,4"}};
  cfg.functionals = {{"psi1", "cos-norm", 0.0}, {"psi2", "clip-norm", 2.0}};
  cfg.mean_stride = 0;  // N/10
  cfg.ecdf_time = -1.0; // horizon
  cfg.distance_method = "exact";
  for (double t : {1.0, horizon_time / 2.0, horizon_time})
    if (t >= dt && t <= horizon_time &&
        (cfg.distance_times.empty() || cfg.distance_times.back() != t))
      cfg.distance_times.push_back(t);
  if (cfg.distance_times.size() < 2) {
    cfg.distance_times.clear();
    cfg.distance_method = "none";
  }
  cfg.distance_initial = "xi3";
  cfg.distance_subsample = 512;
  return cfg;
}

}  // namespace sdde
