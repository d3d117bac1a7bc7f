#include <doctest.h>

#include <string>

#include "sddesim/config.hpp"
#include "sddesim/errors.hpp"

using namespace sdde;

namespace {

const char* kSampleConfig = R"(
# sample experiment
[run]
model = paper-example-5.1
samples = 16
seed = 777
workers = 2
out-dir = /tmp/sddesim-test

[grid]
dt = 1e-3
horizon = 2.0

[scheme]
phi-coeff = 16
phi-power = 4
nu = 0.01

[observe]
mean-stride-steps = 500
ecdf-time = 2.0
distance-times = 1,2
distance-method = exact
distance-initial = xi3
distance-subsample = 8

[initial]
xi2 = affine:0,1;2,1
xi3 = const:-3,4

[functionals]
psi1 = cos-norm
psi2 = clip-norm:2
)";

}  // namespace

TEST_CASE("config round trip through the INI parser") {
  const RunConfig cfg = parse_config_text(kSampleConfig, "<test>");
  CHECK(cfg.model_name == "paper-example-5.1");
  CHECK(cfg.samples == 16);
  CHECK(cfg.master_seed == 777);
  CHECK(cfg.workers == 2);
  CHECK(cfg.dt == 1e-3);
  CHECK(cfg.horizon_time == 2.0);
  CHECK(cfg.mean_stride == 500);
  CHECK(cfg.distance_times == std::vector<double>{1.0, 2.0});
  CHECK(cfg.initials.size() == 2);
  CHECK(cfg.initials[0].label == "xi2");
  CHECK(cfg.functionals.size() == 2);
  CHECK(cfg.functionals[1].kind == "clip-norm");
  CHECK(cfg.functionals[1].param == 2.0);

  const ResolvedConfig rc = resolve_config(cfg);
  CHECK(rc.grid.N == 1000);
  CHECK(rc.grid.n_steps == 2000);
  CHECK(rc.mean_steps.front() == 0);
  CHECK(rc.mean_steps.back() == 2000);
  CHECK(rc.ecdf_step == 2000);
  CHECK(rc.distance_steps == std::vector<std::int64_t>{1000, 2000});
  CHECK(rc.distance_initial_index == 1);
  CHECK(rc.functionals[0].in_xi());
  CHECK_FALSE(rc.functionals[1].in_xi());
}

TEST_CASE("unknown keys and malformed lines are parse errors with line numbers") {
  CHECK_THROWS_WITH_AS(parse_config_text("[run]\nbogus = 1\n", "<t>"),
                       doctest::Contains("bogus"), ParseError);
  CHECK_THROWS_WITH_AS(parse_config_text("[nope]\nx = 1\n", "<t>"),
                       doctest::Contains("<t>:2"), ParseError);
  CHECK_THROWS_AS(parse_config_text("[run\n", "<t>"), ParseError);
  CHECK_THROWS_AS(parse_config_text("[run]\nsamples == 2\n", "<t>"), ParseError);
  CHECK_THROWS_AS(parse_config_text("[run]\nsamples = abc\n", "<t>"), ParseError);
}

TEST_CASE("validation collects every violated field") {
  RunConfig cfg;  // defaults: no initials, no functionals
  cfg.model_name = "unknown-model";
  cfg.samples = 0;
  cfg.workers = 0;
  cfg.functionals.clear();
  cfg.initials.clear();
  try {
    resolve_config(cfg);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("unknown-model") != std::string::npos);
    CHECK(what.find("samples") != std::string::npos);
    CHECK(what.find("workers") != std::string::npos);
    CHECK(what.find("functional") != std::string::npos);
  }
}

TEST_CASE("non-grid-aligned times are rejected, not rounded") {
  RunConfig cfg = paper_example_config(1e-3, 4, 1.0);
  cfg.horizon_time = 1.0005;  // not a multiple of dt
  CHECK_THROWS_WITH_AS(resolve_config(cfg), doctest::Contains("aligned"),
                       ConfigError);

  RunConfig cfg2 = paper_example_config(1e-3, 4, 1.0);
  cfg2.ecdf_time = 0.55555;
  CHECK_THROWS_AS(resolve_config(cfg2), ConfigError);

  RunConfig cfg3 = paper_example_config(1e-3, 4, 1.0);
  cfg3.dt = 3e-3;  // tau/dt not integral
  cfg3.N = 0;
  CHECK_THROWS_WITH_AS(resolve_config(cfg3), doctest::Contains("divide"),
                       ConfigError);
}

TEST_CASE("initial data spec parsing") {
  CHECK(parse_initial_spec({"a", "brownian"}, 2).kind == InitialData::Kind::BrownianPath);
  CHECK(parse_initial_spec({"a", "xi1"}, 2).kind == InitialData::Kind::BrownianPath);
  const auto c = parse_initial_spec({"a", "const:1.5,-2"}, 2);
  CHECK(c.constant == std::vector<double>{1.5, -2.0});
  const auto aff = parse_initial_spec({"a", "affine:0,1;2,1"}, 2);
  CHECK(aff.affine_base == std::vector<double>{0.0, 1.0});
  CHECK(aff.affine_slope == std::vector<double>{2.0, 1.0});
  CHECK_THROWS_AS(parse_initial_spec({"a", "const:1"}, 2), ConfigError);
  CHECK_THROWS_AS(parse_initial_spec({"a", "affine:1,2"}, 2), ConfigError);
  CHECK_THROWS_AS(parse_initial_spec({"a", "gibberish"}, 2), ConfigError);
  CHECK_THROWS_AS(parse_initial_spec({"a", "xi2"}, 3), ConfigError);
}

TEST_CASE("the builtin example config resolves to the experiment plan") {
  const RunConfig cfg = paper_example_config(1e-3, 2000, 10.0);
  const ResolvedConfig rc = resolve_config(cfg);
  CHECK(rc.grid.N == 1000);
  CHECK(rc.grid.dt == 1e-3);
  CHECK(rc.grid.n_steps == 10000);
  CHECK(rc.initials.size() == 3);
  CHECK(rc.initials[0].kind == InitialData::Kind::BrownianPath);
  CHECK(rc.initials[1].kind == InitialData::Kind::AffineInTheta);
  CHECK(rc.initials[2].kind == InitialData::Kind::ConstantVector);
  CHECK(rc.functionals.size() == 2);
  CHECK(rc.distance_steps == std::vector<std::int64_t>{1000, 5000, 10000});
  CHECK(rc.distance_initial_index == 2);  // xi3
  CHECK(rc.ecdf_step == 10000);
  // dt = 1e-4 leg: N = 10^4.
  const ResolvedConfig fine = resolve_config(paper_example_config(1e-4, 10, 1.0));
  CHECK(fine.grid.N == 10000);
}
