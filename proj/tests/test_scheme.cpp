#include <doctest.h>

#include <cmath>
#include <vector>

#include "sddesim/errors.hpp"
#include "sddesim/scheme.hpp"

using namespace sdde;

namespace {

SddeModel frozen_model(int d) {
  SddeModel m;
  m.name = "frozen";
  m.d = d;
  m.m = 1;
  m.tau = 1.0;
  m.drift = [](auto, auto, std::span<double> out) {
    for (double& v : out) v = 0.0;
  };
  m.diffusion = [](auto, auto, std::span<double> out) {
    for (double& v : out) v = 0.0;
  };
  return m;
}

SddeModel linear_decay_model() {
  SddeModel m = frozen_model(1);
  m.name = "decay";
  m.drift = [](std::span<const double> x, auto, std::span<double> out) {
    out[0] = -x[0];
  };
  return m;
}

TruncationRule wide_rule() {
  // K = 4, phi = R^2, nu = 1/100: radius = (4 dt^-0.01)^(1/2) >= 2.
  return make_power_rule(1.0, 2.0, 0.01, 4.0);
}

}  // namespace

TEST_CASE("frozen dynamics stay at the initial constant") {
  const auto m = frozen_model(2);
  const auto rule = wide_rule();
  const Grid grid = make_grid(1.0, 10, 25);
  const auto init = InitialData::constant_vec("c", {0.5, -0.25});
  const auto traj = simulate(m, rule, grid, init, 1, 0);
  for (std::int64_t k = -grid.N; k <= grid.n_steps; ++k) {
    CHECK(traj.at(k)[0] == 0.5);
    CHECK(traj.at(k)[1] == -0.25);
  }
}

TEST_CASE("deterministic linear decay matches the closed form") {
  const auto m = linear_decay_model();
  const auto rule = wide_rule();
  const Grid grid = make_grid(1.0, 1000, 10000);
  const auto init = InitialData::constant_vec("one", {1.0});
  const auto traj = simulate(m, rule, grid, init, 7, 0);
  const double q = 1.0 - grid.dt;
  double worst = 0.0;
  for (std::int64_t k = 0; k <= grid.n_steps; ++k) {
    const double expect = std::pow(q, static_cast<double>(k));
    worst = std::max(worst, std::fabs(traj.at(k)[0] - expect));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("initial data above the radius is truncated to the radius") {
  const auto m = frozen_model(2);
  const auto rule = make_power_rule(16.0, 4.0, 0.01, 16.0);
  const Grid grid = make_grid(1.0, 100, 10);
  const double radius = truncation_radius(rule, grid.dt);
  const auto init = InitialData::constant_vec("far", {-3.0, 4.0});  // norm 5
  const auto traj = simulate(m, rule, grid, init, 1, 0);
  const auto u0 = traj.at(0);
  const double n0 = std::hypot(u0[0], u0[1]);
  CHECK(n0 == doctest::Approx(radius).epsilon(1e-14));
  // Direction is preserved: (-3,4)/5 = (-0.6, 0.8).
  CHECK(u0[0] == doctest::Approx(radius * -0.6).epsilon(1e-14));
  CHECK(u0[1] == doctest::Approx(radius * 0.8).epsilon(1e-14));
}

TEST_CASE("every stored state respects the truncation radius") {
  const SddeModel& m = builtin_model("paper-example-5.1");
  const auto rule = make_power_rule(16.0, 4.0, 0.01, 16.0);
  const Grid grid = make_grid(1.0, 1000, 2000);
  const auto traj =
      simulate(m, rule, grid, InitialData::brownian("xi1"), 99, 3);
  CHECK(traj.max_state_norm <= traj.radius * (1.0 + 1e-12));
  for (std::int64_t k = -grid.N; k <= grid.n_steps; ++k) {
    const auto u = traj.at(k);
    CHECK(std::hypot(u[0], u[1]) <= traj.radius * (1.0 + 1e-12));
  }
}

TEST_CASE("piecewise constant evaluation") {
  const auto m = linear_decay_model();
  const auto rule = wide_rule();
  const Grid grid = make_grid(1.0, 10, 20);
  const auto traj = simulate(m, rule, grid, InitialData::constant_vec("one", {1.0}), 1, 0);

  const double dt = grid.dt;
  for (std::int64_t k : {-10L, -3L, 0L, 5L, 19L}) {
    const double tk = grid.time_at(k);
    CHECK(piecewise_constant(traj, tk)[0] == traj.at(k)[0]);          // node
    CHECK(piecewise_constant(traj, tk + dt / 2)[0] == traj.at(k)[0]); // mid
    // Just below the next node still uses the left node.
    const double just_below = grid.time_at(k + 1) - dt * std::pow(2.0, -20);
    CHECK(piecewise_constant(traj, just_below)[0] == traj.at(k)[0]);
  }
  CHECK_THROWS_AS(piecewise_constant(traj, -1.5), UsageError);
  CHECK_THROWS_AS(piecewise_constant(traj, 2.0 + 1e-9), UsageError);
}

TEST_CASE("piecewise linear evaluation") {
  const SddeModel& m = builtin_model("paper-example-5.1");
  const auto rule = make_power_rule(16.0, 4.0, 0.01, 16.0);
  const Grid grid = make_grid(1.0, 50, 100);
  SimulateOptions opts;
  opts.override_admissibility = true;  // dt = 0.02 fails the gates; fine here
  const auto traj = simulate(m, rule, grid, InitialData::brownian("xi1"), 5, 2, opts);

  for (std::int64_t k : {-50L, -7L, 0L, 42L, 99L}) {
    const double tk = grid.time_at(k);
    // Nodes are exact, and both interpolants agree there.
    CHECK(piecewise_linear(traj, tk) ==
          std::vector<double>(traj.at(k).begin(), traj.at(k).end()));
    CHECK(piecewise_linear(traj, tk) == piecewise_constant(traj, tk));
    // Midpoint is the average of the adjacent nodes.
    const auto mid = piecewise_linear(traj, tk + grid.dt / 2);
    for (int c = 0; c < 2; ++c)
      CHECK(mid[c] ==
            doctest::Approx((traj.at(k)[c] + traj.at(k + 1)[c]) / 2).epsilon(1e-14));
    // Convexity: interpolated values stay inside the node interval.
    for (double fr : {0.125, 0.3, 0.77}) {
      const auto v = piecewise_linear(traj, tk + fr * grid.dt);
      for (int c = 0; c < 2; ++c) {
        const double lo = std::min(traj.at(k)[c], traj.at(k + 1)[c]);
        const double hi = std::max(traj.at(k)[c], traj.at(k + 1)[c]);
        CHECK(v[c] >= lo - 1e-12);
        CHECK(v[c] <= hi + 1e-12);
      }
    }
  }
}

TEST_CASE("segment extraction: initial window and sliding identity") {
  const SddeModel& m = builtin_model("paper-example-5.1");
  const auto rule = make_power_rule(16.0, 4.0, 0.01, 16.0);
  const Grid grid = make_grid(1.0, 20, 40);
  SimulateOptions opts;
  opts.override_admissibility = true;
  const auto traj = simulate(m, rule, grid, InitialData::brownian("xi1"), 5, 2, opts);

  // k = 0 is the truncated initial segment.
  const Segment s0 = extract_segment(traj, 0);
  for (std::int64_t j = 0; j <= grid.N; ++j)
    for (int c = 0; c < 2; ++c) CHECK(s0.node(j)[c] == traj.at(j - grid.N)[c]);

  // Sliding windows share N nodes.
  const Segment a = extract_segment(traj, 17);
  const Segment b = extract_segment(traj, 18);
  for (std::int64_t j = 1; j <= grid.N; ++j)
    for (int c = 0; c < 2; ++c) CHECK(a.node(j)[c] == b.node(j - 1)[c]);

  CHECK_THROWS_AS(extract_segment(traj, -1), UsageError);
  CHECK_THROWS_AS(extract_segment(traj, 41), UsageError);

  // Frozen dynamics: every segment equals the initial one.
  const auto frozen = frozen_model(1);
  const auto ftraj = simulate(frozen, wide_rule(), grid,
                              InitialData::constant_vec("c", {0.25}), 1, 0);
  const Segment f0 = extract_segment(ftraj, 0);
  const Segment f9 = extract_segment(ftraj, 9);
  CHECK(f0.nodes == f9.nodes);
}

TEST_CASE("segment sup norm") {
  Segment s;
  s.N = 3;
  s.dt = 0.25;
  s.d = 1;
  s.nodes = {1.0, -1.0, 1.0, -1.0};
  CHECK(segment_sup_norm(s) == 1.0);

  Segment c;
  c.N = 2;
  c.dt = 0.5;
  c.d = 2;
  c.nodes = {0.3, -0.4, 0.3, -0.4, 0.3, -0.4};
  CHECK(segment_sup_norm(c) == doctest::Approx(0.5).epsilon(1e-15));

  // One interval from (1,0) to (0,1): endpoint max is 1.
  Segment e;
  e.N = 1;
  e.dt = 1.0;
  e.d = 2;
  e.nodes = {1.0, 0.0, 0.0, 1.0};
  CHECK(segment_sup_norm(e) == 1.0);
}

TEST_CASE("streaming and full simulation agree") {
  const SddeModel& m = builtin_model("paper-example-5.1");
  const auto rule = make_power_rule(16.0, 4.0, 0.01, 16.0);
  const Grid grid = make_grid(1.0, 1000, 1500);
  const auto init = InitialData::brownian("xi1");
  const auto traj = simulate(m, rule, grid, init, 2024, 11);

  const std::vector<std::int64_t> obs = {0, 700, 1500};
  std::vector<Segment> got;
  const auto stats = simulate_segments(m, rule, grid, init, 2024, 11, obs,
                                       [&](std::int64_t, const Segment& s) {
                                         got.push_back(s);
                                       });
  REQUIRE(got.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const Segment want = extract_segment(traj, obs[i]);
    CHECK(got[i].nodes == want.nodes);  // bitwise agreement
  }
  CHECK(stats.radius_violations == 0);
  CHECK(stats.states_stored == grid.N + grid.n_steps + 1);
  CHECK(stats.max_state_norm == traj.max_state_norm);
}

TEST_CASE("admissibility gate blocks bad step sizes unless overridden") {
  const SddeModel& m = builtin_model("paper-example-5.1");
  const auto rule = make_power_rule(16.0, 4.0, 0.01, 16.0);
  const Grid grid = make_grid(1.0, 100, 10);  // dt = 0.01 > dt_max
  const auto init = InitialData::constant_vec("c", {0.1, 0.1});
  CHECK_THROWS_AS(simulate(m, rule, grid, init, 1, 0), AdmissibilityError);
  SimulateOptions opts;
  opts.override_admissibility = true;
  CHECK_NOTHROW(simulate(m, rule, grid, init, 1, 0, opts));
}

TEST_CASE("growth envelopes hold for the builtin run and fail for undersized phi") {
  const SddeModel& m = builtin_model("paper-example-5.1");
  const auto rule = make_power_rule(16.0, 4.0, 0.01, 16.0);
  const Grid grid = make_grid(1.0, 1000, 1000);
  const auto traj = simulate(m, rule, grid, InitialData::constant_vec("xi3", {-3.0, 4.0}), 3, 0);
  const auto rep = coefficient_growth_check(traj, m, rule);
  CHECK(rep.ok);
  CHECK(rep.max_drift_ratio <= 1.0);
  CHECK(rep.max_diffusion_ratio <= 1.0);

  // Frozen model: coefficients vanish, ratios are zero.
  const auto frozen = frozen_model(1);
  const auto ftraj = simulate(frozen, wide_rule(), grid,
                              InitialData::constant_vec("c", {0.5}), 1, 0);
  const auto frep = coefficient_growth_check(ftraj, frozen, wide_rule());
  CHECK(frep.ok);
  CHECK(frep.max_drift_ratio == 0.0);
  CHECK(frep.max_diffusion_ratio == 0.0);

  // Deliberately undersized phi(R) = R against a cubic drift: states
  // near the radius break the envelope.
  SddeModel cubic = frozen_model(1);
  cubic.name = "cubic";
  cubic.drift = [](std::span<const double> x, auto, std::span<double> out) {
    out[0] = -x[0] - 3.0 * x[0] * x[0] * x[0];
  };
  const auto small_rule = make_power_rule(1.0, 1.0, 1.0 / 3.0, 1.0);
  const Grid cg = make_grid(1.0, 1000, 5);
  const double r = truncation_radius(small_rule, cg.dt);  // dt^-1/3 = 10
  const auto ctraj = simulate(cubic, small_rule, cg,
                              InitialData::constant_vec("big", {r}), 1, 0);
  const auto crep = coefficient_growth_check(ctraj, cubic, small_rule);
  CHECK_FALSE(crep.ok);
  CHECK(crep.max_drift_ratio > 1.0);
}

TEST_CASE("non-grid initial samples are rejected") {
  const auto m = frozen_model(1);
  const Grid grid = make_grid(1.0, 10, 5);
  auto bad = InitialData::grid_samples("bad", std::vector<double>(7, 0.0));
  CHECK_THROWS_AS(simulate(m, wide_rule(), grid, bad, 1, 0), UsageError);
  auto good = InitialData::grid_samples("good", std::vector<double>(11, 0.5));
  CHECK_NOTHROW(simulate(m, wide_rule(), grid, good, 1, 0));
}
