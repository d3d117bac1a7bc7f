#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "sddesim/errors.hpp"
#include "sddesim/rng.hpp"
#include "sddesim/transport.hpp"

using namespace sdde;

namespace {

// Independent oracle: exhaustive minimum over all n! assignments.
double brute_force_min(const std::vector<double>& cost, std::size_t n) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = 1e300;
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += cost[i * n + perm[i]];
    best = std::min(best, total);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::vector<double> random_cost(std::uint64_t seed, std::size_t n) {
  std::vector<double> cost(n * n);
  rng::UniformStream u({seed, 0, rng::Stream::Subsample}, 0.0, 1.0);
  u.fill(cost);
  return cost;
}

}  // namespace

TEST_CASE("hand instance: diagonal optimum 0.4") {
  const std::vector<double> cost = {0.1, 0.9, 1.0, 0.9, 0.1, 1.0, 1.0, 1.0, 0.2};
  const auto assignment = solve_assignment(cost, 3);
  CHECK(assignment == std::vector<int>{0, 1, 2});
  const double total = assignment_total_cost(cost, 3, assignment);
  CHECK(total == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(total / 3.0 == doctest::Approx(0.4 / 3.0).epsilon(1e-15));
  CHECK(brute_force_min(cost, 3) == doctest::Approx(total).epsilon(1e-15));
}

TEST_CASE("exact assignment equals brute force on 100 random instances, n <= 6") {
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 6);
    const auto cost = random_cost(trial + 1, n);
    const auto assignment = solve_assignment(cost, n);
    // A valid permutation...
    std::vector<char> seen(n, 0);
    for (int c : assignment) {
      REQUIRE(c >= 0);
      REQUIRE(static_cast<std::size_t>(c) < n);
      seen[static_cast<std::size_t>(c)] = 1;
    }
    CHECK(std::count(seen.begin(), seen.end(), 1) == static_cast<long>(n));
    // ...achieving exactly the exhaustive minimum.
    CHECK(assignment_total_cost(cost, n, assignment) ==
          doctest::Approx(brute_force_min(cost, n)).epsilon(1e-12));
  }
}

TEST_CASE("assignment validates the matrix shape") {
  CHECK_THROWS_AS(solve_assignment(std::vector<double>(5, 0.0), 2), UsageError);
  CHECK(solve_assignment({}, 0).empty());
}

TEST_CASE("sinkhorn on a trivial instance matches the exact value") {
  // Two identical points: optimal plan is anything, value 0 on the
  // diagonal; with cost 0 everywhere the value is 0 regardless of eps.
  const std::vector<double> zero_cost(4, 0.0);
  const auto r = sinkhorn_uniform(zero_cost, 2, 2, {0.01, 1000, 1e-12});
  CHECK(r.value == doctest::Approx(0.0).epsilon(1e-12));

  // A sharply separated instance: eps small enough recovers the
  // assignment value 0.2 / 2 per unit mass scale.
  const std::vector<double> cost = {0.1, 0.9, 0.9, 0.1};
  const auto s = sinkhorn_uniform(cost, 2, 2, {0.01, 20000, 1e-10});
  CHECK(s.value == doctest::Approx(0.1).epsilon(1e-3));
}
