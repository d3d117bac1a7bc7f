#include "sddesim/grid.hpp"

#include <string>

#include "sddesim/errors.hpp"

namespace sdde {

Grid make_grid(double tau, std::int64_t N, std::int64_t n_steps) {
  if (!(tau > 0.0)) throw ConfigError("grid: tau must be > 0, got " + std::to_string(tau));
  if (N < 1) throw ConfigError("grid: N must be >= 1, got " + std::to_string(N));
  if (static_cast<double>(N) <= tau)
    throw ConfigError("grid: need N > tau so that dt < 1 (N=" + std::to_string(N) +
                      ", tau=" + std::to_string(tau) + ")");
  if (n_steps < 0)
    throw ConfigError("grid: n_steps must be >= 0, got " + std::to_string(n_steps));
  Grid g;
  g.tau = tau;
  g.N = N;
  g.dt = tau / static_cast<double>(N);
  g.n_steps = n_steps;
  return g;
}

}  // namespace sdde
