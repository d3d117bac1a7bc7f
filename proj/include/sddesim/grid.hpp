#pragma once

#include <cstdint>

namespace sdde {

// Uniform time grid t_k = k*dt for k >= -N, with dt = tau/N.
// Node indices -N..0 carry the initial segment, 1..n_steps the simulated horizon.
struct Grid {
  double tau = 1.0;
  std::int64_t N = 1;
  double dt = 1.0;
  std::int64_t n_steps = 0;

  double time_at(std::int64_t k) const { return static_cast<double>(k) * dt; }
  double horizon() const { return time_at(n_steps); }
};

// Validates tau > 0, N > tau (so dt < 1), n_steps >= 0 and sets dt = tau/N.
Grid make_grid(double tau, std::int64_t N, std::int64_t n_steps);

}  // namespace sdde
