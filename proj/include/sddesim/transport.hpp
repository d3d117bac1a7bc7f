#pragma once

#include <cstddef>
#include <vector>

namespace sdde {

// Balanced assignment on an n x n cost matrix (row-major): returns the
// column assigned to each row, minimizing the total cost. O(n^3)
// shortest-augmenting-path with potentials.
std::vector<int> solve_assignment(const std::vector<double>& cost,
                                  std::size_t n);

double assignment_total_cost(const std::vector<double>& cost, std::size_t n,
                             const std::vector<int>& col_of_row);

struct SinkhornOptions {
  double epsilon = 0.01;
  int max_iter = 5000;
  double marginal_tol = 1e-9;  // L-inf error on both marginals
};

struct SinkhornResult {
  double value = 0.0;  // <pi, C> for the regularized plan
  int iterations = 0;
};

// Entropic OT between uniform marginals, log-domain iterations.
// NumericError with the iteration count if the marginal tolerance is
// not reached within max_iter.
SinkhornResult sinkhorn_uniform(const std::vector<double>& cost,
                                std::size_t n_a, std::size_t n_b,
                                const SinkhornOptions& opts = {});

}  // namespace sdde
