#include "sddesim/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "sddesim/errors.hpp"

namespace sdde {

// Shortest augmenting path with dual potentials (Jonker-Volgenant
// flavour), one augmentation per row, O(n^3) total.
std::vector<int> solve_assignment(const std::vector<double>& cost,
                                  std::size_t n) {
  if (cost.size() != n * n)
    throw UsageError("solve_assignment: cost matrix must be n*n");
  if (n == 0) return {};
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based internally; p[j] = row matched to column j, column 0 is virtual.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = static_cast<int>(i);
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = static_cast<std::size_t>(p[j0]);
      double delta = inf;
      std::size_t j1 = 0;
      const double* row = cost.data() + (i0 - 1) * n;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = row[j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = static_cast<int>(j0);
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[static_cast<std::size_t>(p[j])] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = static_cast<std::size_t>(way[j0]);
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> col_of_row(n, -1);
  for (std::size_t j = 1; j <= n; ++j)
    if (p[j] != 0) col_of_row[static_cast<std::size_t>(p[j]) - 1] = static_cast<int>(j) - 1;
  return col_of_row;
}

double assignment_total_cost(const std::vector<double>& cost, std::size_t n,
                             const std::vector<int>& col_of_row) {
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    total += cost[i * n + static_cast<std::size_t>(col_of_row[i])];
  return total;
}

namespace {

double logsumexp(const std::vector<double>& terms) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double t : terms) mx = std::max(mx, t);
  double s = 0.0;
  for (double t : terms) s += std::exp(t - mx);
  return mx + std::log(s);
}

}  // namespace

SinkhornResult sinkhorn_uniform(const std::vector<double>& cost,
                                std::size_t n_a, std::size_t n_b,
                                const SinkhornOptions& opts) {
  if (cost.size() != n_a * n_b)
    throw UsageError("sinkhorn_uniform: cost matrix must be n_a*n_b");
  if (n_a == 0 || n_b == 0)
    throw UsageError("sinkhorn_uniform: empty marginals");
  const double eps = opts.epsilon;
  if (!(eps > 0.0)) throw UsageError("sinkhorn_uniform: epsilon must be > 0");
  const double la = -std::log(static_cast<double>(n_a));
  const double lb = -std::log(static_cast<double>(n_b));

  // Log-domain potentials: pi_ij = exp((phi_i + psi_j - C_ij)/eps).
  std::vector<double> phi(n_a, 0.0), psi(n_b, 0.0);
  std::vector<double> buf(std::max(n_a, n_b));
  int it = 0;
  for (; it < opts.max_iter; ++it) {
    for (std::size_t i = 0; i < n_a; ++i) {
      buf.resize(n_b);
      for (std::size_t j = 0; j < n_b; ++j)
        buf[j] = (psi[j] - cost[i * n_b + j]) / eps;
      phi[i] = eps * (la - logsumexp(buf));
    }
    for (std::size_t j = 0; j < n_b; ++j) {
      buf.resize(n_a);
      for (std::size_t i = 0; i < n_a; ++i)
        buf[i] = (phi[i] - cost[i * n_b + j]) / eps;
      psi[j] = eps * (lb - logsumexp(buf));
    }
    // After the psi sweep column sums are exact; check row sums.
    double worst = 0.0;
    for (std::size_t i = 0; i < n_a; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n_b; ++j)
        row += std::exp((phi[i] + psi[j] - cost[i * n_b + j]) / eps);
      worst = std::max(worst, std::fabs(row - std::exp(la)));
    }
    if (worst <= opts.marginal_tol) break;
  }
  if (it == opts.max_iter)
    throw NumericError("sinkhorn_uniform: marginal tolerance not reached after " +
                       std::to_string(opts.max_iter) + " iterations");

  double value = 0.0;
  for (std::size_t i = 0; i < n_a; ++i)
    for (std::size_t j = 0; j < n_b; ++j)
      value += std::exp((phi[i] + psi[j] - cost[i * n_b + j]) / eps) *
               cost[i * n_b + j];
  return {value, it + 1};
}

}  // namespace sdde
