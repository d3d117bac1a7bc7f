// Portable reference kernels. Built with -ffp-contract=off so the AVX2
// variants (same mul/add trees, vector lanes) match them bitwise.

#include <cstddef>

#include "sddesim/kernels.hpp"

namespace sdde::kernels::detail {

double max_norm_sq_scalar(const double* nodes, std::size_t n, std::size_t d) {
  double best = 0.0;
  if (d == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      const double s = nodes[i] * nodes[i];
      if (s > best) best = s;
    }
  } else if (d == 2) {
    for (std::size_t i = 0; i < n; ++i) {
      const double x = nodes[2 * i], y = nodes[2 * i + 1];
      const double s = x * x + y * y;
      if (s > best) best = s;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        const double v = nodes[i * d + c];
        s += v * v;
      }
      if (s > best) best = s;
    }
  }
  return best;
}

double max_dist_sq_scalar(const double* a, const double* b, std::size_t n,
                          std::size_t d) {
  double best = 0.0;
  if (d == 1) {
    for (std::size_t i = 0; i < n; ++i) {
      const double e = a[i] - b[i];
      const double s = e * e;
      if (s > best) best = s;
    }
  } else if (d == 2) {
    for (std::size_t i = 0; i < n; ++i) {
      const double ex = a[2 * i] - b[2 * i];
      const double ey = a[2 * i + 1] - b[2 * i + 1];
      const double s = ex * ex + ey * ey;
      if (s > best) best = s;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t c = 0; c < d; ++c) {
        const double e = a[i * d + c] - b[i * d + c];
        s += e * e;
      }
      if (s > best) best = s;
    }
  }
  return best;
}

}  // namespace sdde::kernels::detail
