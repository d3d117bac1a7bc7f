#pragma once

#include <cstddef>

// Data-parallel reductions over segment node arrays. A scalar reference
// implementation always exists; on x86-64 an AVX2 variant is selected at
// runtime when the CPU supports it. Both variants are built with FP
// contraction disabled, so for the same input they return bitwise
// identical results (the reductions are pure max/mul/add trees).
//
// The sup of the Euclidean norm of a piecewise-linear path over one
// inter-node interval is the max of a convex quadratic |a + s*b|^2 over
// s in [0,1]; the interior critical point is its minimum, so the interval
// max sits at an endpoint and the path sup equals the node max. These
// kernels therefore reduce over nodes.

namespace sdde::kernels {

enum class Backend {
  Auto,    // pick the best supported variant (default)
  Scalar,  // portable reference
  Avx2,    // x86-64 AVX2
};

const char* backend_name(Backend b);

// Variant that Auto currently resolves to.
Backend active_backend();

// Force a variant process-wide (equivalence tests, debugging).
// Throws UsageError if the requested variant is not supported on this CPU.
void set_backend(Backend b);

bool avx2_supported();

// max over the n nodes of the squared Euclidean norm; nodes is n*d row-major.
double max_norm_sq(const double* nodes, std::size_t n, std::size_t d);

// max over the n nodes of the squared Euclidean distance |a_i - b_i|^2.
double max_dist_sq(const double* a, const double* b, std::size_t n, std::size_t d);

namespace detail {
double max_norm_sq_scalar(const double* nodes, std::size_t n, std::size_t d);
double max_dist_sq_scalar(const double* a, const double* b, std::size_t n, std::size_t d);
#if defined(__x86_64__)
double max_norm_sq_avx2(const double* nodes, std::size_t n, std::size_t d);
double max_dist_sq_avx2(const double* a, const double* b, std::size_t n, std::size_t d);
#endif
}  // namespace detail

}  // namespace sdde::kernels
