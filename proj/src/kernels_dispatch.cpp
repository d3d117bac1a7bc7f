#include "sddesim/kernels.hpp"

#include <atomic>

#include "sddesim/errors.hpp"

namespace sdde::kernels {

namespace {

std::atomic<Backend> g_forced{Backend::Auto};

Backend resolve(Backend b) {
  if (b != Backend::Auto) return b;
  return avx2_supported() ? Backend::Avx2 : Backend::Scalar;
}

}  // namespace

bool avx2_supported() {
#if defined(__x86_64__)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::Auto: return "auto";
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
  }
  return "?";
}

Backend active_backend() { return resolve(g_forced.load(std::memory_order_relaxed)); }

void set_backend(Backend b) {
  if (b == Backend::Avx2 && !avx2_supported())
    throw UsageError("kernels: avx2 backend requested but not supported on this CPU");
  g_forced.store(b, std::memory_order_relaxed);
}

double max_norm_sq(const double* nodes, std::size_t n, std::size_t d) {
#if defined(__x86_64__)
  if (active_backend() == Backend::Avx2)
    return detail::max_norm_sq_avx2(nodes, n, d);
#endif
  return detail::max_norm_sq_scalar(nodes, n, d);
}

double max_dist_sq(const double* a, const double* b, std::size_t n,
                   std::size_t d) {
#if defined(__x86_64__)
  if (active_backend() == Backend::Avx2)
    return detail::max_dist_sq_avx2(a, b, n, d);
#endif
  return detail::max_dist_sq_scalar(a, b, n, d);
}

}  // namespace sdde::kernels
