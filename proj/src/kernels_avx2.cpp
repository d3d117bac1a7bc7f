// AVX2 kernels, x86-64 only. Compiled with -mavx2 -ffp-contract=off.
// Arithmetic per node matches the scalar reference operation for
// operation (mul, mul, add), and max-reductions are exact, so outputs
// are bitwise identical to the scalar path.

#if defined(__x86_64__)

#include <immintrin.h>

#include <cstddef>

#include "sddesim/kernels.hpp"

namespace sdde::kernels::detail {

namespace {

inline double hmax4(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  __m128d m = _mm_max_pd(lo, hi);
  __m128d s = _mm_unpackhi_pd(m, m);
  return _mm_cvtsd_f64(_mm_max_sd(m, s));
}

// 4 nodes of dimension 2 per iteration; hadd yields the 4 squared norms
// (lane-permuted, which a max reduction does not care about).
inline double max_norm_sq_d2(const double* p, std::size_t n) {
  __m256d best = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v0 = _mm256_loadu_pd(p + 2 * i);
    __m256d v1 = _mm256_loadu_pd(p + 2 * i + 4);
    __m256d h = _mm256_hadd_pd(_mm256_mul_pd(v0, v0), _mm256_mul_pd(v1, v1));
    best = _mm256_max_pd(best, h);
  }
  double out = hmax4(best);
  for (; i < n; ++i) {
    const double x = p[2 * i], y = p[2 * i + 1];
    const double s = x * x + y * y;
    if (s > out) out = s;
  }
  return out;
}

inline double max_dist_sq_d2(const double* a, const double* b, std::size_t n) {
  __m256d best = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d e0 = _mm256_sub_pd(_mm256_loadu_pd(a + 2 * i), _mm256_loadu_pd(b + 2 * i));
    __m256d e1 = _mm256_sub_pd(_mm256_loadu_pd(a + 2 * i + 4), _mm256_loadu_pd(b + 2 * i + 4));
    __m256d h = _mm256_hadd_pd(_mm256_mul_pd(e0, e0), _mm256_mul_pd(e1, e1));
    best = _mm256_max_pd(best, h);
  }
  double out = hmax4(best);
  for (; i < n; ++i) {
    const double ex = a[2 * i] - b[2 * i];
    const double ey = a[2 * i + 1] - b[2 * i + 1];
    const double s = ex * ex + ey * ey;
    if (s > out) out = s;
  }
  return out;
}

inline double max_norm_sq_d1(const double* p, std::size_t n) {
  __m256d best = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(p + i);
    best = _mm256_max_pd(best, _mm256_mul_pd(v, v));
  }
  double out = hmax4(best);
  for (; i < n; ++i) {
    const double s = p[i] * p[i];
    if (s > out) out = s;
  }
  return out;
}

inline double max_dist_sq_d1(const double* a, const double* b, std::size_t n) {
  __m256d best = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d e = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    best = _mm256_max_pd(best, _mm256_mul_pd(e, e));
  }
  double out = hmax4(best);
  for (; i < n; ++i) {
    const double e = a[i] - b[i];
    const double s = e * e;
    if (s > out) out = s;
  }
  return out;
}

}  // namespace

double max_norm_sq_avx2(const double* nodes, std::size_t n, std::size_t d) {
  if (d == 2) return max_norm_sq_d2(nodes, n);
  if (d == 1) return max_norm_sq_d1(nodes, n);
  return max_norm_sq_scalar(nodes, n, d);
}

double max_dist_sq_avx2(const double* a, const double* b, std::size_t n,
                        std::size_t d) {
  if (d == 2) return max_dist_sq_d2(a, b, n);
  if (d == 1) return max_dist_sq_d1(a, b, n);
  return max_dist_sq_scalar(a, b, n, d);
}

}  // namespace sdde::kernels::detail

#endif  // __x86_64__
