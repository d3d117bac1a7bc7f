#include "sddesim/rng.hpp"

#include <cmath>
#include <cstring>

#include "sddesim/errors.hpp"

namespace sdde::rng {

namespace {

constexpr std::uint64_t kMult0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMult1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi,
                    std::uint64_t& lo) {
  const unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

inline void philox_round(std::uint64_t c[4], std::uint64_t k0, std::uint64_t k1) {
  std::uint64_t hi0, lo0, hi1, lo1;
  mulhilo(kMult0, c[0], hi0, lo0);
  mulhilo(kMult1, c[2], hi1, lo1);
  const std::uint64_t n0 = hi1 ^ c[1] ^ k0;
  const std::uint64_t n1 = lo1;
  const std::uint64_t n2 = hi0 ^ c[3] ^ k1;
  const std::uint64_t n3 = lo0;
  c[0] = n0;
  c[1] = n1;
  c[2] = n2;
  c[3] = n3;
}

}  // namespace

std::array<std::uint64_t, 4> Philox4x64::block(std::uint64_t block_index) const {
  std::uint64_t c[4] = {block_index, 0, 0, ctr3_};
  std::uint64_t k0 = key0_, k1 = key1_;
  philox_round(c, k0, k1);
  for (int r = 1; r < 10; ++r) {
    k0 += kWeyl0;
    k1 += kWeyl1;
    philox_round(c, k0, k1);
  }
  return {c[0], c[1], c[2], c[3]};
}

// Rational approximations on three regions of p (central, near tail,
// far tail), each accurate to ~1e-16 relative.
double standard_normal_icdf(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw UsageError("standard_normal_icdf: p must lie in (0,1)");

  static constexpr double a[8] = {
      3.3871328727963666080e+0, 1.3314166789178437745e+2,
      1.9715909503065514427e+3, 1.3731693765509461125e+4,
      4.5921953931549871457e+4, 6.7265770927008700853e+4,
      3.3430575583588128105e+4, 2.5090809287301226727e+3};
  static constexpr double b[8] = {
      1.0,                      4.2313330701600911252e+1,
      6.8718700749205790830e+2, 5.3941960214247511077e+3,
      2.1213794301586595867e+4, 3.9307895800092710610e+4,
      2.8729085735721942674e+4, 5.2264952788528545610e+3};
  static constexpr double c[8] = {
      1.42343711074968357734e+0, 4.63033784615654529590e+0,
      5.76949722146069140550e+0, 3.64784832476320460504e+0,
      1.27045825245236838258e+0, 2.41780725177450611770e-1,
      2.27238449892691845833e-2, 7.74545014278341407640e-4};
  static constexpr double d[8] = {
      1.0,                       2.05319162663775882187e+0,
      1.67638483018380384940e+0, 6.89767334985100004550e-1,
      1.48103976427480074590e-1, 1.51986665636164571966e-2,
      5.47593808499534494600e-4, 1.05075007164441684324e-9};
  static constexpr double e[8] = {
      6.65790464350110377720e+0, 5.46378491116411436990e+0,
      1.78482653991729133580e+0, 2.96560571828504891230e-1,
      2.65321895265761230930e-2, 1.24266094738807843860e-3,
      2.71155556874348757815e-5, 2.01033439929228813265e-7};
  static constexpr double f[8] = {
      1.0,                       5.99832206555887937690e-1,
      1.36929880922735805310e-1, 1.48753612908506148525e-2,
      7.86869131145613259100e-4, 1.84631831751005468180e-5,
      1.42151175831644588870e-7, 2.04426310338993978564e-15};

  auto ratio = [](const double* num, const double* den, double r) {
    double n = num[7], m = den[7];
    for (int i = 6; i >= 0; --i) {
      n = n * r + num[i];
      m = m * r + den[i];
    }
    return n / m;
  };

  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * ratio(a, b, r);
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double x;
  if (r <= 5.0) {
    x = ratio(c, d, r - 1.6);
  } else {
    x = ratio(e, f, r - 5.0);
  }
  return (q < 0.0) ? -x : x;
}

void GaussianStream::refill() {
  const auto raw = gen_.block(block_++);
  for (int i = 0; i < 4; ++i)
    buf_[i] = standard_normal_icdf(uniform_from_bits(raw[i]));
  pos_ = 0;
}

std::vector<double> brownian_increments(const SeedSpec& seed, int m, double dt,
                                        std::int64_t count) {
  if (m < 1) throw UsageError("brownian_increments: m must be >= 1");
  if (!(dt > 0.0)) throw UsageError("brownian_increments: dt must be > 0");
  if (count < 0) throw UsageError("brownian_increments: count must be >= 0");
  std::vector<double> out(static_cast<std::size_t>(count) * m);
  GaussianStream g(seed);
  const double s = std::sqrt(dt);
  for (double& v : out) v = s * g.next();
  return out;
}

std::vector<double> brownian_initial_path(const SeedSpec& seed, int d,
                                          const Grid& grid) {
  if (d < 1) throw UsageError("brownian_initial_path: d must be >= 1");
  const std::size_t n = static_cast<std::size_t>(grid.N) + 1;
  std::vector<double> path(n * d, 0.0);
  GaussianStream g(seed);
  const double s = std::sqrt(grid.dt);
  // Forward Brownian path B(j*dt), then reverse so node j carries
  // B((N-j)*dt) and the theta = 0 node is exactly B(0) = 0.
  for (std::size_t j = 1; j < n; ++j)
    for (int c = 0; c < d; ++c)
      path[j * d + c] = path[(j - 1) * d + c] + s * g.next();
  std::vector<double> out(n * d);
  for (std::size_t j = 0; j < n; ++j)
    std::memcpy(&out[j * d], &path[(n - 1 - j) * d], sizeof(double) * d);
  return out;
}

}  // namespace sdde::rng
