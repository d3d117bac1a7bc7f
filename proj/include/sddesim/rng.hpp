#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "sddesim/grid.hpp"

namespace sdde::rng {

// Labeled substreams. A (master_seed, trajectory_index, stream) triple
// addresses an independent counter-based stream, so substream creation is
// order-independent and trajectories can run on any worker in any order.
enum class Stream : std::uint64_t {
  SchemeNoise = 0,  // Brownian increments driving the recursion
  InitialData = 1,  // Brownian initial segment
  CertSampler = 2,  // certificate falsification sampling
  Dictionary = 3,   // reference segments for the BL dictionary
  Subsample = 4,    // ensemble subsampling for transport solves
};

struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t trajectory_index = 0;
  Stream stream = Stream::SchemeNoise;

  SeedSpec with(Stream s) const { return {master_seed, trajectory_index, s}; }
};

// Philox4x64-10 counter-based generator (4 x 64-bit outputs per block).
// Key = (master_seed, trajectory_index); counter word 3 holds the stream
// label, words 0..2 the block index.
class Philox4x64 {
 public:
  explicit Philox4x64(const SeedSpec& seed)
      : key0_(seed.master_seed),
        key1_(seed.trajectory_index),
        ctr3_(static_cast<std::uint64_t>(seed.stream)) {}

  Philox4x64(std::uint64_t key0, std::uint64_t key1, std::uint64_t ctr3 = 0)
      : key0_(key0), key1_(key1), ctr3_(ctr3) {}

  std::array<std::uint64_t, 4> block(std::uint64_t block_index) const;

 private:
  std::uint64_t key0_, key1_, ctr3_;
};

// Inverse standard normal CDF, rational-polynomial approximation
// (relative error below 1e-15 over (0,1)). The uniform-to-Gaussian
// transform is fixed per release; determinism contracts depend on it.
double standard_normal_icdf(double p);

// Maps a 64-bit word to the open interval (0,1).
inline double uniform_from_bits(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

// Sequential stream of N(0,1) variates drawn from one Philox substream.
class GaussianStream {
 public:
  explicit GaussianStream(const SeedSpec& seed) : gen_(seed) {}

  double next() {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }

  void fill(std::span<double> out) {
    for (double& v : out) v = next();
  }

 private:
  void refill();

  Philox4x64 gen_;
  std::uint64_t block_ = 0;
  std::array<double, 4> buf_{};
  int pos_ = 4;
};

// count i.i.d. N(0, dt*I_m) vectors, flattened count x m row-major.
std::vector<double> brownian_increments(const SeedSpec& seed, int m, double dt,
                                        std::int64_t count);

// Brownian path on [0,tau] sampled at the grid and index-reversed: entry
// j (= node at theta = (j-N)*dt) holds B((N-j)*dt), so the theta = 0 entry
// is B(0) = 0. Flattened (N+1) x d row-major.
std::vector<double> brownian_initial_path(const SeedSpec& seed, int d,
                                          const Grid& grid);

// Uniform variates on [lo,hi), sequential over one substream.
class UniformStream {
 public:
  UniformStream(const SeedSpec& seed, double lo, double hi)
      : gen_(seed), lo_(lo), width_(hi - lo) {}

  double next() {
    if (pos_ == 4) {
      raw_ = gen_.block(block_++);
      pos_ = 0;
    }
    return lo_ + width_ * uniform_from_bits(raw_[pos_++]);
  }

  void fill(std::span<double> out) {
    for (double& v : out) v = next();
  }

 private:
  Philox4x64 gen_;
  std::uint64_t block_ = 0;
  std::array<std::uint64_t, 4> raw_{};
  int pos_ = 4;
  double lo_, width_;
};

}  // namespace sdde::rng
