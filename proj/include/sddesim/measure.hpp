#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sddesim/scheme.hpp"
#include "sddesim/transport.hpp"

namespace sdde {

// A functional Psi on segment space with declared Lipschitz and sup
// bounds. Membership in the test class requires both bounds <= 1.
struct TestFunctional {
  std::string label;
  double lipschitz_bound = 1.0;
  double sup_bound = 1.0;
  std::function<double(const Segment&)> fn;

  bool in_xi() const { return lipschitz_bound <= 1.0 && sup_bound <= 1.0; }
  double operator()(const Segment& s) const { return fn(s); }
};

// cos(||X||): Lipschitz 1, bounded by 1, in the test class.
TestFunctional cos_norm();
// c ^ ||X||: Lipschitz 1, sup c. c=2 reproduces the reporting
// functional whose sup bound excludes it from the test class.
TestFunctional clip_norm(double c);
// 1 ^ ||X - ref||: in the test class.
TestFunctional clip_dist_to(Segment ref, std::string label);
// Coordinate value at a theta node, clipped to [-1,1]: in the test class.
TestFunctional coordinate_eval(int coord, std::int64_t node_index,
                               std::string label);
// factor * psi with the declared bounds scaled along.
TestFunctional scaled(TestFunctional psi, double factor);

// Spot check of the declared bounds on random segment pairs (nodes
// uniform in [-amplitude, amplitude]).
struct SpotCheckReport {
  std::size_t n_pairs = 0;
  std::size_t lipschitz_violations = 0;
  std::size_t sup_violations = 0;
  double max_lipschitz_ratio = 0.0;
  double max_abs_value = 0.0;

  bool ok() const { return lipschitz_violations == 0 && sup_violations == 0; }
};

SpotCheckReport spot_check_functional(const TestFunctional& psi, int d,
                                      std::int64_t N, double dt,
                                      std::uint64_t seed,
                                      std::size_t n_pairs = 10000,
                                      double amplitude = 2.0);

// Equal-weight sample of segments at one observation time.
struct EmpiricalSegmentMeasure {
  std::vector<Segment> samples;
  double time_label = 0.0;

  std::size_t size() const { return samples.size(); }
};

struct MeanResult {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t n = 0;
};

MeanResult mean_and_stderr(std::span<const double> values);
MeanResult functional_mean(const EmpiricalSegmentMeasure& measure,
                           const TestFunctional& psi);
std::vector<double> functional_values(const EmpiricalSegmentMeasure& measure,
                                      const TestFunctional& psi);

// Right-continuous empirical CDF F(v) = #(values <= v) / n.
struct Ecdf {
  std::vector<double> sorted_values;

  double at(double v) const;
  std::size_t size() const { return sorted_values.size(); }
};

Ecdf empirical_cdf(std::span<const double> values);
Ecdf empirical_cdf(const EmpiricalSegmentMeasure& measure,
                   const TestFunctional& psi);

// Two-sample sup |F_A - F_B| over the merged jump set.
double ks_statistic(const Ecdf& a, const Ecdf& b);

// max over the dictionary of |mean_A(Psi) - mean_B(Psi)|; every
// dictionary member must be in the test class. A certified lower bound
// on the test-class distance between the empirical measures.
double bl_lower_bound(const EmpiricalSegmentMeasure& a,
                      const EmpiricalSegmentMeasure& b,
                      std::span<const TestFunctional> dictionary);

// cos-norm, 1^||.||, 1^||.-ref|| for n_refs seeded constant reference
// segments, and per-coordinate evaluations at theta in {-tau, -tau/2, 0}
// clipped to [-1,1] and halved. The halving keeps every member's
// oscillation <= 1, i.e. 1-Lipschitz against the truncated metric, so
// the lower bound never exceeds the transport distance (cos-norm needs
// segments inside a ball of radius < pi/2, which truncation provides
// at any practical step size).
std::vector<TestFunctional> default_bl_dictionary(int d, std::int64_t N,
                                                  double dt,
                                                  std::uint64_t seed,
                                                  std::size_t n_refs = 8);

enum class TransportMethod { ExactAssignment, Entropic };

struct TransportOptions {
  double epsilon = 0.01;    // entropic regularization
  int max_iter = 5000;
  double marginal_tol = 1e-9;
};

struct TransportResult {
  double value = 0.0;
  TransportMethod method = TransportMethod::ExactAssignment;
  std::size_t n = 0;
  double epsilon = 0.0;     // 0 for the exact method
  int iterations = 0;       // 0 for the exact method
  double upper_bias = 0.0;  // epsilon * log(n) for the entropic method
};

// Cost matrix C_ij = 1 ^ sup-dist(A_i, B_j), flattened row-major.
std::vector<double> truncated_cost_matrix(const EmpiricalSegmentMeasure& a,
                                          const EmpiricalSegmentMeasure& b);

// Optimal transport with cost 1 ^ ||X1 - X2||. The exact method needs
// equal sample counts and solves the balanced assignment problem; the
// entropic method reports its regularization and upper bias bound.
TransportResult truncated_wasserstein(const EmpiricalSegmentMeasure& a,
                                      const EmpiricalSegmentMeasure& b,
                                      TransportMethod method,
                                      const TransportOptions& opts = {});

struct CauchyRow {
  double t = 0.0;
  TransportResult dist;  // distance to the last measure in the list
};

// Distances d(mu_{t_j}, mu_{t_last}) for every j < last; a shrinking
// table is the observable face of the Cauchy property.
std::vector<CauchyRow> cauchy_diagnostic(
    std::span<const EmpiricalSegmentMeasure> measures, TransportMethod method,
    const TransportOptions& opts = {});

// Deterministic subsample without replacement (seeded partial shuffle);
// returns sorted indices. Used to cap exact-assignment sizes.
std::vector<std::size_t> subsample_indices(std::size_t population,
                                           std::size_t count,
                                           std::uint64_t seed);

}  // namespace sdde
