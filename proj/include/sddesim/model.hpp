#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sdde {

// Coefficient function: (x, y) -> out, where x is the current state,
// y the delayed state. Drift fills d values, diffusion d*m row-major.
using CoeffFn = std::function<void(std::span<const double> x,
                                   std::span<const double> y,
                                   std::span<double> out)>;

// Nonnegative pair function with V(x,x) = 0.
using PairFn = std::function<double(std::span<const double> x,
                                    std::span<const double> xbar)>;

// Claimed dissipativity constants:
//   <2x, f(x,y)> + |g(x,y)|^2 <= a1 - a2|x|^alpha + a3|y|^alpha.
struct DissipativityCert {
  double alpha = 2.0;
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
};

// Claimed contraction constants:
//   2<x-xb, f(x,y)-f(xb,yb)> + |g(x,y)-g(xb,yb)|^2
//     <= -b1|x-xb|^2 + b2|y-yb|^2 - b3 V(x,xb) + b4 V(y,yb).
struct ContractionCert {
  double b1 = 0.0;
  double b2 = 0.0;
  double b3 = 0.0;
  double b4 = 0.0;
  PairFn V;  // may be empty; treated as V == 0
};

void validate(const DissipativityCert& c);
void validate(const ContractionCert& c);

// An SDDE dx = f(x(t), x(t-tau)) dt + g(x(t), x(t-tau)) dW.
// Coefficients must be total and deterministic; models are immutable
// after construction and safe to share across threads.
struct SddeModel {
  std::string name;
  int d = 1;
  int m = 1;
  double tau = 1.0;
  CoeffFn drift;
  CoeffFn diffusion;
  // Certificates shipped with the model, used by the step-size gate.
  std::optional<DissipativityCert> dissipativity;
  std::optional<ContractionCert> contraction;
};

// Dimension-checked evaluation. |g| below is always the trace
// (Frobenius) norm of the d x m matrix.
void evaluate_drift(const SddeModel& model, std::span<const double> x,
                    std::span<const double> y, std::span<double> out);
void evaluate_diffusion(const SddeModel& model, std::span<const double> x,
                        std::span<const double> y, std::span<double> out);

std::vector<double> evaluate_drift(const SddeModel& model,
                                   std::span<const double> x,
                                   std::span<const double> y);
std::vector<double> evaluate_diffusion(const SddeModel& model,
                                       std::span<const double> x,
                                       std::span<const double> y);

double frobenius_norm_sq(std::span<const double> mat);

// Sampling box for the certificate checkers; each state coordinate is
// drawn uniformly from [lo, hi].
struct SampleBox {
  double lo = -5.0;
  double hi = 5.0;
};

struct Violation {
  std::vector<double> x, y, xbar, ybar;  // xbar/ybar empty for (H2) checks
  double lhs = 0.0;
  double rhs = 0.0;
};

// Result of falsification-by-sampling. Empty violations means the
// certificate is consistent at the sampled points, not proven.
struct ViolationReport {
  std::size_t n_samples = 0;
  std::size_t n_violations = 0;
  double worst_margin = 0.0;  // min over samples of rhs - lhs
  std::vector<Violation> examples;  // first few violating points

  bool consistent() const { return n_violations == 0; }
};

inline constexpr std::size_t kDefaultCertSamples = 100000;

ViolationReport check_dissipativity(const SddeModel& model,
                                    const DissipativityCert& cert,
                                    std::uint64_t seed,
                                    std::size_t n_points = kDefaultCertSamples,
                                    SampleBox box = {});

ViolationReport check_contraction(const SddeModel& model,
                                  const ContractionCert& cert,
                                  std::uint64_t seed,
                                  std::size_t n_points = kDefaultCertSamples,
                                  SampleBox box = {});

// Builtin model registry. Custom models are linked against the library;
// there is no runtime expression parser.
const SddeModel& builtin_model(std::string_view name);
std::vector<std::string> builtin_model_names();

}  // namespace sdde
