#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sddesim/model.hpp"

namespace sdde {

// Growth function phi: [1,inf) -> R+, strictly increasing, with its
// closed-form inverse on [phi(1), inf). Both are user-supplied; a
// startup self-check probes the round trip on a log-spaced set.
struct TruncationRule {
  std::function<double(double)> phi;
  std::function<double(double)> phi_inv;
  double nu = 0.01;  // exponent in (0, 1/3]
  double K = 1.0;    // >= 1 v phi(1)
  std::string label;
};

// phi(R) = coeff * R^power with the closed-form inverse.
TruncationRule make_power_rule(double coeff, double power, double nu, double K);

// Round-trip probes (relative tol 1e-10 on R in [1,1e6]), strict
// monotonicity on the probe set, nu in (0,1/3], K >= 1 v phi(1).
void validate_rule(const TruncationRule& rule);

// K = 1 v phi(1) v |f(0,0)| v |g(0,0)|^2 (trace norm squared).
double compute_K(const SddeModel& model,
                 const std::function<double(double)>& phi);

// phi_inv(K * dt^-nu). ConfigError naming dt when the argument falls
// below phi(1).
double truncation_radius(const TruncationRule& rule, double dt);

// Radial clip onto the ball of the given radius; x/|x| = 0 at x = 0.
void truncate_in_place(std::span<double> x, double radius);
std::vector<double> truncate(std::span<const double> x, double radius);

// Step-size admissibility. threshold_a/b are the gate left-hand sides
// a2 - 6K^2 dt^(1-2nu) and b1 - 4K^2 dt^(1-2nu); margins subtract the
// right-hand sides a3 and b2. ok requires both margins > 0. dt_max is
// the closed-form largest admissible step, capped at 1.
struct AdmissibilityReport {
  bool ok = false;
  double threshold_a = 0.0;
  double threshold_b = 0.0;
  double margin_a = 0.0;
  double margin_b = 0.0;
  double dt_max = 0.0;
  double dt = 0.0;
  double K = 0.0;
  double nu = 0.0;
};

AdmissibilityReport admissible_dt(const DissipativityCert& dcert,
                                  const ContractionCert& ccert, double K,
                                  double nu, double dt);

}  // namespace sdde
