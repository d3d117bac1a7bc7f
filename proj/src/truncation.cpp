#include "sddesim/truncation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sddesim/errors.hpp"

namespace sdde {

TruncationRule make_power_rule(double coeff, double power, double nu, double K) {
  if (!(coeff > 0.0) || !(power > 0.0))
    throw UsageError("make_power_rule: coeff and power must be > 0");
  TruncationRule rule;
  rule.phi = [coeff, power](double R) { return coeff * std::pow(R, power); };
  rule.phi_inv = [coeff, power](double z) { return std::pow(z / coeff, 1.0 / power); };
  rule.nu = nu;
  rule.K = K;
  std::ostringstream os;
  os << coeff << "*R^" << power;
  rule.label = os.str();
  validate_rule(rule);
  return rule;
}

void validate_rule(const TruncationRule& rule) {
  if (!rule.phi || !rule.phi_inv)
    throw UsageError("truncation rule: phi and phi_inv must both be set");
  if (!(rule.nu > 0.0) || rule.nu > 1.0 / 3.0)
    throw UsageError("truncation rule: nu must lie in (0, 1/3]");
  const double phi1 = rule.phi(1.0);
  if (!(rule.K >= 1.0) || !(rule.K >= phi1))
    throw UsageError("truncation rule: K must be >= 1 v phi(1)");
  // Log-spaced probes R in [1, 1e6]: round trip and strict monotonicity.
  double prev = -1.0;
  for (int i = 0; i <= 60; ++i) {
    const double R = std::pow(10.0, 6.0 * i / 60.0);
    const double z = rule.phi(R);
    if (!(z > prev))
      throw UsageError("truncation rule: phi is not strictly increasing near R=" +
                       std::to_string(R));
    prev = z;
    const double back = rule.phi_inv(z);
    if (std::fabs(back - R) > 1e-10 * std::max(1.0, std::fabs(R))) {
      std::ostringstream os;
      os << "truncation rule: phi_inv(phi(R)) round trip failed at R=" << R
         << " (got " << back << ")";
      throw UsageError(os.str());
    }
  }
}

double compute_K(const SddeModel& model,
                 const std::function<double(double)>& phi) {
  std::vector<double> zero(model.d, 0.0);
  std::vector<double> f(model.d), g(static_cast<std::size_t>(model.d) * model.m);
  evaluate_drift(model, zero, zero, f);
  evaluate_diffusion(model, zero, zero, g);
  double fn = 0.0;
  for (double v : f) fn += v * v;
  return std::max({1.0, phi(1.0), std::sqrt(fn), frobenius_norm_sq(g)});
}

double truncation_radius(const TruncationRule& rule, double dt) {
  if (!(dt > 0.0 && dt < 1.0))
    throw UsageError("truncation_radius: dt must lie in (0,1)");
  const double arg = rule.K * std::pow(dt, -rule.nu);
  const double phi1 = rule.phi(1.0);
  if (arg < phi1) {
    std::ostringstream os;
    os << "truncation_radius: K*dt^-nu = " << arg << " falls below phi(1) = "
       << phi1 << " at dt = " << dt << "; phi_inv is undefined there";
    throw ConfigError(os.str());
  }
  return rule.phi_inv(arg);
}

void truncate_in_place(std::span<double> x, double radius) {
  if (!(radius > 0.0)) throw UsageError("truncate: radius must be > 0");
  auto norm = [&x]() {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
  };
  double n = norm();
  if (n <= radius || n == 0.0) return;
  // Rescale until the recomputed norm is <= radius, so the output norm
  // bound is exact and re-truncation is the identity. One extra pass
  // suffices in practice; the loop guards pathological rounding.
  for (int pass = 0; pass < 8 && n > radius; ++pass) {
    const double scale = radius / n;
    for (double& v : x) v *= scale;
    n = norm();
  }
  while (n > radius) {  // scale rounded to 1; shave ulps instead
    for (double& v : x) v = std::nextafter(v, 0.0);
    n = norm();
  }
}

std::vector<double> truncate(std::span<const double> x, double radius) {
  std::vector<double> out(x.begin(), x.end());
  truncate_in_place(out, radius);
  return out;
}

AdmissibilityReport admissible_dt(const DissipativityCert& dcert,
                                  const ContractionCert& ccert, double K,
                                  double nu, double dt) {
  validate(dcert);
  validate(ccert);
  if (!(dt > 0.0 && dt < 1.0))
    throw UsageError("admissible_dt: dt must lie in (0,1)");
  const double e = 1.0 - 2.0 * nu;
  const double shrink = std::pow(dt, e);
  AdmissibilityReport r;
  r.dt = dt;
  r.K = K;
  r.nu = nu;
  r.threshold_a = dcert.a2 - 6.0 * K * K * shrink;
  r.threshold_b = ccert.b1 - 4.0 * K * K * shrink;
  r.margin_a = r.threshold_a - dcert.a3;
  r.margin_b = r.threshold_b - ccert.b2;
  r.ok = r.margin_a > 0.0 && r.margin_b > 0.0;
  const double root_a = std::pow((dcert.a2 - dcert.a3) / (6.0 * K * K), 1.0 / e);
  const double root_b = std::pow((ccert.b1 - ccert.b2) / (4.0 * K * K), 1.0 / e);
  r.dt_max = std::min(std::min(root_a, root_b), 1.0);
  return r;
}

}  // namespace sdde
