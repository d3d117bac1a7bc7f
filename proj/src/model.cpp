#include "sddesim/model.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "sddesim/errors.hpp"
#include "sddesim/rng.hpp"

namespace sdde {

void validate(const DissipativityCert& c) {
  if (c.alpha < 2.0) throw UsageError("dissipativity cert: alpha must be >= 2");
  if (c.a1 < 0 || c.a2 < 0 || c.a3 < 0)
    throw UsageError("dissipativity cert: a1,a2,a3 must be >= 0");
  if (!(c.a2 > c.a3)) throw UsageError("dissipativity cert: need a2 > a3");
}

void validate(const ContractionCert& c) {
  if (c.b1 < 0 || c.b2 < 0 || c.b3 < 0 || c.b4 < 0)
    throw UsageError("contraction cert: b1..b4 must be >= 0");
  if (!(c.b1 > c.b2)) throw UsageError("contraction cert: need b1 > b2");
  if (!(c.b3 > c.b4)) throw UsageError("contraction cert: need b3 > b4");
}

namespace {

void check_dim(const SddeModel& model, std::span<const double> x,
               std::span<const double> y, const char* who) {
  if (x.size() != static_cast<std::size_t>(model.d) ||
      y.size() != static_cast<std::size_t>(model.d)) {
    std::ostringstream os;
    os << who << ": state dimension mismatch (model.d=" << model.d
       << ", got |x|=" << x.size() << ", |y|=" << y.size() << ")";
    throw UsageError(os.str());
  }
}

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double a : v) s += a * a;
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

void evaluate_drift(const SddeModel& model, std::span<const double> x,
                    std::span<const double> y, std::span<double> out) {
  check_dim(model, x, y, "evaluate_drift");
  if (out.size() != static_cast<std::size_t>(model.d))
    throw UsageError("evaluate_drift: output size mismatch");
  model.drift(x, y, out);
}

void evaluate_diffusion(const SddeModel& model, std::span<const double> x,
                        std::span<const double> y, std::span<double> out) {
  check_dim(model, x, y, "evaluate_diffusion");
  if (out.size() != static_cast<std::size_t>(model.d * model.m))
    throw UsageError("evaluate_diffusion: output size mismatch");
  model.diffusion(x, y, out);
}

std::vector<double> evaluate_drift(const SddeModel& model,
                                   std::span<const double> x,
                                   std::span<const double> y) {
  std::vector<double> out(model.d);
  evaluate_drift(model, x, y, out);
  return out;
}

std::vector<double> evaluate_diffusion(const SddeModel& model,
                                       std::span<const double> x,
                                       std::span<const double> y) {
  std::vector<double> out(static_cast<std::size_t>(model.d) * model.m);
  evaluate_diffusion(model, x, y, out);
  return out;
}

double frobenius_norm_sq(std::span<const double> mat) {
  double s = 0.0;
  for (double a : mat) s += a * a;
  return s;
}

namespace {

constexpr std::size_t kMaxStoredViolations = 8;

void record_violation(ViolationReport& rep, Violation v) {
  ++rep.n_violations;
  if (rep.examples.size() < kMaxStoredViolations)
    rep.examples.push_back(std::move(v));
}

}  // namespace

ViolationReport check_dissipativity(const SddeModel& model,
                                    const DissipativityCert& cert,
                                    std::uint64_t seed, std::size_t n_points,
                                    SampleBox box) {
  validate(cert);
  if (n_points < 1) throw UsageError("check_dissipativity: n_points must be >= 1");
  rng::UniformStream u({seed, 0, rng::Stream::CertSampler}, box.lo, box.hi);

  ViolationReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  std::vector<double> x(model.d), y(model.d), g(model.d * model.m), f(model.d);
  for (std::size_t i = 0; i < n_points; ++i) {
    u.fill(x);
    u.fill(y);
    evaluate_drift(model, x, y, f);
    evaluate_diffusion(model, x, y, g);
    const double lhs = 2.0 * dot(x, f) + frobenius_norm_sq(g);
    const double rhs = cert.a1 - cert.a2 * std::pow(norm(x), cert.alpha) +
                       cert.a3 * std::pow(norm(y), cert.alpha);
    const double margin = rhs - lhs;
    if (margin < rep.worst_margin) rep.worst_margin = margin;
    if (margin < 0.0) record_violation(rep, {x, y, {}, {}, lhs, rhs});
    ++rep.n_samples;
  }
  return rep;
}

ViolationReport check_contraction(const SddeModel& model,
                                  const ContractionCert& cert,
                                  std::uint64_t seed, std::size_t n_points,
                                  SampleBox box) {
  validate(cert);
  if (n_points < 1) throw UsageError("check_contraction: n_points must be >= 1");
  rng::UniformStream u({seed, 0, rng::Stream::CertSampler}, box.lo, box.hi);

  ViolationReport rep;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  const std::size_t d = model.d, dm = static_cast<std::size_t>(model.d) * model.m;
  std::vector<double> x(d), y(d), xb(d), yb(d), f1(d), f2(d), g1(dm), g2(dm), gd(dm);
  for (std::size_t i = 0; i < n_points; ++i) {
    u.fill(x);
    u.fill(xb);
    u.fill(y);
    u.fill(yb);
    evaluate_drift(model, x, y, f1);
    evaluate_drift(model, xb, yb, f2);
    evaluate_diffusion(model, x, y, g1);
    evaluate_diffusion(model, xb, yb, g2);
    double inner = 0.0, dx2 = 0.0, dy2 = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
      const double ex = x[c] - xb[c];
      inner += ex * (f1[c] - f2[c]);
      dx2 += ex * ex;
      const double ey = y[c] - yb[c];
      dy2 += ey * ey;
    }
    for (std::size_t c = 0; c < dm; ++c) gd[c] = g1[c] - g2[c];
    const double lhs = 2.0 * inner + frobenius_norm_sq(gd);
    const double vx = cert.V ? cert.V(x, xb) : 0.0;
    const double vy = cert.V ? cert.V(y, yb) : 0.0;
    const double rhs = -cert.b1 * dx2 + cert.b2 * dy2 - cert.b3 * vx + cert.b4 * vy;
    const double margin = rhs - lhs;
    if (margin < rep.worst_margin) rep.worst_margin = margin;
    if (margin < 0.0) record_violation(rep, {x, y, xb, yb, lhs, rhs});
    ++rep.n_samples;
  }
  return rep;
}

namespace {

// d = 2 cubic-drift example with delayed quadratic diffusion:
//   dx1 = (1 - x1 - 3 x1^3) dt + y2^2 dW1
//   dx2 = -(x2 + 3 x2^3) dt  + y1^2 dW2
SddeModel make_builtin_example() {
  SddeModel m;
  m.name = "paper-example-5.1";
  m.d = 2;
  m.m = 2;
  m.tau = 1.0;
  m.drift = [](std::span<const double> x, std::span<const double>,
               std::span<double> out) {
    out[0] = 1.0 - x[0] - 3.0 * x[0] * x[0] * x[0];
    out[1] = -(x[1] + 3.0 * x[1] * x[1] * x[1]);
  };
  m.diffusion = [](std::span<const double>, std::span<const double> y,
                   std::span<double> out) {
    out[0] = y[1] * y[1];  // g11
    out[1] = 0.0;          // g12
    out[2] = 0.0;          // g21
    out[3] = y[0] * y[0];  // g22
  };
  // <2x,f> + |g|^2 = 2x1 - 2|x|^2 - 6(x1^4+x2^4) + y1^4 + y2^4
  //               <= 1/2 - 3|x|^4 + |y|^4.
  m.dissipativity = DissipativityCert{4.0, 0.5, 3.0, 1.0};
  ContractionCert c;
  c.b1 = 2.0;
  c.b2 = 0.0;
  c.b3 = 3.0;
  c.b4 = 1.0;
  c.V = [](std::span<const double> u, std::span<const double> v) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double sum = u[i] + v[i], dif = u[i] - v[i];
      s += sum * sum * dif * dif;
    }
    return s;
  };
  m.contraction = std::move(c);
  return m;
}

const std::map<std::string, SddeModel, std::less<>>& registry() {
  static const std::map<std::string, SddeModel, std::less<>> reg = [] {
    std::map<std::string, SddeModel, std::less<>> r;
    SddeModel ex = make_builtin_example();
    r.emplace(ex.name, std::move(ex));
    return r;
  }();
  return reg;
}

}  // namespace

const SddeModel& builtin_model(std::string_view name) {
  const auto& reg = registry();
  auto it = reg.find(name);
  if (it == reg.end()) {
    std::ostringstream os;
    os << "unknown builtin model '" << name << "'; available:";
    for (const auto& [k, v] : reg) os << " " << k;
    throw UsageError(os.str());
  }
  return it->second;
}

std::vector<std::string> builtin_model_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : registry()) names.push_back(k);
  return names;
}

}  // namespace sdde
