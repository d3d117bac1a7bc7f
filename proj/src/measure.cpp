#include "sddesim/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "sddesim/errors.hpp"
#include "sddesim/kernels.hpp"

namespace sdde {

TestFunctional cos_norm() {
  TestFunctional psi;
  psi.label = "cos-norm";
  psi.lipschitz_bound = 1.0;
  psi.sup_bound = 1.0;
  psi.fn = [](const Segment& s) { return std::cos(segment_sup_norm(s)); };
  return psi;
}

TestFunctional clip_norm(double c) {
  if (!(c > 0.0)) throw UsageError("clip_norm: clip level must be > 0");
  TestFunctional psi;
  std::ostringstream os;
  os << "clip" << c << "-norm";
  psi.label = os.str();
  psi.lipschitz_bound = 1.0;
  psi.sup_bound = c;
  psi.fn = [c](const Segment& s) { return std::min(c, segment_sup_norm(s)); };
  return psi;
}

TestFunctional clip_dist_to(Segment ref, std::string label) {
  TestFunctional psi;
  psi.label = std::move(label);
  psi.lipschitz_bound = 1.0;
  psi.sup_bound = 1.0;
  psi.fn = [ref = std::move(ref)](const Segment& s) {
    return std::min(1.0, segment_sup_dist(s, ref));
  };
  return psi;
}

TestFunctional coordinate_eval(int coord, std::int64_t node_index,
                               std::string label) {
  TestFunctional psi;
  psi.label = std::move(label);
  psi.lipschitz_bound = 1.0;
  psi.sup_bound = 1.0;
  psi.fn = [coord, node_index](const Segment& s) {
    const double v = s.node(node_index)[static_cast<std::size_t>(coord)];
    return std::clamp(v, -1.0, 1.0);
  };
  return psi;
}

TestFunctional scaled(TestFunctional psi, double factor) {
  if (!(factor > 0.0)) throw UsageError("scaled: factor must be > 0");
  TestFunctional out;
  out.label = psi.label;
  out.lipschitz_bound = psi.lipschitz_bound * factor;
  out.sup_bound = psi.sup_bound * factor;
  out.fn = [inner = std::move(psi.fn), factor](const Segment& s) {
    return factor * inner(s);
  };
  return out;
}

SpotCheckReport spot_check_functional(const TestFunctional& psi, int d,
                                      std::int64_t N, double dt,
                                      std::uint64_t seed, std::size_t n_pairs,
                                      double amplitude) {
  rng::UniformStream u({seed, 0, rng::Stream::Dictionary}, -amplitude, amplitude);
  SpotCheckReport rep;
  Segment a, b;
  a.N = b.N = N;
  a.dt = b.dt = dt;
  a.d = b.d = d;
  a.nodes.resize(static_cast<std::size_t>(N + 1) * d);
  b.nodes.resize(a.nodes.size());
  for (std::size_t p = 0; p < n_pairs; ++p) {
    u.fill(a.nodes);
    u.fill(b.nodes);
    const double va = psi(a), vb = psi(b);
    rep.max_abs_value = std::max({rep.max_abs_value, std::fabs(va), std::fabs(vb)});
    if (std::fabs(va) > psi.sup_bound || std::fabs(vb) > psi.sup_bound)
      ++rep.sup_violations;
    const double dist = segment_sup_dist(a, b);
    if (dist > 0.0) {
      const double ratio = std::fabs(va - vb) / dist;
      rep.max_lipschitz_ratio = std::max(rep.max_lipschitz_ratio, ratio);
      // Tiny slack: psi itself is computed through the same norm kernels,
      // so only fp noise can push the ratio over the declared bound.
      if (ratio > psi.lipschitz_bound * (1.0 + 1e-12)) ++rep.lipschitz_violations;
    }
    ++rep.n_pairs;
  }
  return rep;
}

MeanResult mean_and_stderr(std::span<const double> values) {
  if (values.empty()) throw UsageError("mean_and_stderr: empty sample");
  MeanResult r;
  r.n = values.size();
  r.mean = std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(r.n);
  if (r.n > 1) {
    double ss = 0.0;
    for (double v : values) {
      const double e = v - r.mean;
      ss += e * e;
    }
    const double var = ss / static_cast<double>(r.n - 1);
    r.stderr_ = std::sqrt(var / static_cast<double>(r.n));
  }
  return r;
}

std::vector<double> functional_values(const EmpiricalSegmentMeasure& measure,
                                      const TestFunctional& psi) {
  if (measure.samples.empty())
    throw UsageError("functional_values: empty measure");
  std::vector<double> out;
  out.reserve(measure.samples.size());
  for (const Segment& s : measure.samples) out.push_back(psi(s));
  return out;
}

MeanResult functional_mean(const EmpiricalSegmentMeasure& measure,
                           const TestFunctional& psi) {
  const auto vals = functional_values(measure, psi);
  return mean_and_stderr(vals);
}

double Ecdf::at(double v) const {
  const auto it = std::upper_bound(sorted_values.begin(), sorted_values.end(), v);
  return static_cast<double>(it - sorted_values.begin()) /
         static_cast<double>(sorted_values.size());
}

Ecdf empirical_cdf(std::span<const double> values) {
  if (values.empty()) throw UsageError("empirical_cdf: empty sample");
  Ecdf e;
  e.sorted_values.assign(values.begin(), values.end());
  std::sort(e.sorted_values.begin(), e.sorted_values.end());
  return e;
}

Ecdf empirical_cdf(const EmpiricalSegmentMeasure& measure,
                   const TestFunctional& psi) {
  const auto vals = functional_values(measure, psi);
  return empirical_cdf(vals);
}

double ks_statistic(const Ecdf& a, const Ecdf& b) {
  if (a.size() == 0 || b.size() == 0)
    throw UsageError("ks_statistic: empty sample");
  const auto& xs = a.sorted_values;
  const auto& ys = b.sorted_values;
  const double na = static_cast<double>(xs.size());
  const double nb = static_cast<double>(ys.size());
  std::size_t i = 0, j = 0;
  double best = 0.0;
  while (i < xs.size() || j < ys.size()) {
    double v;
    if (j >= ys.size() || (i < xs.size() && xs[i] <= ys[j])) v = xs[i];
    else v = ys[j];
    while (i < xs.size() && xs[i] <= v) ++i;
    while (j < ys.size() && ys[j] <= v) ++j;
    best = std::max(best, std::fabs(static_cast<double>(i) / na -
                                    static_cast<double>(j) / nb));
  }
  return best;
}

double bl_lower_bound(const EmpiricalSegmentMeasure& a,
                      const EmpiricalSegmentMeasure& b,
                      std::span<const TestFunctional> dictionary) {
  if (dictionary.empty()) throw UsageError("bl_lower_bound: empty dictionary");
  double best = 0.0;
  for (const auto& psi : dictionary) {
    if (!psi.in_xi())
      throw UsageError("bl_lower_bound: functional '" + psi.label +
                       "' is not in the test class (needs Lipschitz and sup "
                       "bounds <= 1)");
    const double da =
        std::fabs(functional_mean(a, psi).mean - functional_mean(b, psi).mean);
    best = std::max(best, da);
  }
  return best;
}

std::vector<TestFunctional> default_bl_dictionary(int d, std::int64_t N,
                                                  double dt,
                                                  std::uint64_t seed,
                                                  std::size_t n_refs) {
  std::vector<TestFunctional> dict;
  dict.push_back(cos_norm());
  dict.push_back(clip_norm(1.0));
  rng::UniformStream u({seed, 0, rng::Stream::Dictionary}, -1.0, 1.0);
  for (std::size_t r = 0; r < n_refs; ++r) {
    Segment ref;
    ref.N = N;
    ref.dt = dt;
    ref.d = d;
    std::vector<double> c(static_cast<std::size_t>(d));
    u.fill(c);
    ref.nodes.resize(static_cast<std::size_t>(N + 1) * d);
    for (std::int64_t j = 0; j <= N; ++j)
      std::copy(c.begin(), c.end(), ref.nodes.begin() + j * d);
    dict.push_back(clip_dist_to(std::move(ref), "clip-dist-ref" + std::to_string(r)));
  }
  for (int c = 0; c < d; ++c)
    for (std::int64_t j : {std::int64_t{0}, N / 2, N}) {
      std::ostringstream os;
      os << "half-coord" << c << "@node" << j;
      // Halved so the oscillation stays <= 1 (see header).
      dict.push_back(scaled(coordinate_eval(c, j, os.str()), 0.5));
    }
  return dict;
}

std::vector<double> truncated_cost_matrix(const EmpiricalSegmentMeasure& a,
                                          const EmpiricalSegmentMeasure& b) {
  if (a.samples.empty() || b.samples.empty())
    throw UsageError("truncated_cost_matrix: empty measure");
  const std::size_t na = a.size(), nb = b.size();
  const Segment& probe = a.samples.front();
  const std::size_t n_nodes = static_cast<std::size_t>(probe.N) + 1;
  const std::size_t d = static_cast<std::size_t>(probe.d);
  for (const auto& s : a.samples)
    if (s.N != probe.N || s.d != probe.d || s.dt != probe.dt)
      throw UsageError("truncated_cost_matrix: mixed grids in measure A");
  for (const auto& s : b.samples)
    if (s.N != probe.N || s.d != probe.d || s.dt != probe.dt)
      throw UsageError("truncated_cost_matrix: mixed grids in measure B");
  std::vector<double> cost(na * nb);
  for (std::size_t i = 0; i < na; ++i) {
    const double* ai = a.samples[i].nodes.data();
    for (std::size_t j = 0; j < nb; ++j) {
      const double d2 =
          kernels::max_dist_sq(ai, b.samples[j].nodes.data(), n_nodes, d);
      cost[i * nb + j] = std::min(1.0, std::sqrt(d2));
    }
  }
  return cost;
}

TransportResult truncated_wasserstein(const EmpiricalSegmentMeasure& a,
                                      const EmpiricalSegmentMeasure& b,
                                      TransportMethod method,
                                      const TransportOptions& opts) {
  TransportResult res;
  res.method = method;
  if (method == TransportMethod::ExactAssignment) {
    if (a.size() != b.size())
      throw UsageError(
          "truncated_wasserstein: exact assignment needs equal sample counts (" +
          std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
    const auto cost = truncated_cost_matrix(a, b);
    const auto assignment = solve_assignment(cost, a.size());
    res.value = assignment_total_cost(cost, a.size(), assignment) /
                static_cast<double>(a.size());
    res.n = a.size();
  } else {
    const auto cost = truncated_cost_matrix(a, b);
    SinkhornOptions so;
    so.epsilon = opts.epsilon;
    so.max_iter = opts.max_iter;
    so.marginal_tol = opts.marginal_tol;
    const auto sk = sinkhorn_uniform(cost, a.size(), b.size(), so);
    res.value = sk.value;
    res.iterations = sk.iterations;
    res.epsilon = opts.epsilon;
    res.n = std::max(a.size(), b.size());
    res.upper_bias = opts.epsilon * std::log(static_cast<double>(res.n));
  }
  return res;
}

std::vector<CauchyRow> cauchy_diagnostic(
    std::span<const EmpiricalSegmentMeasure> measures, TransportMethod method,
    const TransportOptions& opts) {
  if (measures.size() < 2)
    throw UsageError("cauchy_diagnostic: need at least two time points");
  const auto& last = measures.back();
  std::vector<CauchyRow> rows;
  for (std::size_t j = 0; j + 1 < measures.size(); ++j) {
    CauchyRow row;
    row.t = measures[j].time_label;
    row.dist = truncated_wasserstein(measures[j], last, method, opts);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::size_t> subsample_indices(std::size_t population,
                                           std::size_t count,
                                           std::uint64_t seed) {
  if (count > population)
    throw UsageError("subsample_indices: count exceeds population");
  std::vector<std::size_t> idx(population);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  rng::Philox4x64 gen({seed, 0, rng::Stream::Subsample});
  std::uint64_t block = 0;
  std::array<std::uint64_t, 4> raw{};
  int pos = 4;
  auto next_u64 = [&]() {
    if (pos == 4) {
      raw = gen.block(block++);
      pos = 0;
    }
    return raw[static_cast<std::size_t>(pos++)];
  };
  // Partial Fisher-Yates: the first `count` slots become the sample.
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t span = population - i;
    const std::size_t j = i + static_cast<std::size_t>(next_u64() % span);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace sdde
