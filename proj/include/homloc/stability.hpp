#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "homloc/basis.hpp"
#include "homloc/common.hpp"
#include "homloc/complex.hpp"
#include "homloc/metric.hpp"

namespace homloc {

enum class Scheme { uniform_noise, single_edge, scale };

inline std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::uniform_noise: return "uniform_noise";
    case Scheme::single_edge: return "single_edge";
    case Scheme::scale: return "scale";
  }
  return "unknown";
}

inline Scheme parse_scheme(std::string_view s) {
  if (s == "uniform_noise") return Scheme::uniform_noise;
  if (s == "single_edge") return Scheme::single_edge;
  if (s == "scale") return Scheme::scale;
  throw InputError("unknown perturbation scheme: " + std::string(s));
}

// uniform_noise: every length += U[-magnitude, magnitude].
// single_edge:   one edge += magnitude (explicit edge, or drawn from the seed).
// scale:         every length *= 1 + magnitude.
struct Perturbation {
  Scheme scheme = Scheme::uniform_noise;
  double magnitude = 0.0;
  std::uint64_t seed = 0;
  std::optional<std::size_t> edge;
};

inline Metric perturb(const Metric& m, const Perturbation& p) {
  std::vector<double> out = m.lengths();
  std::mt19937_64 rng(p.seed);
  switch (p.scheme) {
    case Scheme::uniform_noise: {
      std::uniform_real_distribution<double> noise(-p.magnitude, p.magnitude);
      for (auto& l : out) l += p.magnitude == 0.0 ? 0.0 : noise(rng);
      break;
    }
    case Scheme::single_edge: {
      if (out.empty()) throw InputError("single_edge perturbation on a metric with no edges");
      std::size_t e = p.edge ? *p.edge : std::uniform_int_distribution<std::size_t>(0, out.size() - 1)(rng);
      if (e >= out.size()) throw InputError("single_edge perturbation: edge index out of range");
      out[e] += p.magnitude;
      break;
    }
    case Scheme::scale:
      for (auto& l : out) l *= 1.0 + p.magnitude;
      break;
  }
  for (std::size_t e = 0; e < out.size(); ++e)
    if (!(out[e] > 0.0))
      throw InputError("perturbation makes edge " + std::to_string(e) + " length non-positive; lower the magnitude");
  return Metric(std::move(out));
}

// max over vertex pairs of the change in geodesic distance.
inline double epsilon(const SimplicialComplex& k, const Metric& m1, const Metric& m2) {
  const DistanceTable a(k, m1), b(k, m2);
  double eps = 0.0;
  for (Vertex p = 0; p < a.size(); ++p)
    for (Vertex q = 0; q < a.size(); ++q) {
      const double x = a(p, q), y = b(p, q);
      if (x == y) continue;  // includes inf == inf
      eps = std::max(eps, std::abs(x - y));
    }
  return eps;
}

struct ClassStability {
  std::uint64_t coefficients = 0;
  double size1 = 0.0;
  double size2 = 0.0;
  double delta = 0.0;
  bool pass = true;
};

struct FiltrationStability {
  FiltrationDistance distance;
  bool pass = true;
  std::vector<std::uint64_t> basis1;  // coefficient masks of the chosen classes
  std::vector<std::uint64_t> basis2;
  std::vector<double> sizes1;
  std::vector<double> sizes2;
  bool basis_changed = false;
};

struct StabilityReport {
  double epsilon = 0.0;
  std::vector<ClassStability> per_class;
  std::optional<FiltrationStability> filtration;

  std::size_t class_violations() const {
    return static_cast<std::size_t>(std::count_if(per_class.begin(), per_class.end(), [](const auto& c) { return !c.pass; }));
  }
  bool all_pass() const { return class_violations() == 0 && (!filtration || filtration->pass); }
};

namespace detail {

struct TablePair {
  ClassTable t1, t2;
};

// Both metrics share one reference basis, so the same mask names the same class.
inline TablePair tables(const SimplicialComplex& k, const Metric& m1, const Metric& m2, std::size_t d, const Limits& limits) {
  const auto ref = reference_basis_checked(k, d, limits);
  return {class_table(k, m1, d, ref, limits), class_table(k, m2, d, ref, limits)};
}

inline std::vector<ClassStability> compare(const TablePair& t, double eps) {
  std::vector<ClassStability> out;
  for (std::size_t i = 0; i < t.t1.classes.size(); ++i) {
    ClassStability c;
    c.coefficients = t.t1.classes[i].coefficients;
    c.size1 = t.t1.classes[i].size.value;
    c.size2 = t.t2.classes[i].size.value;
    c.delta = c.size1 == c.size2 ? 0.0 : std::abs(c.size1 - c.size2);
    c.pass = c.delta <= eps + kTolerance;
    out.push_back(c);
  }
  return out;
}

}  // namespace detail

inline StabilityReport verify_class_stability(const SimplicialComplex& k, const Metric& m1, const Metric& m2, std::size_t d,
                                              const Limits& limits = {}) {
  StabilityReport r;
  r.epsilon = epsilon(k, m1, m2);
  r.per_class = detail::compare(detail::tables(k, m1, m2, d, limits), r.epsilon);
  return r;
}

inline StabilityReport verify_filtration_stability(const SimplicialComplex& k, const Metric& m1, const Metric& m2,
                                                   std::size_t d, const Limits& limits = {}) {
  StabilityReport r;
  r.epsilon = epsilon(k, m1, m2);
  const auto t = detail::tables(k, m1, m2, d, limits);
  r.per_class = detail::compare(t, r.epsilon);
  const auto x1 = filtration(greedy_basis(k, t.t1));
  const auto x2 = filtration(greedy_basis(k, t.t2));
  FiltrationStability f;
  f.distance = filtration_distance(x1, x2);
  f.pass = f.distance.value <= r.epsilon + kTolerance;
  for (const auto& c : x1.basis.classes) f.basis1.push_back(c.coefficients);
  for (const auto& c : x2.basis.classes) f.basis2.push_back(c.coefficients);
  f.sizes1 = x1.sizes;
  f.sizes2 = x2.sizes;
  f.basis_changed = f.basis1 != f.basis2;
  r.filtration = std::move(f);
  return r;
}

struct SweepConfig {
  Scheme scheme = Scheme::uniform_noise;
  double magnitude = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;  // trial t uses seed + t
};

struct TrialResult {
  std::uint64_t seed = 0;
  StabilityReport report;
};

struct SweepResult {
  std::vector<TrialResult> trials;

  std::size_t class_violations() const {
    std::size_t n = 0;
    for (const auto& t : trials) n += t.report.class_violations();
    return n;
  }
  std::size_t filtration_violations() const {
    std::size_t n = 0;
    for (const auto& t : trials) n += t.report.filtration && !t.report.filtration->pass;
    return n;
  }
  std::size_t basis_changes() const {
    std::size_t n = 0;
    for (const auto& t : trials) n += t.report.filtration && t.report.filtration->basis_changed;
    return n;
  }
};

// Perturbs m once per trial and checks both stability bounds. Trials are
// independent and may run on limits.jobs threads; results keep trial order.
inline SweepResult stability_sweep(const SimplicialComplex& k, const Metric& m, std::size_t d, const SweepConfig& cfg,
                                   const Limits& limits = {}) {
  SweepResult out;
  out.trials.resize(cfg.trials);
  Limits inner = limits;
  inner.jobs = 1;
  auto run = [&](std::size_t t) {
    const std::uint64_t seed = cfg.seed + t;
    const Metric m2 = perturb(m, {cfg.scheme, cfg.magnitude, seed, std::nullopt});
    out.trials[t] = {seed, verify_filtration_stability(k, m, m2, d, inner)};
  };
  if (limits.jobs <= 1 || cfg.trials <= 1) {
    for (std::size_t t = 0; t < cfg.trials; ++t) run(t);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(limits.jobs, cfg.trials); ++w)
    pool.emplace_back([&] {
      for (std::size_t t; (t = next.fetch_add(1)) < cfg.trials;) {
        try {
          run(t);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace homloc
