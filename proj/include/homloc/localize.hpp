#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <mutex>
#include <optional>
#include <string_view>
#include <thread>
#include <vector>

#include "homloc/common.hpp"
#include "homloc/complex.hpp"
#include "homloc/homology.hpp"
#include "homloc/metric.hpp"

namespace homloc {

enum class Objective { volume, weighted_volume, diameter, radius };

inline std::string_view to_string(Objective o) {
  switch (o) {
    case Objective::volume: return "volume";
    case Objective::weighted_volume: return "weighted_volume";
    case Objective::diameter: return "diameter";
    case Objective::radius: return "radius";
  }
  return "unknown";
}

struct LocalizationResult {
  Chain cycle;
  double objective_value = 0.0;
  std::optional<Vertex> center;
  Objective objective = Objective::radius;
};

struct Ball {
  Vertex center = 0;
  double radius = kInfinity;
  Subcomplex ball;
};

inline void require_nontrivial(const SimplicialComplex& k, const Chain& z0) {
  require_cycle(k, z0);
  if (is_boundary(k, z0)) throw Infeasible("the query cycle is null-homologous (trivial class)");
}

namespace detail {

// Smallest critical radius of f at which the ball carries [z0], considering
// only radii accepted by `below`. Binary search is valid because balls grow
// monotonically with r.
template <typename Below>
std::optional<double> smallest_carrying_radius(const SimplicialComplex& k, const GeodesicField& f, const Chain& z0,
                                               Below below) {
  auto radii = f.critical_radii();
  radii.erase(std::find_if_not(radii.begin(), radii.end(), below), radii.end());
  if (radii.empty()) return std::nullopt;
  auto carries = [&](double r) { return contain_cycle(k, geodesic_ball(k, f, r), z0); };
  if (!carries(radii.back())) return std::nullopt;
  std::size_t lo = 0, hi = radii.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (carries(radii[mid]))
      hi = mid;
    else
      lo = mid + 1;
  }
  return radii[lo];
}

}  // namespace detail

// Smallest geodesic ball carrying [z0] over all centers and radii. Ties go to
// the smallest center. A class no ball carries (support across components)
// gets radius +inf and the whole complex as its ball.
inline Ball bmin(const SimplicialComplex& k, const Metric& m, const Chain& z0, const Limits& limits = {}) {
  require_nontrivial(k, z0);
  m.check_against(k);
  const std::size_t n = k.num_vertices();
  Ball best;
  best.ball = Subcomplex::all(k);

  if (limits.jobs <= 1) {
    for (Vertex p = 0; p < n; ++p) {
      const auto f = geodesic_field(k, m, p);
      const double cut = best.radius;
      auto r = detail::smallest_carrying_radius(k, f, z0, [cut](double x) { return x < cut; });
      if (r) {
        best.center = p;
        best.radius = *r;
        best.ball = geodesic_ball(k, f, *r);
      }
    }
    return best;
  }

  // Parallel map over centers. Pruning keeps radii equal to the running best so
  // the (radius, center) reduction stays identical to the sequential order.
  std::vector<std::optional<double>> per_center(n);
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  double shared_best = kInfinity;
  auto worker = [&] {
    for (;;) {
      const std::size_t p = next.fetch_add(1);
      if (p >= n) return;
      double cut;
      {
        std::lock_guard lock(mu);
        cut = shared_best;
      }
      const auto f = geodesic_field(k, m, static_cast<Vertex>(p));
      auto r = detail::smallest_carrying_radius(k, f, z0, [cut](double x) { return x <= cut; });
      per_center[p] = r;
      if (r) {
        std::lock_guard lock(mu);
        shared_best = std::min(shared_best, *r);
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < std::min(limits.jobs, n); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (Vertex p = 0; p < n; ++p)
    if (per_center[p] && *per_center[p] < best.radius) {
      best.center = p;
      best.radius = *per_center[p];
    }
  if (best.radius < kInfinity) best.ball = geodesic_ball(k, geodesic_field(k, m, best.center), best.radius);
  return best;
}

inline LocalizationResult min_radius_cycle(const SimplicialComplex& k, const Metric& m, const Chain& z0,
                                           const Limits& limits = {}) {
  auto b = bmin(k, m, z0, limits);
  LocalizationResult out;
  out.cycle = representative_in(k, b.ball, z0);
  out.objective_value = b.radius;
  out.center = b.center;
  out.objective = Objective::radius;
  return out;
}

namespace detail {

// argmin of score over the nonempty members of [z0]; ties broken by the
// lexicographically smallest support.
template <typename Score>
std::pair<Chain, double> exhaustive_argmin(const SimplicialComplex& k, const Chain& z0, const Limits& limits,
                                           Score score) {
  ClassEnumerator e(k, z0, limits);
  std::optional<Chain> best;
  double best_value = kInfinity;
  while (auto z = e.next()) {
    if (z->empty()) continue;
    const double v = score(*z);
    if (!best || v < best_value || (v == best_value && lex_less(z->support, best->support))) {
      best = std::move(*z);
      best_value = v;
    }
  }
  check_invariant(best.has_value(), "nontrivial class has no nonempty member");
  return {std::move(*best), best_value};
}

}  // namespace detail

// Exhaustive over the class; the problem is NP-hard in general.
inline LocalizationResult min_volume_cycle_exact(const SimplicialComplex& k, const Chain& z0,
                                                 const WeightFunction* w = nullptr, const Limits& limits = {}) {
  require_nontrivial(k, z0);
  auto [z, v] = detail::exhaustive_argmin(k, z0, limits, [w](const Chain& c) { return vol(c, w); });
  return {std::move(z), v, std::nullopt, w ? Objective::weighted_volume : Objective::volume};
}

// Exhaustive over the class; the problem is NP-hard in general.
inline LocalizationResult min_diameter_cycle_exact(const SimplicialComplex& k, const Metric& m, const Chain& z0,
                                                   const Limits& limits = {}) {
  require_nontrivial(k, z0);
  const DistanceTable dist(k, m);
  auto [z, v] = detail::exhaustive_argmin(k, z0, limits, [&](const Chain& c) { return diam(k, dist, c); });
  return {std::move(z), v, std::nullopt, Objective::diameter};
}

}  // namespace homloc
