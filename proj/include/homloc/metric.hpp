#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "homloc/common.hpp"
#include "homloc/complex.hpp"

namespace homloc {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Positive length on every edge, indexed like the complex's 1-simplices.
class Metric {
 public:
  Metric() = default;

  static Metric uniform(const SimplicialComplex& k, double length = 1.0) {
    return Metric(std::vector<double>(k.count(1), length));
  }

  explicit Metric(std::vector<double> lengths) : lengths_(std::move(lengths)) {
    for (std::size_t e = 0; e < lengths_.size(); ++e) check_length(e, lengths_[e]);
  }

  std::size_t size() const { return lengths_.size(); }
  double length(std::size_t edge) const { return lengths_.at(edge); }
  const std::vector<double>& lengths() const { return lengths_; }

  void set_length(std::size_t edge, double len) {
    check_length(edge, len);
    lengths_.at(edge) = len;
  }

  void check_against(const SimplicialComplex& k) const {
    if (lengths_.size() != k.count(1))
      throw InputError("metric has " + std::to_string(lengths_.size()) + " lengths for " + std::to_string(k.count(1)) + " edges");
  }

  friend bool operator==(const Metric&, const Metric&) = default;

 private:
  static void check_length(std::size_t e, double len) {
    if (!(len > 0.0) || !std::isfinite(len))
      throw InputError("edge " + std::to_string(e) + " has non-positive or non-finite length");
  }
  std::vector<double> lengths_;
};

// Shortest-path distances from one source, extended to simplices by max over vertices.
class GeodesicField {
 public:
  GeodesicField(const SimplicialComplex& k, Vertex source, std::vector<double> vertex_values)
      : source_(source), values_(static_cast<std::size_t>(k.max_dim() + 1)) {
    values_[0] = std::move(vertex_values);
    for (std::size_t d = 1; d < values_.size(); ++d) {
      values_[d].resize(k.count(d));
      for (std::size_t i = 0; i < k.count(d); ++i) {
        double m = 0.0;
        for (auto v : k.simplex(d, i)) m = std::max(m, values_[0][v]);
        values_[d][i] = m;
      }
    }
  }

  Vertex source() const { return source_; }
  double vertex(Vertex v) const { return values_.at(0).at(v); }
  double value(std::size_t d, std::size_t i) const { return values_.at(d).at(i); }
  const std::vector<double>& values(std::size_t d) const { return values_.at(d); }
  std::size_t dims() const { return values_.size(); }

  // Distinct finite simplex values, ascending: the only radii at which the ball changes.
  std::vector<double> critical_radii() const {
    std::vector<double> out;
    for (const auto& vs : values_)
      for (double x : vs)
        if (std::isfinite(x)) out.push_back(x);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  Vertex source_;
  std::vector<std::vector<double>> values_;
};

namespace detail {

struct Adjacency {
  std::vector<std::vector<std::pair<Vertex, double>>> out;
};

inline Adjacency adjacency(const SimplicialComplex& k, const Metric& m) {
  m.check_against(k);
  Adjacency a;
  a.out.resize(k.num_vertices());
  for (std::size_t e = 0; e < k.count(1); ++e) {
    const auto& s = k.simplex(1, e);
    a.out[s[0]].emplace_back(s[1], m.length(e));
    a.out[s[1]].emplace_back(s[0], m.length(e));
  }
  return a;
}

inline std::vector<double> dijkstra(const Adjacency& a, Vertex source) {
  std::vector<double> dist(a.out.size(), kInfinity);
  using Item = std::pair<double, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [du, u] = heap.top();
    heap.pop();
    if (du > dist[u]) continue;
    for (auto [v, w] : a.out[u]) {
      const double nd = du + w;
      if (nd < dist[v]) {
        dist[v] = nd;
        heap.emplace(nd, v);
      }
    }
  }
  return dist;
}

}  // namespace detail

inline GeodesicField geodesic_field(const SimplicialComplex& k, const Metric& m, Vertex p) {
  if (p >= k.num_vertices()) throw InputError("geodesic_field: unknown vertex " + std::to_string(p));
  return GeodesicField(k, p, detail::dijkstra(detail::adjacency(k, m), p));
}

// All-pairs vertex distances in the 1-skeleton; +inf across components.
class DistanceTable {
 public:
  DistanceTable(const SimplicialComplex& k, const Metric& m) : n_(k.num_vertices()), d_(n_ * n_) {
    const auto adj = detail::adjacency(k, m);
    for (Vertex p = 0; p < n_; ++p) {
      auto row = detail::dijkstra(adj, p);
      std::copy(row.begin(), row.end(), d_.begin() + static_cast<std::ptrdiff_t>(p * n_));
    }
  }

  std::size_t size() const { return n_; }
  double operator()(Vertex a, Vertex b) const { return d_.at(a * n_ + b); }

 private:
  std::size_t n_;
  std::vector<double> d_;
};

// B_p^r: every simplex whose field value is <= r (within kTolerance).
inline Subcomplex geodesic_ball(const SimplicialComplex& k, const GeodesicField& f, double r) {
  if (!(r >= 0.0)) throw InputError("geodesic_ball: radius must be >= 0");
  if (f.dims() != static_cast<std::size_t>(k.max_dim() + 1)) throw InputError("geodesic_ball: field does not match complex");
  std::vector<BitVector> members;
  for (std::size_t d = 0; d < f.dims(); ++d) {
    BitVector b(k.count(d));
    const auto& vs = f.values(d);
    for (std::size_t i = 0; i < vs.size(); ++i)
      if (vs[i] <= r + kTolerance) b.set(i);
    members.push_back(std::move(b));
  }
  return make_subcomplex_unchecked(k, std::move(members));
}

// Real weight per simplex, grouped by dimension.
class WeightFunction {
 public:
  WeightFunction() = default;
  explicit WeightFunction(std::vector<std::vector<double>> w) : w_(std::move(w)) {}

  static WeightFunction uniform(const SimplicialComplex& k, double w) {
    std::vector<std::vector<double>> v;
    for (int d = 0; d <= k.max_dim(); ++d) v.emplace_back(k.count(static_cast<std::size_t>(d)), w);
    return WeightFunction(std::move(v));
  }

  std::optional<double> get(std::size_t d, std::size_t i) const {
    if (d >= w_.size() || i >= w_[d].size()) return std::nullopt;
    return w_[d][i];
  }
  void set(std::size_t d, std::size_t i, double w) { w_.at(d).at(i) = w; }

 private:
  std::vector<std::vector<double>> w_;
};

// Simplex count, or weight sum when w is given.
inline double vol(const Chain& z, const WeightFunction* w = nullptr) {
  if (!w) return static_cast<double>(z.size());
  double s = 0.0;
  for (auto i : z.support.support()) {
    auto x = w->get(z.dim, i);
    if (!x) throw InputError("weight function has no value for simplex (" + std::to_string(z.dim) + ", " + std::to_string(i) + ")");
    s += *x;
  }
  return s;
}

// Largest pairwise distance among the chain's vertices, measured in the whole complex.
inline double diam(const SimplicialComplex& k, const DistanceTable& dist, const Chain& z) {
  const auto vs = chain_vertices(k, z);
  if (vs.empty()) throw InputError("diam of an empty chain");
  double best = 0.0;
  for (std::size_t a = 0; a < vs.size(); ++a)
    for (std::size_t b = a + 1; b < vs.size(); ++b) best = std::max(best, dist(vs[a], vs[b]));
  return best;
}

inline double diam(const SimplicialComplex& k, const Metric& m, const Chain& z) { return diam(k, DistanceTable(k, m), z); }

struct Radius {
  double value = kInfinity;
  Vertex center = 0;
};

// min over every vertex p of K of max over chain vertices q of dist(p, q);
// ties go to the smallest vertex index.
inline Radius rad(const SimplicialComplex& k, const DistanceTable& dist, const Chain& z) {
  const auto vs = chain_vertices(k, z);
  if (vs.empty()) throw InputError("rad of an empty chain");
  Radius best;
  for (Vertex p = 0; p < k.num_vertices(); ++p) {
    double worst = 0.0;
    for (auto q : vs) worst = std::max(worst, dist(p, q));
    if (worst < best.value) best = {worst, p};
  }
  return best;
}

inline Radius rad(const SimplicialComplex& k, const Metric& m, const Chain& z) { return rad(k, DistanceTable(k, m), z); }

}  // namespace homloc
