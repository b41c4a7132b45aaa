#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "homloc/common.hpp"
#include "homloc/gf2.hpp"

namespace homloc {

using gf2::BitMatrix;
using gf2::BitVector;

// External vertex label as it appears in input files.
using VertexId = std::int64_t;
// Dense internal vertex index, 0..n_0-1, ordered like the labels.
using Vertex = std::uint32_t;

struct Simplex {
  std::vector<VertexId> vertices;

  Simplex() = default;
  Simplex(std::initializer_list<VertexId> vs) : vertices(vs) {}
  explicit Simplex(std::vector<VertexId> vs) : vertices(std::move(vs)) {}

  std::size_t dim() const { return vertices.size() - 1; }
};

// A d-chain over GF(2): one bit per d-simplex.
struct Chain {
  std::size_t dim = 0;
  BitVector support;

  Chain() = default;
  Chain(std::size_t d, BitVector s) : dim(d), support(std::move(s)) {}

  bool empty() const { return support.none(); }
  std::size_t size() const { return support.count(); }

  Chain& operator+=(const Chain& o) {
    if (o.dim != dim) throw InputError("adding chains of different dimension");
    support ^= o.support;
    return *this;
  }
  friend Chain operator+(Chain a, const Chain& b) { return a += b; }
  friend bool operator==(const Chain& a, const Chain& b) { return a.dim == b.dim && a.support == b.support; }
};

// Face-closed set of simplices with stable per-dimension indices. Simplices in
// each dimension are ordered lexicographically by their (dense) vertex lists.
class SimplicialComplex {
 public:
  SimplicialComplex() = default;

  static SimplicialComplex build(std::span<const Simplex> input) {
    std::vector<std::vector<VertexId>> sorted;
    sorted.reserve(input.size());
    std::set<VertexId> labels;
    for (const auto& s : input) {
      if (s.vertices.empty()) throw InputError("simplex with no vertices");
      auto v = s.vertices;
      std::sort(v.begin(), v.end());
      if (std::adjacent_find(v.begin(), v.end()) != v.end()) throw InputError("simplex has duplicate vertex ids");
      if (v.front() < 0) throw InputError("vertex ids must be nonnegative");
      if (v.size() > 16) throw InputError("simplex dimension above 15 is not supported");
      labels.insert(v.begin(), v.end());
      sorted.push_back(std::move(v));
    }

    SimplicialComplex k;
    k.labels_.assign(labels.begin(), labels.end());
    std::vector<std::set<std::vector<Vertex>>> by_dim;
    for (const auto& v : sorted) {
      std::vector<Vertex> dense(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) dense[i] = *k.vertex_of(v[i]);
      if (by_dim.size() < dense.size()) by_dim.resize(dense.size());
      const std::uint32_t n = static_cast<std::uint32_t>(dense.size());
      for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
        std::vector<Vertex> face;
        for (std::uint32_t i = 0; i < n; ++i)
          if (mask & (1U << i)) face.push_back(dense[i]);
        by_dim[face.size() - 1].insert(std::move(face));
      }
    }
    k.simplices_.resize(by_dim.size());
    k.index_.resize(by_dim.size());
    for (std::size_t d = 0; d < by_dim.size(); ++d) {
      k.simplices_[d].assign(by_dim[d].begin(), by_dim[d].end());
      for (std::size_t i = 0; i < k.simplices_[d].size(); ++i) k.index_[d].emplace(k.simplices_[d][i], i);
    }
    // boundaries_[max_dim + 1] is the 0-column map out of the top dimension.
    k.boundaries_.resize(by_dim.size() + 1);
    for (std::size_t d = 1; d < by_dim.size(); ++d) {
      BitMatrix m(k.count(d - 1), k.count(d));
      for (std::size_t j = 0; j < k.count(d); ++j)
        for (auto f : k.facets(d, j)) m.set(f, j);
      k.boundaries_[d] = std::move(m);
    }
    k.boundaries_[by_dim.size()] = BitMatrix(by_dim.empty() ? 0 : k.count(by_dim.size() - 1), 0);
    return k;
  }

  static SimplicialComplex build(std::initializer_list<Simplex> input) {
    return build(std::span<const Simplex>(input.begin(), input.size()));
  }

  bool empty() const { return simplices_.empty(); }
  // -1 for the empty complex.
  int max_dim() const { return static_cast<int>(simplices_.size()) - 1; }

  std::size_t count(std::size_t d) const { return d < simplices_.size() ? simplices_[d].size() : 0; }
  std::size_t num_vertices() const { return count(0); }

  const std::vector<Vertex>& simplex(std::size_t d, std::size_t i) const {
    if (d >= simplices_.size() || i >= simplices_[d].size())
      throw InputError("simplex (" + std::to_string(d) + ", " + std::to_string(i) + ") out of range");
    return simplices_[d][i];
  }

  std::optional<std::size_t> index_of(std::size_t d, const std::vector<Vertex>& verts) const {
    if (d >= index_.size()) return std::nullopt;
    auto it = index_[d].find(verts);
    if (it == index_[d].end()) return std::nullopt;
    return it->second;
  }

  // Index of the simplex spanned by external labels, in any order.
  std::optional<std::size_t> index_of_labels(std::vector<VertexId> labels) const {
    if (labels.empty()) return std::nullopt;
    std::sort(labels.begin(), labels.end());
    std::vector<Vertex> dense;
    for (auto l : labels) {
      auto v = vertex_of(l);
      if (!v) return std::nullopt;
      dense.push_back(*v);
    }
    return index_of(labels.size() - 1, dense);
  }

  std::optional<Vertex> vertex_of(VertexId label) const {
    auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
    if (it == labels_.end() || *it != label) return std::nullopt;
    return static_cast<Vertex>(it - labels_.begin());
  }
  VertexId label(Vertex v) const {
    if (v >= labels_.size()) throw InputError("vertex index out of range");
    return labels_[v];
  }
  const std::vector<VertexId>& labels() const { return labels_; }

  // Indices of the (d-1)-faces of simplex (d, i).
  std::vector<std::size_t> facets(std::size_t d, std::size_t i) const {
    if (d == 0) return {};
    const auto& s = simplex(d, i);
    std::vector<std::size_t> out;
    out.reserve(s.size());
    for (std::size_t drop = 0; drop < s.size(); ++drop) {
      std::vector<Vertex> f;
      f.reserve(s.size() - 1);
      for (std::size_t t = 0; t < s.size(); ++t)
        if (t != drop) f.push_back(s[t]);
      out.push_back(index_[d - 1].at(f));
    }
    return out;
  }

  // n_{d-1} x n_d incidence matrix of the boundary map, 1 <= d <= max_dim.
  const BitMatrix& boundary_matrix(std::size_t d) const {
    if (d < 1 || static_cast<int>(d) > max_dim())
      throw InputError("boundary_matrix: d=" + std::to_string(d) + " outside [1, " + std::to_string(max_dim()) + "]");
    return boundaries_[d];
  }

  // The map C_{d+1} -> C_d, including the 0-column matrix at the top dimension.
  const BitMatrix& boundary_into(std::size_t d) const {
    if (static_cast<int>(d) > max_dim()) throw InputError("boundary_into: dimension out of range");
    return boundaries_[d + 1];
  }

  friend bool operator==(const SimplicialComplex& a, const SimplicialComplex& b) {
    return a.labels_ == b.labels_ && a.simplices_ == b.simplices_;
  }

  // All simplices as external-label lists, dimension by dimension.
  std::vector<Simplex> all_simplices() const {
    std::vector<Simplex> out;
    for (std::size_t d = 0; d < simplices_.size(); ++d)
      for (const auto& s : simplices_[d]) {
        Simplex x;
        for (auto v : s) x.vertices.push_back(labels_[v]);
        out.push_back(std::move(x));
      }
    return out;
  }

 private:
  std::vector<VertexId> labels_;
  std::vector<std::vector<std::vector<Vertex>>> simplices_;
  std::vector<std::map<std::vector<Vertex>, std::size_t>> index_;
  std::vector<BitMatrix> boundaries_;
};

inline Chain zero_chain(const SimplicialComplex& k, std::size_t d) { return Chain(d, BitVector(k.count(d))); }

inline Chain chain_from_indices(const SimplicialComplex& k, std::size_t d, std::span<const std::size_t> idx) {
  if (static_cast<int>(d) > k.max_dim()) throw InputError("chain dimension exceeds complex dimension");
  BitVector v(k.count(d));
  for (auto i : idx) {
    if (i >= k.count(d)) throw InputError("chain index " + std::to_string(i) + " out of range for dimension " + std::to_string(d));
    v.flip(i);
  }
  return Chain(d, std::move(v));
}

inline Chain chain_from_indices(const SimplicialComplex& k, std::size_t d, std::initializer_list<std::size_t> idx) {
  return chain_from_indices(k, d, std::span<const std::size_t>(idx.begin(), idx.size()));
}

// Chain whose support is the listed simplices, given by external labels.
inline Chain chain_from_simplices(const SimplicialComplex& k, std::span<const Simplex> simplices) {
  if (simplices.empty()) throw InputError("chain_from_simplices needs at least one simplex");
  const std::size_t d = simplices.front().dim();
  std::vector<std::size_t> idx;
  for (const auto& s : simplices) {
    if (s.dim() != d) throw InputError("chain simplices have mixed dimensions");
    auto i = k.index_of_labels(s.vertices);
    if (!i) throw InputError("chain references a simplex not in the complex");
    idx.push_back(*i);
  }
  return chain_from_indices(k, d, idx);
}

inline Chain chain_from_simplices(const SimplicialComplex& k, std::initializer_list<Simplex> simplices) {
  return chain_from_simplices(k, std::span<const Simplex>(simplices.begin(), simplices.size()));
}

inline void check_chain(const SimplicialComplex& k, const Chain& z) {
  if (static_cast<int>(z.dim) > k.max_dim() || z.support.size() != k.count(z.dim))
    throw InputError("chain does not match the complex (dim " + std::to_string(z.dim) + ")");
}

inline Chain boundary(const SimplicialComplex& k, const Chain& z) {
  if (z.dim == 0) throw InputError("boundary of a 0-chain is undefined");
  check_chain(k, z);
  return Chain(z.dim - 1, k.boundary_matrix(z.dim).multiply(z.support));
}

// 0-chains are cycles (unreduced homology).
inline bool is_cycle(const SimplicialComplex& k, const Chain& z) {
  check_chain(k, z);
  if (z.dim == 0) return true;
  return boundary(k, z).empty();
}

// Dense vertex indices touched by a chain's support, ascending.
inline std::vector<Vertex> chain_vertices(const SimplicialComplex& k, const Chain& z) {
  check_chain(k, z);
  std::vector<bool> seen(k.num_vertices(), false);
  for (auto i : z.support.support())
    for (auto v : k.simplex(z.dim, i)) seen[v] = true;
  std::vector<Vertex> out;
  for (Vertex v = 0; v < seen.size(); ++v)
    if (seen[v]) out.push_back(v);
  return out;
}

// Face-closed subset of a parent complex, stored as per-dimension membership bits.
class Subcomplex {
 public:
  Subcomplex() = default;

  static Subcomplex none(const SimplicialComplex& k) {
    Subcomplex s;
    s.parent_ = &k;
    for (int d = 0; d <= k.max_dim(); ++d) s.members_.emplace_back(k.count(static_cast<std::size_t>(d)));
    return s;
  }

  static Subcomplex all(const SimplicialComplex& k) {
    Subcomplex s = none(k);
    for (int d = 0; d <= k.max_dim(); ++d)
      for (std::size_t i = 0; i < k.count(static_cast<std::size_t>(d)); ++i) s.members_[d].set(i);
    return s;
  }

  // Membership bits must describe a face-closed set.
  static Subcomplex from_members(const SimplicialComplex& k, std::vector<BitVector> members) {
    Subcomplex s;
    s.parent_ = &k;
    if (members.size() != static_cast<std::size_t>(k.max_dim() + 1)) throw InputError("subcomplex: one membership vector per dimension required");
    for (std::size_t d = 0; d < members.size(); ++d)
      if (members[d].size() != k.count(d)) throw InputError("subcomplex: membership length mismatch");
    s.members_ = std::move(members);
    if (!s.is_closed()) throw InputError("subcomplex is not closed under faces");
    return s;
  }

  // Closure of the given simplices (dimension, index).
  static Subcomplex closure_of(const SimplicialComplex& k, std::span<const std::pair<std::size_t, std::size_t>> cells) {
    Subcomplex s = none(k);
    std::vector<std::pair<std::size_t, std::size_t>> stack(cells.begin(), cells.end());
    while (!stack.empty()) {
      auto [d, i] = stack.back();
      stack.pop_back();
      if (s.members_.at(d).get(i)) continue;
      s.members_[d].set(i);
      for (auto f : k.facets(d, i)) stack.emplace_back(d - 1, f);
    }
    return s;
  }

  const SimplicialComplex& parent() const { return *parent_; }

  bool contains(std::size_t d, std::size_t i) const {
    if (d >= members_.size()) return false;
    return members_[d].get(i);
  }

  const BitVector& members(std::size_t d) const { return members_.at(d); }

  std::size_t count(std::size_t d) const { return d < members_.size() ? members_[d].count() : 0; }

  // The chain's support lies inside this subcomplex.
  bool carries(const Chain& z) const {
    check_chain(*parent_, z);
    return z.support.subset_of(members_.at(z.dim));
  }

  bool subset_of(const Subcomplex& o) const {
    for (std::size_t d = 0; d < members_.size(); ++d)
      if (!members_[d].subset_of(o.members_.at(d))) return false;
    return true;
  }

  bool is_closed() const {
    for (std::size_t d = 1; d < members_.size(); ++d)
      for (auto i : members_[d].support())
        for (auto f : parent_->facets(d, i))
          if (!members_[d - 1].get(f)) return false;
    return true;
  }

  friend bool operator==(const Subcomplex& a, const Subcomplex& b) {
    return a.parent_ == b.parent_ && a.members_ == b.members_;
  }

 private:
  friend Subcomplex make_subcomplex_unchecked(const SimplicialComplex&, std::vector<BitVector>);
  const SimplicialComplex* parent_ = nullptr;
  std::vector<BitVector> members_;
};

// For callers that guarantee closure by construction (geodesic balls).
inline Subcomplex make_subcomplex_unchecked(const SimplicialComplex& k, std::vector<BitVector> members) {
  Subcomplex s;
  s.parent_ = &k;
  s.members_ = std::move(members);
  return s;
}

// Row indices of d-simplices outside k0, ascending.
inline std::vector<std::size_t> rows_outside(const SimplicialComplex& k, const Subcomplex& k0, std::size_t d) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < k.count(d); ++i)
    if (!k0.contains(d, i)) keep.push_back(i);
  return keep;
}

// Keeps the rows of m whose d-simplices are not in k0, in their original order.
inline BitMatrix restrict_rows(const BitMatrix& m, const SimplicialComplex& k, const Subcomplex& k0, std::size_t d) {
  if (m.rows() != k.count(d)) throw InputError("restrict_rows: matrix has " + std::to_string(m.rows()) + " rows, expected n_d=" + std::to_string(k.count(d)));
  if (&k0.parent() != &k) throw InputError("restrict_rows: subcomplex belongs to a different complex");
  const auto keep = rows_outside(k, k0, d);
  return m.select_rows(keep);
}

inline BitVector restrict_rows(const BitVector& v, const SimplicialComplex& k, const Subcomplex& k0, std::size_t d) {
  if (v.size() != k.count(d)) throw InputError("restrict_rows: vector length mismatch");
  const auto keep = rows_outside(k, k0, d);
  BitVector out(keep.size());
  for (std::size_t r = 0; r < keep.size(); ++r)
    if (v.get(keep[r])) out.set(r);
  return out;
}

}  // namespace homloc
