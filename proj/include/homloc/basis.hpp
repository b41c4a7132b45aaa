#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "homloc/common.hpp"
#include "homloc/complex.hpp"
#include "homloc/gf2.hpp"
#include "homloc/homology.hpp"
#include "homloc/localize.hpp"
#include "homloc/metric.hpp"

namespace homloc {

// S(h): radius of the smallest geodesic ball carrying h, with its center.
struct ClassSize {
  double value = kInfinity;
  Vertex witness_center = 0;
  double witness_radius = kInfinity;
};

inline ClassSize class_size(const SimplicialComplex& k, const Metric& m, const Chain& z0, const Limits& limits = {}) {
  const auto b = bmin(k, m, z0, limits);
  return {b.radius, b.center, b.radius};
}

// A nontrivial class named by its coefficients over the reference homology basis.
struct SizedClass {
  std::uint64_t coefficients = 0;
  Chain representative;
  ClassSize size;
};

// Every nontrivial class of H_d with its size under one metric.
struct ClassTable {
  std::size_t dim = 0;
  std::vector<Chain> reference;
  std::vector<SizedClass> classes;  // coefficient masks 1 .. 2^beta - 1, in order
};

inline std::vector<Chain> reference_basis_checked(const SimplicialComplex& k, std::size_t d, const Limits& limits) {
  auto ref = homology_basis(k, d);
  if (ref.empty()) throw Infeasible("betti_" + std::to_string(d) + " is 0: no nontrivial classes");
  if (ref.size() >= 63 || (std::uint64_t{1} << ref.size()) - 1 > limits.max_classes)
    throw CapExceeded("beta=" + std::to_string(ref.size()) + " gives 2^beta-1 classes, above the cap " +
                      std::to_string(limits.max_classes));
  return ref;
}

inline ClassTable class_table(const SimplicialComplex& k, const Metric& m, std::size_t d,
                              const std::vector<Chain>& reference, const Limits& limits = {}) {
  ClassTable t;
  t.dim = d;
  t.reference = reference;
  const std::uint64_t total = std::uint64_t{1} << reference.size();
  for (std::uint64_t mask = 1; mask < total; ++mask) {
    SizedClass c;
    c.coefficients = mask;
    c.representative = combine(k, reference, mask, d);
    c.size = class_size(k, m, c.representative, limits);
    t.classes.push_back(std::move(c));
  }
  return t;
}

inline ClassTable class_table(const SimplicialComplex& k, const Metric& m, std::size_t d, const Limits& limits = {}) {
  return class_table(k, m, d, reference_basis_checked(k, d, limits), limits);
}

struct HomologyBasis {
  const SimplicialComplex* complex = nullptr;
  std::size_t dim = 0;
  std::vector<SizedClass> classes;  // non-decreasing size

  std::size_t beta() const { return classes.size(); }
  double size_sum() const {
    double s = 0.0;
    for (const auto& c : classes) s += c.size.value;
    return s;
  }
};

// Greedy matroid selection: ascending size (ties: lexicographic representative),
// keep each class independent of the boundaries and the classes already kept.
inline HomologyBasis greedy_basis(const SimplicialComplex& k, const ClassTable& table) {
  std::vector<std::size_t> order(table.classes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = table.classes[a];
    const auto& y = table.classes[b];
    if (x.size.value != y.size.value) return x.size.value < y.size.value;
    return lex_less(x.representative.support, y.representative.support);
  });
  HomologyBasis out;
  out.complex = &k;
  out.dim = table.dim;
  gf2::ColumnSpan span(k.count(table.dim));
  span.add_columns(k.boundary_into(table.dim));
  for (auto i : order) {
    if (out.classes.size() == table.reference.size()) break;
    if (span.add(table.classes[i].representative.support)) out.classes.push_back(table.classes[i]);
  }
  check_invariant(out.classes.size() == table.reference.size(), "greedy basis must collect beta classes");
  return out;
}

inline HomologyBasis optimal_basis(const SimplicialComplex& k, const Metric& m, std::size_t d, const Limits& limits = {}) {
  return greedy_basis(k, class_table(k, m, d, limits));
}

// psi_0 <= psi_1 <= ... <= psi_beta, psi_i spanned by the first i basis classes.
struct SubgroupFiltration {
  HomologyBasis basis;
  std::vector<double> sizes;  // sizes[i] = S(psi_i); sizes[0] = 0

  std::size_t length() const { return basis.beta(); }
};

inline SubgroupFiltration filtration(const HomologyBasis& b) {
  SubgroupFiltration x;
  x.basis = b;
  x.sizes.push_back(0.0);
  for (const auto& c : b.classes) x.sizes.push_back(c.size.value);
  return x;
}

// Smallest j with psi_i(x1) contained in psi_j(x2), tested modulo boundaries.
inline std::size_t projection(const SubgroupFiltration& x1, std::size_t i, const SubgroupFiltration& x2) {
  const auto* k = x1.basis.complex;
  if (k == nullptr || k != x2.basis.complex || x1.basis.dim != x2.basis.dim)
    throw InputError("projection: filtrations over different complexes or dimensions");
  if (i > x1.length()) throw InputError("projection: subgroup index out of range");
  gf2::ColumnSpan span(k->count(x1.basis.dim));
  span.add_columns(k->boundary_into(x1.basis.dim));
  auto contained = [&] {
    for (std::size_t g = 0; g < i; ++g)
      if (!span.contains(x1.basis.classes[g].representative.support)) return false;
    return true;
  };
  for (std::size_t j = 0; j < x2.length(); ++j) {
    if (contained()) return j;
    span.add(x2.basis.classes[j].representative.support);
  }
  check_invariant(contained(), "the full group must contain every subgroup");
  return x2.length();
}

struct FiltrationDistance {
  double value = 0.0;
  std::size_t index = 0;   // subgroup index attaining the max (0 when value is 0)
  int direction = 0;       // 0: psi_index of x1 projected onto x2; 1: the reverse
};

// Max over i >= 1 of |S(psi_i) - S(proj(psi_i))| in both directions.
inline FiltrationDistance filtration_distance(const SubgroupFiltration& x1, const SubgroupFiltration& x2) {
  if (x1.basis.complex != x2.basis.complex || x1.basis.dim != x2.basis.dim || x1.length() != x2.length())
    throw InputError("filtration_distance: filtrations differ in complex, dimension or length");
  FiltrationDistance out;
  const SubgroupFiltration* xs[2] = {&x1, &x2};
  for (int dir = 0; dir < 2; ++dir) {
    const auto& a = *xs[dir];
    const auto& b = *xs[1 - dir];
    for (std::size_t i = 1; i <= a.length(); ++i) {
      const double delta = std::abs(a.sizes[i] - b.sizes[projection(a, i, b)]);
      if (delta > out.value) out = {delta, i, dir};
    }
  }
  return out;
}

}  // namespace homloc
