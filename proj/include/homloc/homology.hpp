#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "homloc/common.hpp"
#include "homloc/complex.hpp"
#include "homloc/gf2.hpp"

namespace homloc {

inline void check_dim(const SimplicialComplex& k, std::size_t d) {
  if (static_cast<int>(d) > k.max_dim())
    throw InputError("dimension " + std::to_string(d) + " outside [0, " + std::to_string(k.max_dim()) + "]");
}

inline void require_cycle(const SimplicialComplex& k, const Chain& z) {
  if (!is_cycle(k, z)) throw InputError("chain of dimension " + std::to_string(z.dim) + " is not a cycle");
}

// dim Z_d - dim B_d.
inline std::size_t betti(const SimplicialComplex& k, std::size_t d) {
  check_dim(k, d);
  const std::size_t rank_out = d == 0 ? 0 : gf2::rank(k.boundary_matrix(d));
  const std::size_t rank_in = gf2::rank(k.boundary_into(d));
  return k.count(d) - rank_out - rank_in;
}

// z lies in the image of the (d+1)-boundary map.
inline bool is_boundary(const SimplicialComplex& k, const Chain& z) {
  check_chain(k, z);
  return gf2::in_column_span(k.boundary_into(z.dim), z.support);
}

// Does k0 carry some cycle homologous to z0? Rank test on the rows of
// [bd_{d+1} | z0] indexed by d-simplices outside k0: carried iff the rank
// difference is not 1.
inline bool contain_cycle(const SimplicialComplex& k, const Subcomplex& k0, const Chain& z0) {
  require_cycle(k, z0);
  if (&k0.parent() != &k) throw InputError("contain_cycle: subcomplex belongs to a different complex");
  const std::size_t d = z0.dim;
  const BitMatrix& bd = k.boundary_into(d);
  const BitMatrix zhat = bd.with_column(z0.support);
  const std::size_t rank_zhat = gf2::rank(restrict_rows(zhat, k, k0, d));
  const std::size_t rank_bd = gf2::rank(restrict_rows(bd, k, k0, d));
  check_invariant(rank_zhat >= rank_bd && rank_zhat - rank_bd <= 1, "augmented rank must exceed the boundary rank by 0 or 1");
  return rank_zhat - rank_bd != 1;
}

// z0 + bd(gamma) for the canonical gamma solving the restricted system; the
// result is homologous to z0 and supported in k0.
inline Chain representative_in(const SimplicialComplex& k, const Subcomplex& k0, const Chain& z0) {
  require_cycle(k, z0);
  const std::size_t d = z0.dim;
  const BitMatrix& bd = k.boundary_into(d);
  auto gamma = gf2::solve(restrict_rows(bd, k, k0, d), restrict_rows(z0.support, k, k0, d));
  if (!gamma) throw Infeasible("subcomplex does not carry the class");
  Chain z(d, z0.support ^ bd.multiply(*gamma));
  check_invariant(k0.carries(z), "extracted representative leaves the subcomplex");
  return z;
}

inline bool homologous(const SimplicialComplex& k, const Chain& z1, const Chain& z2) {
  require_cycle(k, z1);
  require_cycle(k, z2);
  if (z1.dim != z2.dim) throw InputError("homologous: cycles of different dimension");
  return is_boundary(k, z1 + z2);
}

// Walks every member of [z0] exactly once: z0 plus each combination of an
// independent set of boundary columns, in Gray-code order.
class ClassEnumerator {
 public:
  ClassEnumerator(const SimplicialComplex& k, const Chain& z0, const Limits& limits = {}) : current_(z0) {
    require_cycle(k, z0);
    const BitMatrix& bd = k.boundary_into(z0.dim);
    if (bd.cols() > limits.max_enum_bits)
      throw CapExceeded("class enumeration needs n_" + std::to_string(z0.dim + 1) + "=" + std::to_string(bd.cols()) +
                        " above the cap " + std::to_string(limits.max_enum_bits));
    gf2::ColumnSpan span(bd.rows());
    for (std::size_t c = 0; c < bd.cols(); ++c) {
      auto col = bd.column(c);
      if (span.add(col)) generators_.push_back(std::move(col));
    }
  }

  // 2^rank(bd_{d+1}).
  std::uint64_t class_size() const { return std::uint64_t{1} << generators_.size(); }

  std::optional<Chain> next() {
    if (step_ == class_size()) return std::nullopt;
    if (step_ > 0) current_.support ^= generators_[static_cast<std::size_t>(std::countr_zero(step_))];
    ++step_;
    return current_;
  }

 private:
  Chain current_;
  std::vector<BitVector> generators_;
  std::uint64_t step_ = 0;
};

inline std::vector<Chain> enumerate_class(const SimplicialComplex& k, const Chain& z0, const Limits& limits = {}) {
  ClassEnumerator e(k, z0, limits);
  std::vector<Chain> out;
  out.reserve(static_cast<std::size_t>(e.class_size()));
  while (auto z = e.next()) out.push_back(std::move(*z));
  return out;
}

// A fixed, metric-independent basis of H_d: cycle-space basis vectors kept
// greedily whenever they are independent of the boundaries and earlier picks.
inline std::vector<Chain> homology_basis(const SimplicialComplex& k, std::size_t d) {
  check_dim(k, d);
  std::vector<BitVector> cycles;
  if (d == 0) {
    for (std::size_t v = 0; v < k.count(0); ++v) {
      BitVector b(k.count(0));
      b.set(v);
      cycles.push_back(std::move(b));
    }
  } else {
    cycles = gf2::nullspace(k.boundary_matrix(d));
  }
  gf2::ColumnSpan span(k.count(d));
  span.add_columns(k.boundary_into(d));
  std::vector<Chain> out;
  for (auto& c : cycles)
    if (span.add(c)) out.emplace_back(d, std::move(c));
  check_invariant(out.size() == betti(k, d), "homology basis size must equal the Betti number");
  return out;
}

// Sum of the basis cycles selected by mask bits.
inline Chain combine(const SimplicialComplex& k, std::span<const Chain> basis, std::uint64_t mask, std::size_t d) {
  Chain z = zero_chain(k, d);
  for (std::size_t i = 0; i < basis.size(); ++i)
    if (mask & (std::uint64_t{1} << i)) z += basis[i];
  return z;
}

}  // namespace homloc
