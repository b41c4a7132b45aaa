#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "homloc/common.hpp"
#include "homloc/complex.hpp"
#include "homloc/homology.hpp"
#include "homloc/metric.hpp"
#include "homloc/stability.hpp"

// Canonical fixture complexes and seeded random instances.
namespace homloc::testkit {

struct Fixture {
  std::string name;
  SimplicialComplex complex;
  Metric metric;
  std::vector<std::size_t> betti;
  // A representative of the class the fixture is built around, if any.
  std::optional<Chain> query;
  // Expected optimal-basis sizes in dimension 1, when known.
  std::vector<double> sizes;
};

inline std::vector<std::string> fixture_names() {
  return {"circle_3",  "circle_4",  "circle_6",   "hollow_square", "filled_triangle", "cylinder_3_6",
          "annulus",   "wedge_3_6", "torus_7",    "rp2_6",         "sphere_oct",      "three_hole_disk"};
}

namespace detail {

inline std::vector<Simplex> cycle_edges(const std::vector<VertexId>& loop) {
  std::vector<Simplex> out;
  for (std::size_t i = 0; i < loop.size(); ++i) out.push_back(Simplex{loop[i], loop[(i + 1) % loop.size()]});
  return out;
}

inline Fixture make(std::string name, std::vector<Simplex> simplices, std::vector<std::size_t> betti) {
  Fixture f;
  f.name = std::move(name);
  f.complex = SimplicialComplex::build(simplices);
  f.metric = Metric::uniform(f.complex);
  f.betti = std::move(betti);
  return f;
}

inline void set_length(Fixture& f, VertexId a, VertexId b, double len) {
  auto e = f.complex.index_of_labels({a, b});
  if (!e) throw InputError("fixture edge missing");
  f.metric.set_length(*e, len);
}

inline Fixture circle(const std::string& name, std::size_t n) {
  if (n < 3) throw InputError("circle_n needs n >= 3");
  std::vector<VertexId> loop(n);
  for (std::size_t i = 0; i < n; ++i) loop[i] = static_cast<VertexId>(i);
  auto edges = cycle_edges(loop);
  Fixture f = make(name, edges, {1, 1});
  f.query = chain_from_simplices(f.complex, edges);
  f.sizes = {std::floor(static_cast<double>(n) / 2.0)};
  return f;
}

// Short circle 0-1-2 and long circle 3..8 joined by a one-layer tube: short
// vertex i fans over long vertices 3+2i .. 3+2i+2.
inline Fixture cylinder_3_6() {
  std::vector<Simplex> tris;
  for (VertexId i = 0; i < 3; ++i) {
    const VertexId s = i, s_next = (i + 1) % 3;
    const VertexId l0 = 3 + 2 * i, l1 = 3 + 2 * i + 1, l2 = 3 + (2 * i + 2) % 6;
    tris.push_back({s, l0, l1});
    tris.push_back({s, l1, l2});
    tris.push_back({s, s_next, l2});
  }
  Fixture f = make("cylinder_3_6", tris, {1, 1, 0});
  f.query = chain_from_simplices(f.complex, cycle_edges({3, 4, 5, 6, 7, 8}));
  f.sizes = {1.0};
  return f;
}

// Hole bounded by the unit triangle 0-1-2. Filled triangles (0,1,3) and
// (0,2,4) make the tight loop 0-1-2 homologous to the wiggly loop
// 0-3-1-2-4 (diameter 2, all within 1 of vertex 0). An outer strip of ten
// triangles joins the wiggly loop to the outer rim 5..9; the two spokes from
// vertex 0 have length 1.5 so the rim stays outside the radius-1 ball at 0.
// Localizing the rim lands exactly on the wiggly loop: the minimal-radius
// cycle has twice the diameter of the minimal-diameter one.
inline Fixture annulus() {
  const std::vector<VertexId> wiggly = {0, 3, 1, 2, 4};
  const std::vector<VertexId> rim = {5, 6, 7, 8, 9};
  std::vector<Simplex> tris = {{0, 1, 3}, {0, 2, 4}, {1, 2}};
  for (std::size_t i = 0; i < 5; ++i) {
    const std::size_t j = (i + 1) % 5;
    tris.push_back({wiggly[i], wiggly[j], rim[i]});
    tris.push_back({wiggly[j], rim[i], rim[j]});
  }
  Fixture f = make("annulus", tris, {1, 1, 0});
  set_length(f, 0, 5, 1.5);
  set_length(f, 0, 9, 1.5);
  f.query = chain_from_simplices(f.complex, cycle_edges(rim));
  f.sizes = {1.0};
  return f;
}

inline Fixture wedge_3_6() {
  auto edges = cycle_edges({0, 1, 2});
  auto big = cycle_edges({0, 3, 4, 5, 6, 7});
  std::vector<Simplex> all = edges;
  all.insert(all.end(), big.begin(), big.end());
  Fixture f = make("wedge_3_6", all, {1, 2});
  f.query = chain_from_simplices(f.complex, edges);
  f.sizes = {1.0, 3.0};
  return f;
}

// Seven-vertex minimal torus (Moebius-Kantor): triangles {i, i+1, i+3} and
// {i, i+2, i+3} mod 7. Its 1-skeleton is K7.
inline Fixture torus_7() {
  std::vector<Simplex> tris;
  for (VertexId i = 0; i < 7; ++i) {
    tris.push_back({i, (i + 1) % 7, (i + 3) % 7});
    tris.push_back({i, (i + 2) % 7, (i + 3) % 7});
  }
  Fixture f = make("torus_7", tris, {1, 2, 1});
  f.sizes = {1.0, 1.0};
  return f;
}

// Six-vertex minimal real projective plane (hemi-icosahedron).
inline Fixture rp2_6() {
  std::vector<Simplex> tris = {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 5}, {0, 1, 5},
                               {1, 2, 4}, {2, 3, 5}, {1, 3, 4}, {2, 4, 5}, {1, 3, 5}};
  Fixture f = make("rp2_6", tris, {1, 1, 1});
  f.sizes = {1.0};
  return f;
}

// Octahedron boundary: vertices 0/1 = +-x, 2/3 = +-y, 4/5 = +-z.
inline Fixture sphere_oct() {
  std::vector<Simplex> tris;
  for (VertexId x : {0, 1})
    for (VertexId y : {2, 3})
      for (VertexId z : {4, 5}) tris.push_back({x, y, z});
  return make("sphere_oct", tris, {1, 0, 1});
}

// Disk with three holes.
//   z1: small triangular hole A-B-q (A=0, B=1, q=2).
//   z3: triangular hole A-B-R (R=3) sharing the long wall edge A-B with z1.
//   z2: small hole u-v-w (7, 9, 10) in an annulus hanging off the outer ring.
// Filled triangles (A,q,S), (A,S,R) with S=4 join the two holes from below, and
// a ring (5, 6, 7, 8) of heavy triangles closes the outer boundary B-q-S-R.
// The best ball for [z3] sits at R and reaches A by the edge R-A (1.5); the
// best ball for [z1]+[z3] sits at B and reaches S through q (1.6) without A.
// Lengthening R-A past 1.6 swaps which of the two enters the optimal basis,
// see three_hole_disk_flip().
inline Fixture three_hole_disk() {
  const VertexId A = 0, B = 1, q = 2, R = 3, S = 4, B2 = 5, q2 = 6, S2 = 7, R2 = 8;
  const VertexId u = 9, w = 10, x = 11, y = 12, z = 13;
  std::vector<Simplex> s = {{A, B},      {q, B},      {R, B},      {A, q, S},   {A, S, R},
                            {B, q, B2},  {q, B2, q2}, {q, S, q2},  {S, q2, S2}, {S, R, S2},
                            {R, S2, R2}, {R, B, R2},  {B, R2, B2}, {S2, u, x},  {u, x, y},
                            {u, w, y},   {w, y, z},   {w, S2, z},  {S2, z, x}};
  Fixture f = make("three_hole_disk", s, {1, 3, 0});
  f.metric = Metric::uniform(f.complex, 3.0);
  set_length(f, R, A, 1.5);
  set_length(f, R, B, 1.2);
  set_length(f, R, S, 1.9);
  set_length(f, S, q, 0.6);
  set_length(f, q, A, 1.0);
  set_length(f, q, B, 1.0);
  set_length(f, A, B, 1.9);
  set_length(f, A, S, 1.2);
  for (auto [a, b] : std::vector<std::pair<VertexId, VertexId>>{
           {S2, u}, {u, w}, {w, S2}, {S2, x}, {S2, z}, {u, x}, {u, y}, {w, y}, {w, z}, {x, y}, {y, z}, {x, z}})
    set_length(f, a, b, 0.5);
  f.query = chain_from_simplices(f.complex, cycle_edges({A, B, R}));
  f.sizes = {0.5, 1.0, 1.5};
  return f;
}

}  // namespace detail

using detail::three_hole_disk;

// Single-edge perturbation of three_hole_disk that flips the optimal basis
// from {z2, z1, z3} to {z2, z1, z1+z3}.
inline Perturbation three_hole_disk_flip(const Fixture& f) {
  auto e = f.complex.index_of_labels({0, 3});
  if (!e) throw InputError("three_hole_disk_flip: not a three_hole_disk fixture");
  return {Scheme::single_edge, 0.3, 0, *e};
}

inline Fixture fixture(const std::string& name) {
  if (name == "hollow_square") {
    auto f = detail::circle("hollow_square", 4);
    return f;
  }
  if (name.rfind("circle_", 0) == 0) {
    std::size_t n = 0;
    try {
      n = static_cast<std::size_t>(std::stoul(name.substr(7)));
    } catch (const std::exception&) {
      throw InputError("unknown fixture: " + name);
    }
    return detail::circle(name, n);
  }
  if (name == "filled_triangle") return detail::make("filled_triangle", {{0, 1, 2}}, {1, 0, 0});
  if (name == "cylinder_3_6") return detail::cylinder_3_6();
  if (name == "annulus") return detail::annulus();
  if (name == "wedge_3_6") return detail::wedge_3_6();
  if (name == "torus_7") return detail::torus_7();
  if (name == "rp2_6") return detail::rp2_6();
  if (name == "sphere_oct") return detail::sphere_oct();
  if (name == "three_hole_disk") return three_hole_disk();
  throw InputError("unknown fixture: " + name);
}

struct RandomParams {
  std::size_t vertices = 7;
  double edge_prob = 0.5;
  double triangle_prob = 0.4;
  std::size_t max_triangles = 12;
  double min_length = 0.5;
  double max_length = 2.0;
  // Draw lengths from the integers in [min_length, max_length] to provoke ties.
  bool integer_lengths = false;
  // Only a random forest 1-skeleton, no 2-simplices.
  bool forest = false;
};

struct RandomInstance {
  SimplicialComplex complex;
  Metric metric;
};

inline RandomInstance random_complex(const RandomParams& params, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution edge_coin(params.edge_prob), tri_coin(params.triangle_prob);
  std::vector<Simplex> simplices;
  const auto n = static_cast<VertexId>(params.vertices);
  for (VertexId v = 0; v < n; ++v) simplices.push_back({v});
  std::vector<std::vector<bool>> adj(params.vertices, std::vector<bool>(params.vertices, false));
  if (params.forest) {
    for (VertexId v = 1; v < n; ++v)
      if (edge_coin(rng)) {
        const VertexId u = std::uniform_int_distribution<VertexId>(0, v - 1)(rng);
        simplices.push_back({u, v});
      }
  } else {
    for (VertexId a = 0; a < n; ++a)
      for (VertexId b = a + 1; b < n; ++b)
        if (edge_coin(rng)) {
          adj[a][b] = adj[b][a] = true;
          simplices.push_back({a, b});
        }
    std::size_t tris = 0;
    for (VertexId a = 0; a < n; ++a)
      for (VertexId b = a + 1; b < n; ++b)
        for (VertexId c = b + 1; c < n; ++c)
          if (adj[a][b] && adj[b][c] && adj[a][c] && tris < params.max_triangles && tri_coin(rng)) {
            simplices.push_back({a, b, c});
            ++tris;
          }
  }
  RandomInstance out;
  out.complex = SimplicialComplex::build(simplices);
  std::vector<double> lengths(out.complex.count(1));
  if (params.integer_lengths) {
    std::uniform_int_distribution<int> len(static_cast<int>(params.min_length), static_cast<int>(params.max_length));
    for (auto& l : lengths) l = len(rng);
  } else {
    std::uniform_real_distribution<double> len(params.min_length, params.max_length);
    for (auto& l : lengths) l = len(rng);
  }
  out.metric = Metric(std::move(lengths));
  return out;
}

// A random representative of a random nontrivial class of H_d, or nothing
// when betti_d = 0. Adds a random boundary so the input is not canonical.
inline std::optional<Chain> random_nontrivial_cycle(const SimplicialComplex& k, std::size_t d, std::mt19937_64& rng) {
  if (static_cast<int>(d) > k.max_dim()) return std::nullopt;
  const auto basis = homology_basis(k, d);
  if (basis.empty()) return std::nullopt;
  std::uint64_t mask = 0;
  while (mask == 0) mask = std::uniform_int_distribution<std::uint64_t>(0, (std::uint64_t{1} << basis.size()) - 1)(rng);
  Chain z = combine(k, basis, mask, d);
  const auto& bd = k.boundary_into(d);
  std::bernoulli_distribution coin(0.5);
  for (std::size_t c = 0; c < bd.cols(); ++c)
    if (coin(rng)) z.support ^= bd.column(c);
  return z;
}

}  // namespace homloc::testkit
