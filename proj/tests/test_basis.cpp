#include <gtest/gtest.h>

#include <random>

#include "checks.hpp"
#include "homloc/basis.hpp"
#include "homloc/stability.hpp"
#include "homloc/testkit.hpp"

using namespace homloc;

namespace {

// Fixtures and dimensions with 1 <= beta <= 4.
std::vector<std::pair<std::string, std::size_t>> small_beta() {
  std::vector<std::pair<std::string, std::size_t>> out;
  for (const auto& name : testkit::fixture_names()) {
    const auto f = testkit::fixture(name);
    for (std::size_t d = 1; d < f.betti.size(); ++d)
      if (f.betti[d] >= 1 && f.betti[d] <= 4) out.emplace_back(name, d);
  }
  return out;
}

std::uint64_t mask_of(const HomologyBasis& b, std::size_t i) { return b.classes[i].coefficients; }

}  // namespace

TEST(ClassSize, Examples) {
  const auto sq = testkit::fixture("hollow_square");
  EXPECT_EQ(class_size(sq.complex, sq.metric, *sq.query).value, 2.0);
  const auto w = testkit::fixture("wedge_3_6");
  EXPECT_EQ(class_size(w.complex, w.metric, *w.query).value, 1.0);
  auto big = chain_from_simplices(w.complex, {{0, 3}, {3, 4}, {4, 5}, {5, 6}, {6, 7}, {0, 7}});
  EXPECT_EQ(class_size(w.complex, w.metric, big).value, 3.0);
  EXPECT_EQ(oracle::min_ball(w.complex, w.metric, big).radius, 3.0);
}

TEST(OptimalBasis, HollowSquare) {
  const auto f = testkit::fixture("hollow_square");
  const auto b = optimal_basis(f.complex, f.metric, 1);
  ASSERT_EQ(b.beta(), 1u);
  EXPECT_EQ(b.classes[0].size.value, 2.0);
}

TEST(OptimalBasis, WedgeSmallFirst) {
  const auto f = testkit::fixture("wedge_3_6");
  const auto b = optimal_basis(f.complex, f.metric, 1);
  ASSERT_EQ(b.beta(), 2u);
  EXPECT_EQ(b.classes[0].size.value, 1.0);
  EXPECT_EQ(b.classes[1].size.value, 3.0);
  EXPECT_TRUE(homologous(f.complex, b.classes[0].representative, *f.query));
}

TEST(OptimalBasis, TorusHasEqualSizes) {
  const auto f = testkit::fixture("torus_7");
  const auto b = optimal_basis(f.complex, f.metric, 1);
  ASSERT_EQ(b.beta(), 2u);
  EXPECT_EQ(b.classes[0].size.value, b.classes[1].size.value);
  const auto t = class_table(f.complex, f.metric, 1);
  for (const auto& c : t.classes) EXPECT_EQ(c.size.value, 1.0);
}

TEST(OptimalBasis, FixtureSizesMatchExpectations) {
  for (const auto& name : testkit::fixture_names()) {
    const auto f = testkit::fixture(name);
    if (f.sizes.empty()) continue;
    const auto b = optimal_basis(f.complex, f.metric, 1);
    ASSERT_EQ(b.beta(), f.sizes.size()) << name;
    for (std::size_t i = 0; i < f.sizes.size(); ++i) EXPECT_NEAR(b.classes[i].size.value, f.sizes[i], 1e-12) << name;
  }
}

TEST(OptimalBasis, Errors) {
  const auto tri = testkit::fixture("filled_triangle");
  EXPECT_THROW(optimal_basis(tri.complex, tri.metric, 1), Infeasible);
  const auto f = testkit::fixture("three_hole_disk");
  Limits tight;
  tight.max_classes = 3;
  EXPECT_THROW(optimal_basis(f.complex, f.metric, 1, tight), CapExceeded);
}

TEST(OptimalBasis, TableSizesMatchOracle) {
  for (const auto& [name, d] : small_beta()) {
    const auto f = testkit::fixture(name);
    if (f.complex.count(d + 1) > 16) continue;
    const auto t = class_table(f.complex, f.metric, d);
    const auto want = checks::oracle_sizes(f.complex, f.metric, t);
    for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(t.classes[i].size.value, want[i], 1e-12) << name;
  }
}

TEST(OptimalBasis, GreedyPropertiesHoldOnFixtures) {
  for (const auto& [name, d] : small_beta()) {
    const auto f = testkit::fixture(name);
    const auto t = class_table(f.complex, f.metric, d);
    const auto b = greedy_basis(f.complex, t);
    EXPECT_EQ(checks::not_spanned_by_smaller(f.complex, t, b), "") << name << " d=" << d;
    EXPECT_EQ(checks::spans_each_sublevel(f.complex, t, b), "") << name << " d=" << d;
    for (std::size_t i = 1; i < b.beta(); ++i) EXPECT_LE(b.classes[i - 1].size.value, b.classes[i].size.value);
  }
}

TEST(OptimalBasis, SumIsMinimalOnFixtures) {
  for (const auto& [name, d] : small_beta()) {
    const auto f = testkit::fixture(name);
    if (f.betti[d] > 3) continue;
    const auto t = class_table(f.complex, f.metric, d);
    std::vector<double> sizes;
    for (const auto& c : t.classes) sizes.push_back(c.size.value);
    const auto b = greedy_basis(f.complex, t);
    EXPECT_NEAR(b.size_sum(), checks::min_independent_sum(f.complex, t, sizes), 1e-9) << name;
  }
}

TEST(OptimalBasis, GreedyPropertiesAndMinimalSumOnRandomInstances) {
  testkit::RandomParams params;
  params.vertices = 8;
  params.edge_prob = 0.45;
  params.integer_lengths = true;
  params.min_length = 1;
  params.max_length = 3;
  int tested = 0;
  for (std::uint64_t seed = 0; tested < 40 && seed < 2000; ++seed) {
    auto inst = testkit::random_complex(params, seed);
    const auto& k = inst.complex;
    const auto beta = betti(k, 1);
    if (beta < 2 || beta > 3) continue;
    ++tested;
    const auto t = class_table(k, inst.metric, 1);
    const auto b = greedy_basis(k, t);
    ASSERT_EQ(checks::not_spanned_by_smaller(k, t, b), "") << "seed " << seed;
    ASSERT_EQ(checks::spans_each_sublevel(k, t, b), "") << "seed " << seed;
    const auto sizes = checks::oracle_sizes(k, inst.metric, t);
    ASSERT_NEAR(b.size_sum(), checks::min_independent_sum(k, t, sizes), 1e-9) << "seed " << seed;
  }
  EXPECT_EQ(tested, 40);
}

TEST(Filtration, SingleClass) {
  const auto f = testkit::fixture("hollow_square");
  const auto x = filtration(optimal_basis(f.complex, f.metric, 1));
  EXPECT_EQ(x.length(), 1u);
  EXPECT_EQ(x.sizes, (std::vector<double>{0.0, 2.0}));
  EXPECT_EQ(projection(x, 0, x), 0u);
  EXPECT_EQ(projection(x, 1, x), 1u);
}

TEST(Filtration, Wedge) {
  const auto f = testkit::fixture("wedge_3_6");
  const auto x = filtration(optimal_basis(f.complex, f.metric, 1));
  EXPECT_EQ(x.sizes, (std::vector<double>{0.0, 1.0, 3.0}));
  EXPECT_TRUE(homologous(f.complex, x.basis.classes[0].representative, *f.query));
}

TEST(Projection, OwnFiltrationIsIdentity) {
  for (const auto& [name, d] : small_beta()) {
    const auto f = testkit::fixture(name);
    const auto x = filtration(optimal_basis(f.complex, f.metric, d));
    for (std::size_t i = 0; i <= x.length(); ++i) EXPECT_EQ(projection(x, i, x), i) << name;
  }
}

TEST(Projection, WedgeUnderMildPerturbationIsIdentity) {
  const auto f = testkit::fixture("wedge_3_6");
  const auto x1 = filtration(optimal_basis(f.complex, f.metric, 1));
  const auto m2 = perturb(f.metric, {Scheme::single_edge, 0.2, 0, 0});
  const auto x2 = filtration(optimal_basis(f.complex, m2, 1));
  for (std::size_t i = 0; i <= 2; ++i) {
    EXPECT_EQ(projection(x1, i, x2), i);
    EXPECT_EQ(projection(x2, i, x1), i);
  }
}

TEST(FiltrationDistance, ZeroOnSelfAndSymmetric) {
  for (const auto& [name, d] : small_beta()) {
    const auto f = testkit::fixture(name);
    const auto x = filtration(optimal_basis(f.complex, f.metric, d));
    EXPECT_EQ(filtration_distance(x, x).value, 0.0);
  }
  const auto f = testkit::fixture("three_hole_disk");
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto m2 = perturb(f.metric, {Scheme::uniform_noise, 0.3, seed, std::nullopt});
    const auto x1 = filtration(optimal_basis(f.complex, f.metric, 1));
    const auto x2 = filtration(optimal_basis(f.complex, m2, 1));
    EXPECT_EQ(filtration_distance(x1, x2).value, filtration_distance(x2, x1).value);
  }
}

TEST(FiltrationDistance, Errors) {
  const auto w = testkit::fixture("wedge_3_6");
  const auto s = testkit::fixture("hollow_square");
  const auto x1 = filtration(optimal_basis(w.complex, w.metric, 1));
  const auto x2 = filtration(optimal_basis(s.complex, s.metric, 1));
  EXPECT_THROW(filtration_distance(x1, x2), InputError);
  EXPECT_THROW(projection(x1, 3, x1), InputError);
}

// Two bases of the three-hole disk differing only in z3 versus z1 + z3.
TEST(UnstableBasis, SameSubgroupSequence) {
  const auto f = testkit::three_hole_disk();
  const auto& k = f.complex;
  const auto t = class_table(k, f.metric, 1);
  const auto b1 = greedy_basis(k, t);
  ASSERT_EQ(b1.beta(), 3u);
  // mask 4 is the annulus hole, 1 the small hole A-B-q, 2 the hole A-B-R
  EXPECT_EQ(mask_of(b1, 0), 4u);
  EXPECT_EQ(mask_of(b1, 1), 1u);
  EXPECT_EQ(mask_of(b1, 2), 2u);

  HomologyBasis b2 = b1;
  b2.classes[2] = t.classes[3 - 1];  // mask 3 = z1 + z3
  ASSERT_EQ(b2.classes[2].coefficients, 3u);
  const auto x1 = filtration(b1), x2 = filtration(b2);
  for (std::size_t i = 0; i <= 3; ++i) {
    EXPECT_EQ(projection(x1, i, x2), i);
    EXPECT_EQ(projection(x2, i, x1), i);
  }
}

TEST(UnstableBasis, BothOptimalAtTheTieAndDistanceZero) {
  auto f = testkit::three_hole_disk();
  const auto& k = f.complex;
  auto p = testkit::three_hole_disk_flip(f);
  p.magnitude = 0.1;  // R-A at 1.6: S(z3) = S(z1 + z3)
  const auto m = perturb(f.metric, p);
  const auto t = class_table(k, m, 1);
  EXPECT_NEAR(t.classes[1].size.value, 1.6, 1e-12);
  EXPECT_NEAR(t.classes[2].size.value, 1.6, 1e-12);
  const auto b1 = greedy_basis(k, t);
  HomologyBasis b2 = b1;
  for (auto& c : b2.classes)
    if (c.coefficients == 2 || c.coefficients == 3) c = t.classes[(c.coefficients ^ 1) - 1];
  EXPECT_NE(mask_of(b1, 2), mask_of(b2, 2));
  EXPECT_NEAR(b1.size_sum(), b2.size_sum(), 1e-12);
  EXPECT_EQ(filtration_distance(filtration(b1), filtration(b2)).value, 0.0);
}
