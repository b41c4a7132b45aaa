// Acceptance gate: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include <json.hpp>

#include "checks.hpp"
#include "homloc/cli.hpp"
#include "homloc/io.hpp"
#include "homloc/localize.hpp"
#include "homloc/stability.hpp"
#include "homloc/testkit.hpp"
#include "oracles.hpp"

using namespace homloc;

namespace {

// Pinned tolerances and budgets.
constexpr double kBoundTol = 1e-9;   // every "<=" in a bound check
constexpr double kRadiusTol = 1e-9;    // oracle distances are Floyd-Warshall sums, the library's are Dijkstra sums
constexpr double kBettiBudgetS = 1.0;
constexpr double kContainBudgetS = 60.0;
constexpr double kStabilityBudgetS = 300.0;
constexpr std::size_t kContainComplexes = 200;
constexpr std::size_t kContainMaxCols = 15;
constexpr std::size_t kRandomInstances = 100;
constexpr std::size_t kTrials = 100;
constexpr std::size_t kGf2Matrices = 1000;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

oracle::Vec mask_of(const Subcomplex& s, std::size_t d) {
  oracle::Vec v(s.members(d).size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = s.members(d).get(i);
  return v;
}

// Every nontrivial class of H_d, one representative each.
std::vector<Chain> all_classes(const SimplicialComplex& k, std::size_t d) {
  const auto basis = homology_basis(k, d);
  std::vector<Chain> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << basis.size()); ++mask) out.push_back(combine(k, basis, mask, d));
  return out;
}

struct Instance {
  std::string label;
  SimplicialComplex complex;
  Metric metric;
  Chain query;
};

// Fixture classes small enough to enumerate, plus seeded random instances.
std::vector<Instance> localization_instances(std::size_t random_count) {
  std::vector<Instance> out;
  for (const auto& name : testkit::fixture_names()) {
    const auto f = testkit::fixture(name);
    for (int d = 1; d <= f.complex.max_dim(); ++d) {
      if (f.complex.count(d + 1) > 19) continue;
      for (auto& z : all_classes(f.complex, d)) out.push_back({name, f.complex, f.metric, std::move(z)});
    }
  }
  std::size_t made = 0;
  for (std::uint64_t seed = 0; made < random_count; ++seed) {
    auto inst = testkit::random_complex({}, seed);
    std::mt19937_64 rng(seed);
    auto z = testkit::random_nontrivial_cycle(inst.complex, 1, rng);
    if (!z) continue;
    // keep classes that some ball carries (connected support)
    if (std::isinf(oracle::min_ball(inst.complex, inst.metric, *z).radius)) continue;
    out.push_back({"random seed " + std::to_string(seed), std::move(inst.complex), std::move(inst.metric), std::move(*z)});
    ++made;
  }
  return out;
}

Outcome ac1_betti() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::pair<std::string, std::vector<std::size_t>>> want = {
      {"circle_4", {1, 1}}, {"sphere_oct", {1, 0, 1}}, {"torus_7", {1, 2, 1}}, {"rp2_6", {1, 1, 1}}};
  for (const auto& [name, b] : want) {
    const auto f = testkit::fixture(name);
    for (std::size_t d = 0; d < b.size(); ++d)
      if (betti(f.complex, d) != b[d]) o.fail(fmt("%s betti_%zu = %zu, want %zu", name.c_str(), d, betti(f.complex, d), b[d]));
  }
  const double s = seconds_since(t0);
  if (s >= kBettiBudgetS) o.fail(fmt("took %.3f s", s));
  if (o.pass) o.detail = fmt("4 fixtures exact, %.4f s", s);
  return o;
}

Outcome ac2_contain_cycle() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t complexes = 0, cases = 0, trivial = 0;
  std::mt19937_64 rng(2024);
  for (std::uint64_t seed = 0; complexes < kContainComplexes; ++seed) {
    auto inst = testkit::random_complex({}, 100000 + seed);
    const auto& k = inst.complex;
    std::vector<std::size_t> dims;
    for (int d = 0; d <= k.max_dim(); ++d)
      if (k.count(d + 1) <= kContainMaxCols) dims.push_back(d);
    if (dims.empty()) continue;
    ++complexes;
    for (auto d : dims) {
      // a nontrivial class when there is one, else a boundary (trivial class)
      auto z = testkit::random_nontrivial_cycle(k, d, rng);
      if (!z) {
        if (d >= static_cast<std::size_t>(k.max_dim())) continue;
        Chain b = zero_chain(k, d);
        const auto& bd = k.boundary_into(d);
        for (std::size_t c = 0; c < bd.cols(); ++c)
          if (rng() & 1) b.support ^= bd.column(c);
        z = b;
        ++trivial;
      }
      const auto members = oracle::class_members(k, *z);
      for (int rep = 0; rep < 4; ++rep) {
        const Vertex p = static_cast<Vertex>(rng() % k.count(0));
        const auto f = geodesic_field(k, inst.metric, p);
        const auto radii = f.critical_radii();
        const double r = radii[rng() % radii.size()] * std::uniform_real_distribution<double>(0.9, 1.1)(rng);
        const auto ball = geodesic_ball(k, f, r);
        ++cases;
        if (contain_cycle(k, ball, *z) != oracle::carried_by(members, mask_of(ball, d)))
          o.fail(fmt("disagreement at seed %llu d=%zu p=%u r=%.6f", static_cast<unsigned long long>(100000 + seed), d, p, r));
      }
    }
  }
  const double s = seconds_since(t0);
  if (s >= kContainBudgetS) o.fail(fmt("took %.1f s", s));
  if (o.pass) o.detail = fmt("%zu complexes, %zu (p, r) cases (%zu on trivial classes), 100%% agreement, %.2f s", complexes, cases, trivial, s);
  return o;
}

Outcome ac3_min_radius(const std::vector<Instance>& instances) {
  Outcome o;
  for (const auto& in : instances) {
    const auto want = oracle::min_ball(in.complex, in.metric, in.query);
    const auto r = min_radius_cycle(in.complex, in.metric, in.query);
    const double got = rad(in.complex, in.metric, r.cycle).value;
    if (std::abs(got - want.radius) > kRadiusTol)
      o.fail(fmt("%s: rad %.12g vs enumerated %.12g", in.label.c_str(), got, want.radius));
    if (!homologous(in.complex, r.cycle, in.query)) o.fail(in.label + ": result not homologous");
    const auto ball = geodesic_ball(in.complex, geodesic_field(in.complex, in.metric, *r.center), r.objective_value);
    if (!ball.carries(r.cycle)) o.fail(in.label + ": result not carried by the returned ball");
  }
  if (o.pass) o.detail = fmt("%zu instances (fixture classes + %zu random)", instances.size(), kRandomInstances);
  return o;
}

// Minimal diameter by the oracle's own enumeration.
double oracle_min_diameter(const Instance& in) {
  const auto fw = oracle::floyd_warshall(in.complex.count(0), oracle::edges(in.complex, in.metric));
  double best = oracle::kInf;
  oracle::for_each_member(in.complex, in.query, [&](const oracle::Vec& v) {
    if (oracle::volume(v)) best = std::min(best, oracle::diam(in.complex, fw, in.query.dim, v));
  });
  return best;
}

Outcome ac4_two_approx(const std::vector<Instance>& instances) {
  Outcome o;
  double worst = 0.0;
  for (const auto& in : instances) {
    const auto r = min_radius_cycle(in.complex, in.metric, in.query);
    const double dr = diam(in.complex, in.metric, r.cycle);
    const double dd = oracle_min_diameter(in);
    const auto lib = min_diameter_cycle_exact(in.complex, in.metric, in.query);
    if (std::abs(lib.objective_value - dd) > kRadiusTol) o.fail(in.label + ": exact diameter disagrees with the oracle");
    if (dr > 2.0 * dd + kBoundTol) o.fail(fmt("%s: diam(z_r) %.12g > 2 * %.12g", in.label.c_str(), dr, dd));
    if (dd > 0) worst = std::max(worst, dr / dd);
  }
  const auto a = testkit::fixture("annulus");
  const Instance ann{"annulus", a.complex, a.metric, *a.query};
  const double ratio = diam(a.complex, a.metric, min_radius_cycle(a.complex, a.metric, *a.query).cycle) / oracle_min_diameter(ann);
  if (ratio != 2.0) o.fail(fmt("annulus ratio %.17g, want 2.0", ratio));
  if (o.pass) o.detail = fmt("%zu instances, 0 violations, max ratio %.3f, annulus ratio %.1f", instances.size(), worst, ratio);
  return o;
}

struct SweepTotals {
  std::size_t trials = 0, class_checks = 0, class_violations = 0, filtration_violations = 0, basis_changes = 0;
  double seconds = 0.0;
};

SweepTotals stability_sweeps() {
  SweepTotals t;
  const auto t0 = std::chrono::steady_clock::now();
  Limits limits;
  limits.jobs = std::max(1u, std::thread::hardware_concurrency());
  std::uint64_t seed = 1;
  for (const auto& name : {"wedge_3_6", "cylinder_3_6", "torus_7"}) {
    const auto f = testkit::fixture(name);
    for (double mag : {0.01, 0.05, 0.2}) {
      const auto s = stability_sweep(f.complex, f.metric, 1, {Scheme::uniform_noise, mag, kTrials, seed}, limits);
      seed += kTrials;
      t.trials += s.trials.size();
      for (const auto& tr : s.trials) t.class_checks += tr.report.per_class.size();
      t.class_violations += s.class_violations();
      t.filtration_violations += s.filtration_violations();
      t.basis_changes += s.basis_changes();
    }
  }
  t.seconds = seconds_since(t0);
  return t;
}

Outcome ac5_class_stability(const SweepTotals& t) {
  Outcome o;
  if (t.trials != 3 * 3 * kTrials) o.fail(fmt("ran %zu trials", t.trials));
  if (t.class_violations) o.fail(fmt("%zu class violations", t.class_violations));
  if (t.seconds >= kStabilityBudgetS) o.fail(fmt("took %.1f s", t.seconds));
  if (o.pass) o.detail = fmt("%zu perturbations, %zu class checks, 0 violations, %.2f s", t.trials, t.class_checks, t.seconds);
  return o;
}

Outcome ac6_filtration_stability(const SweepTotals& t) {
  Outcome o;
  if (t.filtration_violations) o.fail(fmt("%zu filtration violations in the sweep", t.filtration_violations));
  const auto f = testkit::three_hole_disk();
  const auto m2 = perturb(f.metric, testkit::three_hole_disk_flip(f));
  const auto r = verify_filtration_stability(f.complex, f.metric, m2, 1);
  if (!r.filtration->basis_changed) o.fail("three_hole_disk perturbation did not change the basis");
  if (r.filtration->distance.value > r.epsilon + kBoundTol)
    o.fail(fmt("three_hole_disk distance %.6g > epsilon %.6g", r.filtration->distance.value, r.epsilon));
  if (o.pass)
    o.detail = fmt("sweep 0 violations (%zu basis changes); three_hole_disk basis changed, distance %.3g <= epsilon %.3g",
                   t.basis_changes, r.filtration->distance.value, r.epsilon);
  return o;
}

Outcome ac7_greedy_basis() {
  Outcome o;
  std::size_t bases = 0, sums = 0;
  for (const auto& name : testkit::fixture_names()) {
    const auto f = testkit::fixture(name);
    for (std::size_t d = 1; d < f.betti.size(); ++d) {
      if (f.betti[d] < 1 || f.betti[d] > 4) continue;
      const auto t = class_table(f.complex, f.metric, d);
      const auto b = greedy_basis(f.complex, t);
      ++bases;
      if (auto e = checks::not_spanned_by_smaller(f.complex, t, b); !e.empty()) o.fail(name + ": " + e);
      if (auto e = checks::spans_each_sublevel(f.complex, t, b); !e.empty()) o.fail(name + ": " + e);
      if (f.betti[d] > 3) continue;
      const auto sizes = checks::oracle_sizes(f.complex, f.metric, t);
      const double best = checks::min_independent_sum(f.complex, t, sizes);
      ++sums;
      if (std::abs(b.size_sum() - best) > kBoundTol) o.fail(fmt("%s: size sum %.12g, minimum %.12g", name.c_str(), b.size_sum(), best));
    }
  }
  if (o.pass) o.detail = fmt("%zu fixture bases pass both greedy-basis span checks; %zu size sums minimal", bases, sums);
  return o;
}

Outcome ac8_gf2() {
  Outcome o;
  std::mt19937_64 rng(8);
  std::size_t solvable = 0;
  for (std::size_t t = 0; t < kGf2Matrices; ++t) {
    const std::size_t rows = 1 + rng() % 8, cols = 1 + rng() % 8;
    const double density = std::uniform_real_distribution<double>(0.1, 0.7)(rng);
    std::bernoulli_distribution bit(density);
    BitMatrix a(rows, cols);
    oracle::Dense da(rows, oracle::Vec(cols, 0));
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c)
        if (bit(rng)) a.set(r, c), da[r][c] = 1;
    BitVector b(rows);
    oracle::Vec db(rows, 0);
    for (std::size_t r = 0; r < rows; ++r)
      if (rng() & 1) b.set(r), db[r] = 1;
    if (gf2::rank(a) != oracle::rank(da)) o.fail(fmt("rank mismatch on matrix %zu", t));
    const auto x = gf2::solve(a, b);
    if (x.has_value() != oracle::solvable(da, db, cols)) o.fail(fmt("solvability mismatch on matrix %zu", t));
    if (x) {
      ++solvable;
      if (!(a.multiply(*x) == b)) o.fail(fmt("solve output fails a x = b on matrix %zu", t));
    }
  }
  if (o.pass) o.detail = fmt("%zu matrices up to 8x8, %zu solutions re-verified", kGf2Matrices, solvable);
  return o;
}

std::pair<int, std::string> run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str()};
}

Outcome ac9_cli() {
  Outcome o;
  std::size_t fixtures = 0, commands = 0;
  const auto dir = std::filesystem::temp_directory_path() / ("homloc_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  for (const auto& name : testkit::fixture_names()) {
    const auto path = (dir / (name + ".cx")).string();
    auto [code, text] = run_cli({"export", name, "--out", path});
    const auto f = testkit::fixture(name);
    const auto back = io::read_file(path, {.default_lengths = false});
    if (code != 0 || !(back.complex == f.complex) || !(back.metric == f.metric)) o.fail(name + ": export/import differs");
    ++fixtures;
  }
  auto strip = [](const std::string& s) {
    auto j = nlohmann::ordered_json::parse(s);
    j.erase("timing");
    return j.dump();
  };
  const auto file = [&](const char* n) { return (dir / (std::string(n) + ".cx")).string(); };
  const std::vector<std::vector<std::string>> runs = {
      {"stability", file("torus_7"), "--dim", "1", "--magnitude", "0.05", "--trials", "25", "--seed", "9", "--jobs", "4"},
      {"stability", file("three_hole_disk"), "--dim", "1", "--scheme", "single_edge", "--magnitude", "0.3", "--trials", "10"},
      {"localize", file("annulus"), "--criterion", "diameter"},
      {"filtration", file("wedge_3_6"), "--dim", "1"},
      {"betti", file("rp2_6")},
  };
  for (const auto& args : runs) {
    const auto a = run_cli(args), b = run_cli(args);
    ++commands;
    if (a.first != 0 || b.first != 0 || strip(a.second) != strip(b.second)) o.fail("report differs between runs: " + args[0]);
  }
  std::filesystem::remove_all(dir);
  if (o.pass) o.detail = fmt("%zu fixtures round-trip; %zu seeded commands byte-identical modulo timing", fixtures, commands);
  return o;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](const char* id, const std::function<Outcome()>& f) {
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  };

  report("AC1", ac1_betti);
  report("AC2", ac2_contain_cycle);
  const auto instances = localization_instances(kRandomInstances);
  report("AC3", [&] { return ac3_min_radius(instances); });
  report("AC4", [&] { return ac4_two_approx(instances); });
  const auto sweeps = stability_sweeps();
  report("AC5", [&] { return ac5_class_stability(sweeps); });
  report("AC6", [&] { return ac6_filtration_stability(sweeps); });
  report("AC7", ac7_greedy_basis);
  report("AC8", ac8_gf2);
  report("AC9", ac9_cli);
  return failures;
}
