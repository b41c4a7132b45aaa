#pragma once

#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "homloc/basis.hpp"
#include "homloc/common.hpp"
#include "homloc/complex.hpp"
#include "homloc/homology.hpp"
#include "homloc/io.hpp"
#include "homloc/localize.hpp"
#include "homloc/metric.hpp"
#include "homloc/stability.hpp"
#include "homloc/testkit.hpp"

// The `homloc` command line. run() is the whole program minus process
// plumbing, so tests can drive it in-process.
namespace homloc::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kInputError = 2, kCapError = 3, kInternalError = 4 };

namespace detail {

// +inf (a class no ball carries) serializes as null.
inline Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

inline Json indices(const Chain& z) {
  Json a = Json::array();
  for (auto i : z.support.support()) a.push_back(i);
  return a;
}

inline Json chain_json(const SimplicialComplex& k, const Chain& z) {
  Json simplices = Json::array();
  for (auto i : z.support.support()) {
    Json s = Json::array();
    for (auto v : k.simplex(z.dim, i)) s.push_back(k.label(v));
    simplices.push_back(std::move(s));
  }
  return Json{{"dim", z.dim}, {"indices", indices(z)}, {"simplices", std::move(simplices)}};
}

// "D:i,j,k" -> chain of dimension D.
inline Chain parse_cycle_spec(const SimplicialComplex& k, const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw InputError("--cycle expects D:i,j,...; got '" + spec + "'");
  std::size_t d = 0;
  std::vector<std::size_t> idx;
  try {
    d = std::stoul(spec.substr(0, colon));
    std::stringstream rest(spec.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ','))
      if (!item.empty()) idx.push_back(std::stoul(item));
  } catch (const std::exception&) {
    throw InputError("--cycle expects D:i,j,...; got '" + spec + "'");
  }
  if (static_cast<int>(d) > k.max_dim()) throw InputError("--cycle dimension exceeds the complex");
  return chain_from_indices(k, d, idx);
}

struct Common {
  std::string file;
  std::size_t dim = 1;
};

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
};

inline Json envelope(const std::string& command, Json inputs) {
  return Json{{"schema", 1}, {"command", command}, {"inputs", std::move(inputs)}};
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Z2 homology with geodesic metrics: localization, optimal bases, stability", "homloc"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  std::size_t jobs = 1;
  std::optional<std::size_t> max_enum;
  std::string out_path;
  app.add_option("--jobs", jobs, "worker threads for per-center and per-trial maps")->check(CLI::PositiveNumber);
  app.add_option("--out", out_path, "write the report here instead of standard output");
  app.add_option("--max-enum", max_enum, "cap on n_{d+1} for exhaustive class enumeration");

  detail::Common c;
  auto add_file = [&](CLI::App* sub) { sub->add_option("file", c.file, "complex file")->required(); };
  auto add_dim = [&](CLI::App* sub) { sub->add_option("--dim", c.dim, "homology dimension"); };

  auto* index = app.add_subcommand("index", "list simplices with the indices chains refer to");
  add_file(index);

  auto* betti_cmd = app.add_subcommand("betti", "Betti numbers over Z2");
  add_file(betti_cmd);
  std::optional<std::size_t> betti_dim;
  betti_cmd->add_option("--dim", betti_dim, "only this dimension");

  auto* localize = app.add_subcommand("localize", "localize a homology class");
  add_file(localize);
  std::string criterion = "radius", weights_path, cycle_spec;
  std::size_t chain_no = 0;
  localize->add_option("--criterion", criterion, "radius | volume | diameter")
      ->check(CLI::IsMember({"radius", "volume", "diameter"}));
  localize->add_option("--weights", weights_path, "weight file (volume criterion)");
  localize->add_option("--chain", chain_no, "which chain line of the file to localize (0-based)");
  localize->add_option("--cycle", cycle_spec, "cycle as D:i,j,... instead of a chain line");

  auto* basis_cmd = app.add_subcommand("basis", "optimal homology basis");
  add_file(basis_cmd);
  add_dim(basis_cmd);

  auto* filt_cmd = app.add_subcommand("filtration", "subgroup filtration of the optimal basis");
  add_file(filt_cmd);
  add_dim(filt_cmd);

  auto* stab_cmd = app.add_subcommand("stability", "seeded perturbation sweep of class sizes and filtration");
  add_file(stab_cmd);
  add_dim(stab_cmd);
  std::string scheme = "uniform_noise";
  double magnitude = 0.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::optional<std::size_t> edge;
  stab_cmd->add_option("--scheme", scheme, "uniform_noise | single_edge | scale")
      ->check(CLI::IsMember({"uniform_noise", "single_edge", "scale"}));
  stab_cmd->add_option("--magnitude", magnitude, "perturbation magnitude");
  stab_cmd->add_option("--trials", trials, "number of perturbations");
  stab_cmd->add_option("--seed", seed, "trial t uses seed + t");
  stab_cmd->add_option("--edge", edge, "single_edge: perturb this edge index instead of a seeded one");

  auto* export_cmd = app.add_subcommand("export", "write a built-in fixture as a complex file");
  std::string fixture_name;
  bool list = false;
  export_cmd->add_option("fixture", fixture_name, "fixture name");
  export_cmd->add_flag("--list", list, "list fixture names");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "homloc: " << e.what() << "\n";
    return kInputError;
  }

  detail::Timer timer;
  Json report;
  std::string text;  // export writes a complex file rather than JSON
  try {
    Limits limits = Limits::from_env();
    if (max_enum) limits.max_enum_bits = *max_enum;
    limits.jobs = jobs;

    if (*export_cmd) {
      if (list) {
        for (const auto& n : testkit::fixture_names()) text += n + "\n";
      } else {
        if (fixture_name.empty()) throw InputError("export: name a fixture or pass --list");
        const auto f = testkit::fixture(fixture_name);
        std::vector<Chain> chains;
        if (f.query) chains.push_back(*f.query);
        text = "# fixture " + f.name + "\n" + io::to_string(f.complex, f.metric, chains);
      }
    } else {
      const auto file = io::read_file(c.file);
      const auto& k = file.complex;
      const auto& m = file.metric;
      Json inputs{{"file", c.file}};
      Json outputs;

      if (*index) {
        report = detail::envelope("index", inputs);
        Json dims = Json::array();
        for (int d = 0; d <= k.max_dim(); ++d) {
          Json list_d = Json::array();
          for (std::size_t i = 0; i < k.count(static_cast<std::size_t>(d)); ++i) {
            Json s = Json::array();
            for (auto v : k.simplex(static_cast<std::size_t>(d), i)) s.push_back(k.label(v));
            list_d.push_back(std::move(s));
          }
          dims.push_back(std::move(list_d));
        }
        outputs["simplices"] = std::move(dims);
        Json ls = Json::array();
        for (std::size_t e = 0; e < k.count(1); ++e) ls.push_back(m.length(e));
        outputs["lengths"] = std::move(ls);
      } else if (*betti_cmd) {
        if (betti_dim) inputs["dim"] = *betti_dim;
        report = detail::envelope("betti", inputs);
        if (betti_dim) {
          outputs["dim"] = *betti_dim;
          outputs["betti"] = betti(k, *betti_dim);
        } else {
          Json b = Json::array();
          for (int d = 0; d <= k.max_dim(); ++d) b.push_back(betti(k, static_cast<std::size_t>(d)));
          outputs["betti"] = std::move(b);
        }
      } else if (*localize) {
        Chain z0;
        if (!cycle_spec.empty()) {
          z0 = detail::parse_cycle_spec(k, cycle_spec);
          inputs["cycle"] = cycle_spec;
        } else {
          if (chain_no >= file.chains.size())
            throw InputError("the file has " + std::to_string(file.chains.size()) + " chain line(s); --chain " +
                             std::to_string(chain_no) + " is out of range");
          z0 = file.chains[chain_no];
          inputs["chain"] = chain_no;
        }
        inputs["criterion"] = criterion;
        if (!weights_path.empty()) inputs["weights"] = weights_path;
        inputs["max_enum"] = limits.max_enum_bits;
        report = detail::envelope("localize", inputs);

        LocalizationResult r;
        std::optional<WeightFunction> w;
        if (!weights_path.empty()) {
          if (criterion != "volume") throw InputError("--weights applies to the volume criterion only");
          w = io::read_weights(weights_path, k);
        }
        if (criterion == "radius")
          r = min_radius_cycle(k, m, z0, limits);
        else if (criterion == "volume")
          r = min_volume_cycle_exact(k, z0, w ? &*w : nullptr, limits);
        else
          r = min_diameter_cycle_exact(k, m, z0, limits);

        const DistanceTable dist(k, m);
        outputs["objective"] = std::string(to_string(r.objective));
        outputs["objective_value"] = detail::number(r.objective_value);
        if (r.center) outputs["center"] = k.label(*r.center);
        outputs["cycle"] = detail::chain_json(k, r.cycle);
        outputs["homologous"] = homologous(k, r.cycle, z0);
        outputs["volume"] = vol(r.cycle);
        outputs["diameter"] = detail::number(diam(k, dist, r.cycle));
        if (criterion == "diameter") {
          // Compare with the minimal-radius representative: diam(z_r) <= 2 diam(z_d).
          const auto zr = min_radius_cycle(k, m, z0, limits);
          const double dr = diam(k, dist, zr.cycle), dd = r.objective_value;
          outputs["radius_cycle_diameter"] = detail::number(dr);
          outputs["ratio"] = dd > 0.0 ? detail::number(dr / dd) : Json(nullptr);
          outputs["bound_holds"] = dr <= 2.0 * dd + kTolerance;
        }
      } else if (*basis_cmd || *filt_cmd) {
        inputs["dim"] = c.dim;
        report = detail::envelope(*basis_cmd ? "basis" : "filtration", inputs);
        const auto b = optimal_basis(k, m, c.dim, limits);
        Json classes = Json::array();
        for (const auto& cl : b.classes) {
          Json j{{"coefficients", cl.coefficients}, {"size", detail::number(cl.size.value)}};
          if (std::isfinite(cl.size.value)) j["center"] = k.label(cl.size.witness_center);
          j["cycle"] = detail::chain_json(k, cl.representative);
          classes.push_back(std::move(j));
        }
        outputs["beta"] = b.beta();
        if (*basis_cmd) {
          outputs["classes"] = std::move(classes);
          outputs["size_sum"] = detail::number(b.size_sum());
        } else {
          const auto x = filtration(b);
          Json sizes = Json::array();
          for (double s : x.sizes) sizes.push_back(detail::number(s));
          outputs["sizes"] = std::move(sizes);
          outputs["generators"] = std::move(classes);
        }
      } else if (*stab_cmd) {
        inputs["dim"] = c.dim;
        inputs["scheme"] = scheme;
        inputs["magnitude"] = magnitude;
        inputs["trials"] = trials;
        inputs["seed"] = seed;
        if (edge) inputs["edge"] = *edge;
        report = detail::envelope("stability", inputs);
        const Scheme sch = parse_scheme(scheme);
        if (edge && sch != Scheme::single_edge) throw InputError("--edge applies to the single_edge scheme only");

        SweepResult sweep;
        if (edge) {
          for (std::size_t t = 0; t < trials; ++t) {
            const Metric m2 = perturb(m, {sch, magnitude, seed + t, edge});
            sweep.trials.push_back({seed + t, verify_filtration_stability(k, m, m2, c.dim, limits)});
          }
        } else {
          sweep = stability_sweep(k, m, c.dim, {sch, magnitude, trials, seed}, limits);
        }
        Json rows = Json::array();
        double eps_max = 0.0, delta_max = 0.0, dist_max = 0.0;
        for (const auto& t : sweep.trials) {
          const auto& r = t.report;
          double delta = 0.0;
          for (const auto& pc : r.per_class) delta = std::max(delta, pc.delta);
          eps_max = std::max(eps_max, r.epsilon);
          delta_max = std::max(delta_max, delta);
          dist_max = std::max(dist_max, r.filtration->distance.value);
          rows.push_back(Json{{"seed", t.seed},
                              {"epsilon", r.epsilon},
                              {"max_class_delta", delta},
                              {"class_violations", r.class_violations()},
                              {"filtration_distance", r.filtration->distance.value},
                              {"filtration_pass", r.filtration->pass},
                              {"basis_changed", r.filtration->basis_changed}});
        }
        outputs["trials"] = std::move(rows);
        if (!sweep.trials.empty()) {
          outputs["epsilon"] = Json{{"max", eps_max}, {"max_class_delta", delta_max}, {"max_filtration_distance", dist_max}};
        }
        outputs["class_violations"] = sweep.class_violations();
        outputs["filtration_violations"] = sweep.filtration_violations();
        outputs["basis_changes"] = sweep.basis_changes();
        outputs["all_pass"] = sweep.class_violations() == 0 && sweep.filtration_violations() == 0;
      }
      report["outputs"] = std::move(outputs);
      report["timing"] = Json{{"wall_ms", timer.ms()}};
    }
  } catch (const CapExceeded& e) {
    err << "homloc: cap exceeded: " << e.what() << "\n";
    return kCapError;
  } catch (const Infeasible& e) {
    err << "homloc: infeasible: " << e.what() << "\n";
    return kCapError;
  } catch (const InputError& e) {
    err << "homloc: input error: " << e.what() << "\n";
    return kInputError;
  } catch (const InvariantViolation& e) {
    err << "homloc: internal invariant violated: " << e.what() << "\n";
    return kInternalError;
  } catch (const std::exception& e) {
    err << "homloc: internal error: " << e.what() << "\n";
    return kInternalError;
  }

  const std::string body = text.empty() && !report.is_null() ? report.dump(2) + "\n" : text;
  if (out_path.empty()) {
    out << body;
  } else {
    std::ofstream f(out_path);
    if (!f || !(f << body)) {
      err << "homloc: cannot write " << out_path << "\n";
      return kInputError;
    }
  }
  return kOk;
}

}  // namespace homloc::cli
