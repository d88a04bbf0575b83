// choinet command line front end.
//
// Output columns (CSV header order, frozen):
//   ensemble          i?, b1..bm, c1..cn, trace, min_pt_eigenvalue
//   quantify          kind, key, trace, value, status, measure, free_set
//   activation-sweep  p, q, one_way_bound, one_way_ok, witness_value, closed_form,
//                     certified, threshold_ok
//   verify-bounds     check, trials, passed, violations, worst_slack
//
// Exit codes: 0 success, 1 validation error or bound violation, 2 usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "choinet/config.hpp"
#include "choinet/errors.hpp"
#include "choinet/experiments.hpp"

namespace {

using namespace choinet;

struct Globals {
  std::string tol;
  std::size_t tuple_cap = 0;
  std::string format = "csv";
  std::string out;
};

void emit(const Globals& g, const Table& table) {
  const std::string text = render(table, g.format == "json" ? OutputFormat::Json : OutputFormat::Csv);
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw InvalidArgument(fmt::format("cannot write --out {}", g.out));
  f << text;
}

EvaluationOptions evaluation(const Globals& g, const ConfigOptions& opts) {
  EvaluationOptions ev;
  if (opts.tuple_cap) ev.tuple_cap = *opts.tuple_cap;
  if (g.tuple_cap) ev.tuple_cap = g.tuple_cap;
  return ev;
}

int fail(const std::string& what) {
  std::cerr << "choinet: error: " << what << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Line-network entanglement and Schmidt-number toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--tol", g.tol, "Tolerances: a number (psd) or key=value list; applied on top of CHOINET_TOL");
  app.add_option("--tuple-cap", g.tuple_cap, "Maximum number of outcome tuples")->check(CLI::PositiveNumber);
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", g.out, "Write output to this file instead of stdout");

  std::string config_path;
  auto* ensemble = app.add_subcommand("ensemble", "Evaluate a network and list its ensemble");
  ensemble->add_option("--config", config_path, "Network config JSON")->required();

  std::string measure = "grob";
  std::string noise_path;
  std::string noise_set = "all";
  auto* quantify = app.add_subcommand("quantify", "Quantify every ensemble entry and the subject");
  quantify->add_option("--config", config_path, "Network config JSON")->required();
  quantify->add_option("--measure", measure, "Quantifier")->check(CLI::IsMember({"grob", "fixed-rob", "weight", "sn"}));
  quantify->add_option("--noise", noise_path, "State document with the fixed noise (fixed-rob)");
  quantify->add_option("--noise-set", noise_set, "Noise set for grob")->check(CLI::IsMember({"all", "separable"}));

  Index d = 3;
  int k = 2;
  double q = 1.0;
  double p_min = 0.0;
  double p_max = 1.0;
  int steps = 11;
  auto* sweep = app.add_subcommand("activation-sweep", "Schmidt-number activation in a bilocality network");
  sweep->add_option("--d", d, "Local dimension")->check(CLI::Range(2, 16));
  sweep->add_option("--k", k, "Witness order");
  sweep->add_option("--q", q, "Transmission probability");
  sweep->add_option("--p-min", p_min, "First visibility");
  sweep->add_option("--p-max", p_max, "Last visibility");
  sweep->add_option("--steps", steps, "Grid points")->check(CLI::PositiveNumber);

  std::uint64_t seed = 1;
  int trials = 100;
  VerifyOptions verify_opts;
  auto* verify = app.add_subcommand("verify-bounds", "Check every network inequality on random networks");
  verify->add_option("--seed", seed, "Seed");
  verify->add_option("--trials", trials, "Trials per check")->check(CLI::PositiveNumber);
  verify->add_option("--only", verify_opts.only, "Run only checks whose name contains this text");
  verify->add_flag("--corrupt", verify_opts.corrupt, "Harness self-test: flip every slack");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    Tolerances tol = default_tolerances();
    if (const char* env = std::getenv("CHOINET_TOL"); env && *env) {
      try {
        tol = parse_tolerances(env, tol);
      } catch (const InvalidArgument& e) {
        throw InvalidArgument(std::string("CHOINET_TOL: ") + e.what());
      }
    }
    if (!g.tol.empty()) {
      try {
        tol = parse_tolerances(g.tol, tol);
      } catch (const InvalidArgument& e) {
        throw InvalidArgument(std::string("--tol: ") + e.what());
      }
    }
    set_default_tolerances(tol);

    if (*ensemble) {
      const NetworkConfig cfg = load_network_config(config_path);
      const StateEnsemble ens = evaluate_network(cfg.network, evaluation(g, cfg.options));
      ens.validate(default_tolerances());
      emit(g, ensemble_table(cfg.network, ens));
    } else if (*quantify) {
      const NetworkConfig cfg = load_network_config(config_path);
      QuantifyOptions opts;
      opts.measure = parse_measure(measure);
      opts.noise_set = noise_set == "separable" ? NoiseSet::Separable : NoiseSet::All;
      if (!noise_path.empty()) opts.noise = load_state(noise_path);
      opts.seed = cfg.options.seed.value_or(1);
      opts.evaluation = evaluation(g, cfg.options);
      emit(g, quantify_table(cfg.network, opts));
    } else if (*sweep) {
      const SweepSpec spec = SweepSpec::linear(d, k, q, p_min, p_max, steps);
      emit(g, sweep_table(run_activation_sweep(spec, default_tolerances().wit)));
    } else if (*verify) {
      const BoundReport report = run_bound_verification(seed, trials, verify_opts);
      emit(g, bound_table(report));
      if (!report.all_passed()) {
        for (const auto& c : report.checks) {
          if (c.violations() > 0) {
            std::cerr << fmt::format("choinet: violation: {} failed {} of {} trials (worst slack {})\n", c.name,
                                     c.violations(), c.trials, format_number(c.worst_slack));
          }
        }
        return 1;
      }
    }
  } catch (const ValidationError& e) {
    return fail(fmt::format("invariant violated: {}", e.what()));
  } catch (const ParseError& e) {
    return fail(fmt::format("malformed config: {}", e.what()));
  } catch (const InvalidArgument& e) {
    return fail(e.what());
  } catch (const std::exception& e) {
    return fail(e.what());
  }
  return 0;
}
