#pragma once

// Batch experiments behind the command line tool: the activation sweep for two
// lossy isotropic states in a bilocality network, the randomized bound
// verification harness, and per-entry quantifier tables for a configured network.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "choinet/config.hpp"
#include "choinet/quantifiers.hpp"
#include "choinet/report.hpp"

namespace choinet {

// -- activation sweep --------------------------------------------------------

struct SweepSpec {
  Index d = 3;
  int k = 2;
  std::vector<double> p_grid;
  double q = 1.0;

  /// Evenly spaced grid from p_min to p_max, each point snapped to 1e-12.
  static SweepSpec linear(Index d, int k, double q, double p_min, double p_max, int steps);

  /// Throws InvalidArgument unless 2 <= k <= d, the grid is sorted and every
  /// value lies in [0, 1]; throws DegenerateTraceError for q = 0.
  void validate() const;
};

struct SweepRow {
  double p = 0.0;
  double q = 0.0;
  double one_way_bound = 0.0;  // (1 - p)^(d - 1)
  bool one_way_ok = false;     // q <= one_way_bound
  double witness_value = 0.0;  // tr(W_k sigma_hat) from the simulated network
  double closed_form = 0.0;    // 1 - (1 + (d^2 - 1) p^2) / (d (k - 1))
  bool certified = false;      // witness_value < -tol_wit
  bool threshold_ok = false;   // p^2 > (d (k - 1) - 1) / (d^2 - 1)
};

/// Bilocality network of two copies of rho_{p,q}: the first copy on {d, d+1}
/// as is, the second with its factors swapped, and the POVM {psi+_d, 1 - psi+_d}
/// with psi+_d zero-padded to (d+1) x (d+1).
StateEnsemble activation_ensemble(Index d, double p, double q);

/// Throws ConsistencyError if a simulated witness differs from the closed form by
/// more than 1e-8, or certification disagrees with the threshold more than 1e-6
/// away from it.
std::vector<SweepRow> run_activation_sweep(const SweepSpec& spec, double tol_wit = default_tolerances().wit);

Table sweep_table(const std::vector<SweepRow>& rows);

// -- bound verification ------------------------------------------------------

struct BoundCheck {
  std::string name;
  int trials = 0;
  int passed = 0;
  double worst_slack = 0.0;  // min over trials of (bound - observed)
  int violations() const { return trials - passed; }
};

struct BoundReport {
  std::uint64_t seed = 0;
  int trials = 0;
  std::vector<BoundCheck> checks;
  bool all_passed() const;
};

struct VerifyOptions {
  double slack_tol = 1e-5;
  /// Harness self-test: every slack s is replaced by -s - 1e-3, so each check
  /// must report violations.
  bool corrupt = false;
  /// Restrict to checks whose name contains this text (empty: all).
  std::string only;
};

/// Seeded random 2x2 networks (up to two blocks) checked against every network
/// inequality: state robustness and weight bounds, their shared-randomness forms,
/// measurement robustness (all and separable noise) and weight bounds, their
/// shared-randomness forms, Schmidt-number monotonicity, witness soundness, and
/// PPT ensembles from separable POVMs.
BoundReport run_bound_verification(std::uint64_t seed, int trials, const VerifyOptions& opts = {});

Table bound_table(const BoundReport& report);

// -- per-entry quantifiers ---------------------------------------------------

enum class Measure { GeneralizedRobustness, FixedNoiseRobustness, Weight, SchmidtNumber };

Measure parse_measure(const std::string& name);
const char* to_string(Measure m);

struct QuantifyOptions {
  Measure measure = Measure::GeneralizedRobustness;
  NoiseSet noise_set = NoiseSet::All;
  /// Noise for fixed-rob on the end-point space; maximally mixed when absent.
  std::optional<QuantumState> noise;
  std::uint64_t seed = 1;
  EvaluationOptions evaluation;
};

/// One row per ensemble entry, then a "bound" row (trace-weighted sum, or max
/// for sn) and a "subject" row with the quantifier of the subject itself.
Table quantify_table(const LineNetwork& net, const QuantifyOptions& opts);

/// Outcome keys, trace and minimum partial-transpose eigenvalue of every entry.
Table ensemble_table(const LineNetwork& net, const StateEnsemble& ensemble);

}  // namespace choinet
