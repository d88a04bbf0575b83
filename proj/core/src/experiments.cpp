#include "choinet/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include <fmt/format.h>

#include "choinet/errors.hpp"

namespace choinet {
namespace {

constexpr double kTraceFloor = 1e-12;

double snap(double p) { return std::round(p * 1e12) / 1e12; }

std::string key_text(const OutcomeKey& key) {
  std::string s;
  for (std::size_t k = 0; k < key.size(); ++k) {
    if (k) s += ':';
    s += std::to_string(key[k]);
  }
  return s;
}

std::vector<std::string> key_columns(const LineNetwork& net) {
  std::vector<std::string> cols;
  if (!net.has_state_subject()) cols.emplace_back("i");
  for (std::size_t k = 0; k < net.left_blocks().size(); ++k) cols.push_back(fmt::format("b{}", k + 1));
  for (std::size_t k = 0; k < net.right_blocks().size(); ++k) cols.push_back(fmt::format("c{}", k + 1));
  return cols;
}

// sum over entries with non-negligible weight of tr(sigma) f(sigma_hat)
double weighted(const StateEnsemble& ens, const std::function<double(const QuantumState&)>& f) {
  double total = 0.0;
  for (const auto& e : ens.entries()) {
    if (e.weight() < kTraceFloor) continue;
    total += e.weight() * f(normalized_entry(e, ens.dims()));
  }
  return total;
}

QuantumState maximally_mixed(const Dims& dims) {
  const Index n = total_dim(dims);
  return QuantumState(identity(n) / static_cast<double>(n), dims);
}

// -- random network generation for the verification harness -------------------

std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::size_t check, int trial)
      : gen_(mix(mix(mix(seed) ^ check) ^ static_cast<std::uint64_t>(trial))) {}

  std::uint64_t seed() { return gen_(); }
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

  QuantumState state(Index d) { return random_state({d, d}, seed(), uniform(1, static_cast<int>(d * d))); }
  Povm povm(Index d) { return random_povm({d, d}, static_cast<std::size_t>(uniform(2, 3)), seed()); }

 private:
  std::mt19937_64 gen_;
};

struct Shape {
  std::vector<std::size_t> left;   // outcome counts per block
  std::vector<std::size_t> right;
};

Shape random_shape(TrialRng& rng, int min_blocks, int max_blocks) {
  Shape s;
  const int total = rng.uniform(min_blocks, max_blocks);
  for (int k = 0; k < total; ++k) {
    (rng.uniform(0, 1) ? s.right : s.left).push_back(static_cast<std::size_t>(rng.uniform(2, 3)));
  }
  return s;
}

std::vector<BlockSpec> random_blocks(TrialRng& rng, const std::vector<std::size_t>& outcomes, Index d) {
  std::vector<BlockSpec> blocks;
  for (auto n : outcomes) blocks.emplace_back(random_povm({d, d}, n, rng.seed()), rng.state(d));
  return blocks;
}

double block_weights(const LineNetwork& net) {
  double w = 1.0;
  for (const auto* side : {&net.left_blocks(), &net.right_blocks()}) {
    for (const auto& b : *side) w *= povm_weight_ppt(b.povm).value * weight_ppt(b.state).value;
  }
  return w;
}

// Subject measurement for the measurement-side checks: Bell, separable or generic.
MeasSubject random_meas_subject(TrialRng& rng, int trial) {
  Povm m = [&] {
    switch (trial % 3) {
      case 0:
        return bell_povm(2);
      case 1:
        return random_separable_povm({2, 2}, static_cast<std::size_t>(rng.uniform(2, 4)), rng.seed());
      default:
        return random_povm({2, 2}, static_cast<std::size_t>(rng.uniform(2, 4)), rng.seed());
    }
  }();
  const bool ideal = rng.uniform(0, 1) == 0;
  QuantumState omega0 = ideal ? max_entangled(2).state() : rng.state(2);
  QuantumState xi0 = ideal ? max_entangled(2).state() : rng.state(2);
  return MeasSubject(std::move(m), std::move(omega0), std::move(xi0));
}

struct Check {
  std::string name;
  double tol;
  // Returns the slack (bound - observed) of one trial.
  std::function<double(TrialRng&, int)> trial;
};

std::vector<Check> make_checks() {
  std::vector<Check> checks;

  auto state_robustness = [](NoiseSet noise) {
    return [noise](TrialRng& rng, int) {
      const QuantumState rho = rng.state(2);
      const Shape s = random_shape(rng, 1, 2);
      const LineNetwork net(random_blocks(rng, s.left, 2), random_blocks(rng, s.right, 2), StateSubject{rho});
      const StateEnsemble ens = evaluate_state_network(net);
      const double lhs = weighted(ens, [&](const QuantumState& x) { return robustness_ppt(x, noise).value; });
      return robustness_ppt(rho, noise).value - lhs;
    };
  };
  checks.push_back({"state_robustness", 1e-5, state_robustness(NoiseSet::All)});
  checks.push_back({"state_free_robustness", 1e-5, state_robustness(NoiseSet::Separable)});

  checks.push_back({"state_weight", 1e-5, [](TrialRng& rng, int) {
                      const QuantumState rho = rng.state(2);
                      const Shape s = random_shape(rng, 1, 2);
                      const LineNetwork net(random_blocks(rng, s.left, 2), random_blocks(rng, s.right, 2),
                                            StateSubject{rho});
                      const StateEnsemble ens = evaluate_state_network(net);
                      double bound = weight_ppt(rho).value;
                      for (const auto* side : {&net.left_blocks(), &net.right_blocks()}) {
                        for (const auto& b : *side) bound *= weight_ppt(b.state).value;
                      }
                      return bound - weighted(ens, [](const QuantumState& x) { return weight_ppt(x).value; });
                    }});

  auto shared_state = [](bool weight) {
    return [weight](TrialRng& rng, int) {
      const Shape s = random_shape(rng, 1, 2);
      const double probs[2] = {0.3, 0.7};
      std::vector<SharedRandomnessScenario::Branch> branches;
      double bound = 0.0;
      for (double p : probs) {
        const QuantumState rho = rng.state(2);
        LineNetwork net(random_blocks(rng, s.left, 2), random_blocks(rng, s.right, 2), StateSubject{rho});
        double b = weight ? weight_ppt(rho).value : generalized_robustness_ppt(rho).value;
        if (weight) {
          for (const auto* side : {&net.left_blocks(), &net.right_blocks()}) {
            for (const auto& blk : *side) b *= weight_ppt(blk.state).value;
          }
        }
        bound += p * b;
        branches.push_back({p, std::move(net)});
      }
      const StateEnsemble ens = evaluate_shared_randomness(SharedRandomnessScenario(std::move(branches)));
      return bound - weighted(ens, [&](const QuantumState& x) {
               return weight ? weight_ppt(x).value : generalized_robustness_ppt(x).value;
             });
    };
  };
  checks.push_back({"shared_state_robustness", 1e-5, shared_state(false)});
  checks.push_back({"shared_state_weight", 1e-5, shared_state(true)});

  auto meas_robustness = [](NoiseSet noise) {
    return [noise](TrialRng& rng, int trial) {
      MeasSubject subject = random_meas_subject(rng, trial);
      const double bound = povm_robustness_ppt(subject.m, noise).value;
      const Shape s = random_shape(rng, 0, 1);
      const LineNetwork net(random_blocks(rng, s.left, 2), random_blocks(rng, s.right, 2), std::move(subject));
      const StateEnsemble ens = evaluate_meas_network(net);
      return bound - weighted(ens, [&](const QuantumState& x) { return robustness_ppt(x, noise).value; });
    };
  };
  checks.push_back({"meas_robustness_all", 1e-5, meas_robustness(NoiseSet::All)});
  checks.push_back({"meas_robustness_sep", 1e-5, meas_robustness(NoiseSet::Separable)});

  checks.push_back({"network_weight", 1e-5, [](TrialRng& rng, int trial) {
                      MeasSubject subject = random_meas_subject(rng, trial);
                      const double w = povm_weight_ppt(subject.m).value * weight_ppt(subject.omega0).value *
                                       weight_ppt(subject.xi0).value;
                      const Shape s = random_shape(rng, 0, 1);
                      const LineNetwork net(random_blocks(rng, s.left, 2), random_blocks(rng, s.right, 2),
                                            std::move(subject));
                      const StateEnsemble ens = evaluate_meas_network(net);
                      return w * block_weights(net) -
                             weighted(ens, [](const QuantumState& x) { return weight_ppt(x).value; });
                    }});

  auto shared_meas = [](bool weight) {
    return [weight](TrialRng& rng, int trial) {
      const Shape s = random_shape(rng, 0, 1);
      const std::size_t outcomes = static_cast<std::size_t>(rng.uniform(2, 4));
      const double probs[2] = {0.3, 0.7};
      std::vector<SharedRandomnessScenario::Branch> branches;
      double bound = 0.0;
      for (int b = 0; b < 2; ++b) {
        Povm m = (trial + b) % 2 == 0 ? random_separable_povm({2, 2}, outcomes, rng.seed())
                                      : random_povm({2, 2}, outcomes, rng.seed());
        MeasSubject subject(std::move(m), rng.state(2), rng.state(2));
        double v = weight ? povm_weight_ppt(subject.m).value * weight_ppt(subject.omega0).value *
                                weight_ppt(subject.xi0).value
                          : povm_robustness_ppt(subject.m, NoiseSet::All).value;
        LineNetwork net(random_blocks(rng, s.left, 2), random_blocks(rng, s.right, 2), std::move(subject));
        if (weight) v *= block_weights(net);
        bound += probs[b] * v;
        branches.push_back({probs[b], std::move(net)});
      }
      const StateEnsemble ens = evaluate_shared_randomness(SharedRandomnessScenario(std::move(branches)));
      return bound - weighted(ens, [&](const QuantumState& x) {
               return weight ? weight_ppt(x).value : generalized_robustness_ppt(x).value;
             });
    };
  };
  checks.push_back({"shared_meas_robustness", 1e-5, shared_meas(false)});
  checks.push_back({"shared_network_weight", 1e-5, shared_meas(true)});

  checks.push_back({"schmidt_monotonicity", 0.0, [](TrialRng& rng, int) {
                      const int r = rng.uniform(1, 3);
                      const QuantumState rho = random_pure({3, 3}, r, rng.seed()).state();
                      const Shape s = random_shape(rng, 1, 2);
                      const LineNetwork net(random_blocks(rng, s.left, 3), random_blocks(rng, s.right, 3),
                                            StateSubject{rho});
                      const StateEnsemble ens = evaluate_state_network(net);
                      int k = 1;
                      for (const auto& e : ens.entries()) k = std::max(k, sn_operator_lower_bound(e.state, ens.dims()));
                      return static_cast<double>(r - k);
                    }});

  checks.push_back({"witness_soundness", 0.0, [](TrialRng& rng, int trial) {
                      const Index d = 2 + trial % 2;
                      const QuantumState rho = random_separable_state({d, d}, 10, rng.seed());
                      return static_cast<double>(1 - sn_state_lower_bound(rho));
                    }});

  checks.push_back({"separable_povm_ppt", 1e-8, [](TrialRng& rng, int) {
                      const Povm m = random_separable_povm({2, 2}, static_cast<std::size_t>(rng.uniform(2, 4)),
                                                           rng.seed());
                      const StateEnsemble ens = evaluate_bilocality(rng.state(2), rng.state(2), m);
                      double worst = INFINITY;
                      for (const auto& e : ens.entries()) {
                        worst = std::min(worst, min_eigenvalue(hermitian_part(partial_transpose(e.state, ens.dims(), {1}))));
                      }
                      return worst;
                    }});
  return checks;
}

}  // namespace

// -- activation sweep --------------------------------------------------------

SweepSpec SweepSpec::linear(Index d, int k, double q, double p_min, double p_max, int steps) {
  if (steps < 1) throw InvalidArgument("activation sweep: steps must be >= 1");
  SweepSpec spec;
  spec.d = d;
  spec.k = k;
  spec.q = q;
  for (int i = 0; i < steps; ++i) {
    const double p = steps == 1 ? p_min : p_min + (p_max - p_min) * static_cast<double>(i) / (steps - 1);
    spec.p_grid.push_back(snap(p));
  }
  return spec;
}

void SweepSpec::validate() const {
  if (d < 2) throw InvalidArgument(fmt::format("activation sweep: d = {} must be >= 2", d));
  if (k < 2 || k > d) throw InvalidArgument(fmt::format("activation sweep: k = {} outside [2, {}]", k, d));
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument(fmt::format("activation sweep: q = {} outside [0, 1]", q));
  if (q == 0.0) throw DegenerateTraceError("activation sweep: q = 0 leaves the heralded state with trace zero");
  if (p_grid.empty()) throw InvalidArgument("activation sweep: empty p grid");
  for (std::size_t i = 0; i < p_grid.size(); ++i) {
    if (!(p_grid[i] >= 0.0 && p_grid[i] <= 1.0)) {
      throw InvalidArgument(fmt::format("activation sweep: p = {} outside [0, 1]", p_grid[i]));
    }
    if (i > 0 && p_grid[i] < p_grid[i - 1]) throw InvalidArgument("activation sweep: p grid is not sorted");
  }
}

StateEnsemble activation_ensemble(Index d, double p, double q) {
  const QuantumState rho = isotropic_with_loss(d, p, q);
  const QuantumState flipped(swap_factors(rho.matrix(), rho.dims()), {d + 1, d});
  const ComplexMatrix e = embed(max_entangled(d).projector(), {d, d}, {d + 1, d + 1});
  const Povm povm({e, identity((d + 1) * (d + 1)) - e}, {d + 1, d + 1});
  return evaluate_bilocality(rho, flipped, povm);
}

std::vector<SweepRow> run_activation_sweep(const SweepSpec& spec, double tol_wit) {
  spec.validate();
  const double d = static_cast<double>(spec.d);
  const double threshold = (d * (spec.k - 1) - 1.0) / (d * d - 1.0);
  std::vector<SweepRow> rows;
  for (double p : spec.p_grid) {
    const StateEnsemble ens = activation_ensemble(spec.d, p, spec.q);
    const EnsembleEntry& hit = ens.entries().front();
    if (!(hit.weight() > 0.0)) throw DegenerateTraceError("activation sweep: heralded outcome has trace zero");
    SweepRow row;
    row.p = p;
    row.q = spec.q;
    row.one_way_bound = std::pow(1.0 - p, d - 1.0);
    row.one_way_ok = spec.q <= row.one_way_bound;
    row.witness_value = sn_witness_value(normalized_entry(hit, ens.dims()), spec.d, spec.k, tol_wit).witness_value;
    row.closed_form = 1.0 - (1.0 + (d * d - 1.0) * p * p) / (d * (spec.k - 1));
    row.certified = row.witness_value < -tol_wit;
    row.threshold_ok = p * p > threshold;
    if (std::abs(row.witness_value - row.closed_form) > 1e-8) {
      throw ConsistencyError(fmt::format("activation sweep: simulated witness {:.12g} differs from closed form {:.12g} "
                                         "at p = {}",
                                         row.witness_value, row.closed_form, p));
    }
    if (std::abs(p * p - threshold) > 1e-6 && row.certified != row.threshold_ok) {
      throw ConsistencyError(fmt::format("activation sweep: certification disagrees with the threshold at p = {}", p));
    }
    rows.push_back(row);
  }
  return rows;
}

Table sweep_table(const std::vector<SweepRow>& rows) {
  Table t;
  t.columns = {"p", "q", "one_way_bound", "one_way_ok", "witness_value", "closed_form", "certified", "threshold_ok"};
  for (const auto& r : rows) {
    t.add_row({r.p, r.q, r.one_way_bound, r.one_way_ok, r.witness_value, r.closed_form, r.certified, r.threshold_ok});
  }
  return t;
}

// -- bound verification ------------------------------------------------------

bool BoundReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.violations() == 0; });
}

BoundReport run_bound_verification(std::uint64_t seed, int trials, const VerifyOptions& opts) {
  if (trials < 1) throw InvalidArgument("verify-bounds: trials must be >= 1");
  BoundReport report;
  report.seed = seed;
  report.trials = trials;
  const auto checks = make_checks();
  for (std::size_t c = 0; c < checks.size(); ++c) {
    const auto& check = checks[c];
    if (!opts.only.empty() && check.name.find(opts.only) == std::string::npos) continue;
    BoundCheck result;
    result.name = check.name;
    result.worst_slack = INFINITY;
    for (int t = 0; t < trials; ++t) {
      TrialRng rng(seed, c, t);
      double slack = check.trial(rng, t);
      if (opts.corrupt) slack = -slack - 1e-3;
      ++result.trials;
      if (slack >= -check.tol) ++result.passed;
      result.worst_slack = std::min(result.worst_slack, slack);
    }
    report.checks.push_back(std::move(result));
  }
  return report;
}

Table bound_table(const BoundReport& report) {
  Table t;
  t.columns = {"check", "trials", "passed", "violations", "worst_slack"};
  for (const auto& c : report.checks) {
    t.add_row({c.name, std::int64_t{c.trials}, std::int64_t{c.passed}, std::int64_t{c.violations()}, c.worst_slack});
  }
  return t;
}

// -- per-entry quantifiers ---------------------------------------------------

Measure parse_measure(const std::string& name) {
  if (name == "grob") return Measure::GeneralizedRobustness;
  if (name == "fixed-rob") return Measure::FixedNoiseRobustness;
  if (name == "weight") return Measure::Weight;
  if (name == "sn") return Measure::SchmidtNumber;
  throw InvalidArgument(fmt::format("unknown measure '{}'", name));
}

const char* to_string(Measure m) {
  switch (m) {
    case Measure::GeneralizedRobustness:
      return "grob";
    case Measure::FixedNoiseRobustness:
      return "fixed-rob";
    case Measure::Weight:
      return "weight";
    case Measure::SchmidtNumber:
      return "sn";
  }
  return "?";
}

Table quantify_table(const LineNetwork& net, const QuantifyOptions& opts) {
  const StateEnsemble ens = evaluate_network(net, opts.evaluation);
  const Dims& dims = ens.dims();
  if (opts.noise && opts.measure == Measure::FixedNoiseRobustness && opts.noise->dims() != dims) {
    throw InvalidArgument("quantify: the noise state must live on the end-point dims");
  }
  const QuantumState eta = opts.noise.value_or(maximally_mixed(dims));

  auto state_value = [&](const QuantumState& x) -> QuantifierResult {
    switch (opts.measure) {
      case Measure::GeneralizedRobustness:
        return robustness_ppt(x, opts.noise_set);
      case Measure::FixedNoiseRobustness:
        return fixed_noise_robustness(x, x.dims() == eta.dims() ? eta : maximally_mixed(x.dims()));
      case Measure::Weight:
        return weight_ppt(x);
      case Measure::SchmidtNumber: {
        QuantifierResult r;
        r.value = r.lower = r.upper = sn_operator_lower_bound(x.matrix(), x.dims());
        return r;
      }
    }
    return {};
  };

  Table t;
  t.columns = {"kind", "key", "trace", "value", "status", "measure", "free_set"};
  const std::string measure = to_string(opts.measure);
  const std::string free_set = opts.measure == Measure::SchmidtNumber ? "-" : "PPT";
  double bound = 0.0;
  for (const auto& e : ens.entries()) {
    if (e.weight() < kTraceFloor) {
      t.add_row({std::string("entry"), key_text(e.key), e.weight(), NAN, std::string("skipped"), measure, free_set});
      continue;
    }
    const QuantifierResult r = state_value(normalized_entry(e, dims));
    bound = opts.measure == Measure::SchmidtNumber ? std::max(bound, r.value) : bound + e.weight() * r.value;
    t.add_row({std::string("entry"), key_text(e.key), e.weight(), r.value, std::string(to_string(r.status)), measure,
               free_set});
  }
  t.add_row({std::string("bound"), std::string(""), ens.total_weight(), bound, std::string(""), measure, free_set});

  QuantifierResult subject;
  if (const auto* s = std::get_if<StateSubject>(&net.subject())) {
    subject = opts.measure == Measure::SchmidtNumber
                  ? [&] {
                      QuantifierResult r;
                      r.value = sn_operator_lower_bound(s->rho.matrix(), s->rho.dims());
                      return r;
                    }()
                  : state_value(s->rho);
  } else {
    const auto& ms = std::get<MeasSubject>(net.subject());
    switch (opts.measure) {
      case Measure::GeneralizedRobustness:
        subject = povm_robustness_ppt(ms.m, opts.noise_set);
        break;
      case Measure::Weight:
        subject = povm_weight_ppt(ms.m);
        break;
      case Measure::SchmidtNumber:
        subject.value = sn_povm_lower_bound(ms.m, default_sn_probes(ms.m, 10, opts.seed));
        break;
      case Measure::FixedNoiseRobustness:
        throw InvalidArgument("quantify: fixed-rob is defined for state subjects only");
    }
  }
  t.add_row({std::string("subject"), std::string(""), 1.0, subject.value, std::string(to_string(subject.status)),
             measure, free_set});
  return t;
}

Table ensemble_table(const LineNetwork& net, const StateEnsemble& ensemble) {
  Table t;
  t.columns = key_columns(net);
  t.columns.emplace_back("trace");
  t.columns.emplace_back("min_pt_eigenvalue");
  for (const auto& e : ensemble.entries()) {
    std::vector<Cell> row;
    for (auto k : e.key) row.emplace_back(static_cast<std::int64_t>(k));
    row.emplace_back(e.weight());
    row.emplace_back(min_eigenvalue(hermitian_part(partial_transpose(e.state, ensemble.dims(), {1}))));
    t.add_row(std::move(row));
  }
  return t;
}

}  // namespace choinet
