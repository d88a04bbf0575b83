#include "choinet/network.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "choinet/errors.hpp"

namespace choinet {
namespace {

void check_chain(const std::vector<BlockSpec>& blocks, Index start, const char* side) {
  Index current = start;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    if (blocks[k].in_dim() != current) {
      throw ValidationError("network.chain", fmt::format("{} block {} expects an incoming dimension {} but the chain "
                                                         "delivers {}",
                                                         side, k, blocks[k].in_dim(), current));
    }
    current = blocks[k].out_dim();
  }
}

Index chain_out(const std::vector<BlockSpec>& blocks, Index start) {
  return blocks.empty() ? start : blocks.back().out_dim();
}

// Row-major enumeration of all outcome tuples for the given shape.
std::vector<OutcomeKey> enumerate(const std::vector<std::size_t>& shape, std::size_t cap) {
  std::size_t total = 1;
  for (auto s : shape) {
    if (s == 0) return {};
    if (total > cap / s + 1) throw ResourceLimitError(fmt::format("network: outcome tuples exceed the cap of {}", cap));
    total *= s;
  }
  if (total > cap) {
    throw ResourceLimitError(fmt::format("network: {} outcome tuples exceed the cap of {}", total, cap));
  }
  std::vector<OutcomeKey> keys;
  keys.reserve(total);
  OutcomeKey key(shape.size(), 0);
  for (std::size_t t = 0; t < total; ++t) {
    keys.push_back(key);
    for (std::size_t k = shape.size(); k-- > 0;) {
      if (++key[k] < shape[k]) break;
      key[k] = 0;
    }
  }
  return keys;
}

LocalOp chain_for(const std::vector<BlockSpec>& blocks, const OutcomeKey& key, std::size_t offset) {
  std::vector<LocalOp> ops;
  ops.reserve(blocks.size());
  for (std::size_t k = 0; k < blocks.size(); ++k) ops.push_back(blocks[k].op(key[offset + k]));
  return LocalOp::chain(std::move(ops));
}

// Applies left/right chains to a bipartite operator for every (b, c) tuple;
// `prefix` is prepended to each key. Each entry depends only on its own key.
void push_block_outcomes(const LineNetwork& net, const ComplexMatrix& core, const Dims& core_dims,
                         const OutcomeKey& prefix, std::size_t cap, std::vector<EnsembleEntry>& out) {
  std::vector<std::size_t> shape;
  for (const auto& b : net.left_blocks()) shape.push_back(b.povm.outcomes());
  for (const auto& b : net.right_blocks()) shape.push_back(b.povm.outcomes());
  const auto keys = enumerate(shape, cap);
  const std::size_t m = net.left_blocks().size();
  for (const auto& key : keys) {
    const LocalOp left = chain_for(net.left_blocks(), key, 0);
    const LocalOp right = chain_for(net.right_blocks(), key, m);
    OutcomeKey full = prefix;
    full.insert(full.end(), key.begin(), key.end());
    out.push_back({std::move(full), apply_local(left, right, core, core_dims)});
  }
}

}  // namespace

BlockSpec::BlockSpec(Povm povm_in, QuantumState state_in) : povm(std::move(povm_in)), state(std::move(state_in)) {
  if (povm.dims().size() != 2 || state.dims().size() != 2) {
    throw ValidationError("block.bipartite", "block POVM and state must both be bipartite");
  }
  if (povm.dims()[1] != state.dims()[0]) {
    throw ValidationError("block.interface", fmt::format("POVM second factor has dimension {} but the state's first "
                                                         "factor has dimension {}",
                                                         povm.dims()[1], state.dims()[0]));
  }
}

LocalOp BlockSpec::op(std::size_t outcome) const {
  return LocalOp::building_block(povm.effect(outcome), povm.dims(), state);
}

MeasSubject::MeasSubject(Povm m_in, QuantumState omega0_in, QuantumState xi0_in)
    : m(std::move(m_in)), omega0(std::move(omega0_in)), xi0(std::move(xi0_in)) {
  if (m.dims().size() != 2 || omega0.dims().size() != 2 || xi0.dims().size() != 2) {
    throw ValidationError("subject.bipartite", "measurement, omega0 and xi0 must all be bipartite");
  }
  if (omega0.dims()[1] != m.dims()[0]) {
    throw ValidationError("subject.interface", fmt::format("omega0 second factor ({}) does not match the measurement's "
                                                           "first factor ({})",
                                                           omega0.dims()[1], m.dims()[0]));
  }
  if (xi0.dims()[0] != m.dims()[1]) {
    throw ValidationError("subject.interface", fmt::format("xi0 first factor ({}) does not match the measurement's "
                                                           "second factor ({})",
                                                           xi0.dims()[0], m.dims()[1]));
  }
}

LineNetwork::LineNetwork(std::vector<BlockSpec> left, std::vector<BlockSpec> right, Subject subject)
    : left_(std::move(left)), right_(std::move(right)), subject_(std::move(subject)) {
  Index d_left = 0;
  Index d_right = 0;
  if (const auto* s = std::get_if<StateSubject>(&subject_)) {
    if (s->rho.dims().size() != 2) throw ValidationError("subject.bipartite", "subject state must be bipartite");
    d_left = s->rho.dims()[0];
    d_right = s->rho.dims()[1];
  } else {
    const auto& ms = std::get<MeasSubject>(subject_);
    d_left = ms.omega0.dims()[0];
    d_right = ms.xi0.dims()[1];
  }
  check_chain(left_, d_left, "left");
  check_chain(right_, d_right, "right");
}

Dims LineNetwork::endpoint_dims() const {
  if (const auto* s = std::get_if<StateSubject>(&subject_)) {
    return {chain_out(left_, s->rho.dims()[0]), chain_out(right_, s->rho.dims()[1])};
  }
  const auto& ms = std::get<MeasSubject>(subject_);
  return {chain_out(left_, ms.omega0.dims()[0]), chain_out(right_, ms.xi0.dims()[1])};
}

std::vector<std::size_t> LineNetwork::outcome_shape() const {
  std::vector<std::size_t> shape;
  if (const auto* ms = std::get_if<MeasSubject>(&subject_)) shape.push_back(ms->m.outcomes());
  for (const auto& b : left_) shape.push_back(b.povm.outcomes());
  for (const auto& b : right_) shape.push_back(b.povm.outcomes());
  return shape;
}

StateEnsemble::StateEnsemble(std::vector<EnsembleEntry> entries, Dims dims)
    : entries_(std::move(entries)), dims_(std::move(dims)) {
  const Index n = total_dim(dims_);
  for (const auto& e : entries_) {
    if (e.state.rows() != n || e.state.cols() != n) throw InvalidArgument("StateEnsemble: entry dimension mismatch");
  }
}

const EnsembleEntry& StateEnsemble::at(const OutcomeKey& key) const {
  const auto it = std::find_if(entries_.begin(), entries_.end(), [&](const auto& e) { return e.key == key; });
  if (it == entries_.end()) throw InvalidArgument("StateEnsemble: no entry with the requested outcome key");
  return *it;
}

double StateEnsemble::total_weight() const {
  double sum = 0.0;
  for (const auto& e : entries_) sum += e.weight();
  return sum;
}

void StateEnsemble::validate(const Tolerances& tol, double sum_tol) const {
  for (std::size_t k = 0; k < entries_.size(); ++k) {
    const double herm = hermiticity_error(entries_[k].state);
    if (herm > tol.herm) {
      throw ValidationError("ensemble.hermitian", fmt::format("entry {} has hermiticity error {:.3e}", k, herm));
    }
    const double lmin = min_eigenvalue(entries_[k].state);
    if (lmin < -tol.psd) {
      throw ValidationError("ensemble.psd", fmt::format("entry {} has eigenvalue {:.3e}", k, lmin));
    }
  }
  const double total = total_weight();
  if (std::abs(total - 1.0) > sum_tol) {
    throw ValidationError("ensemble.normalization", fmt::format("weights sum to {:.12g}", total));
  }
}

QuantumState normalized_entry(const EnsembleEntry& entry, const Dims& dims) {
  const double tr = entry.weight();
  if (!(tr >= 1e-12)) throw DegenerateTraceError(fmt::format("ensemble entry has trace {:.3e}", tr));
  Tolerances tol = default_tolerances();
  tol.psd = std::max(tol.psd, 1e-14 / tr);
  tol.herm = std::max(tol.herm, 1e-14 / tr);
  return QuantumState(hermitian_part(entry.state) / tr, dims, tol);
}

StateEnsemble evaluate_bilocality(const QuantumState& rho1, const QuantumState& rho2, const Povm& povm) {
  if (rho1.dims().size() != 2 || rho2.dims().size() != 2 || povm.dims().size() != 2) {
    throw InvalidArgument("evaluate_bilocality: states and POVM must be bipartite");
  }
  if (rho1.dims()[1] != povm.dims()[0] || rho2.dims()[0] != povm.dims()[1]) {
    throw InvalidArgument(fmt::format("evaluate_bilocality: POVM dims {{{}, {}}} do not match the inner factors {} and {}",
                                      povm.dims()[0], povm.dims()[1], rho1.dims()[1], rho2.dims()[0]));
  }
  const LocalOp s1 = LocalOp::steering_heisenberg(rho1, Side::Second);
  const LocalOp s2 = LocalOp::steering_heisenberg(rho2, Side::First);
  std::vector<EnsembleEntry> entries;
  for (std::size_t b = 0; b < povm.outcomes(); ++b) {
    entries.push_back({{b}, hermitian_part(apply_local(s1, s2, povm.effect(b), povm.dims()))});
  }
  return StateEnsemble(std::move(entries), {rho1.dims()[0], rho2.dims()[1]});
}

StateEnsemble evaluate_state_network(const LineNetwork& net, const EvaluationOptions& opts) {
  const auto* subject = std::get_if<StateSubject>(&net.subject());
  if (subject == nullptr) throw InvalidArgument("evaluate_state_network: subject is not a state");
  std::vector<EnsembleEntry> entries;
  push_block_outcomes(net, subject->rho.matrix(), subject->rho.dims(), {}, opts.tuple_cap, entries);
  for (auto& e : entries) e.state = hermitian_part(e.state);
  return StateEnsemble(std::move(entries), net.endpoint_dims());
}

StateEnsemble evaluate_meas_network(const LineNetwork& net, const EvaluationOptions& opts) {
  const auto* subject = std::get_if<MeasSubject>(&net.subject());
  if (subject == nullptr) throw InvalidArgument("evaluate_meas_network: subject is not a measurement");
  std::size_t per_outcome = 1;
  for (const auto& b : net.left_blocks()) per_outcome *= b.povm.outcomes();
  for (const auto& b : net.right_blocks()) per_outcome *= b.povm.outcomes();
  if (per_outcome * subject->m.outcomes() > opts.tuple_cap) {
    throw ResourceLimitError(fmt::format("network: {} outcome tuples exceed the cap of {}",
                                         per_outcome * subject->m.outcomes(), opts.tuple_cap));
  }
  const LocalOp s_left = LocalOp::steering_heisenberg(subject->omega0, Side::Second);
  const LocalOp s_right = LocalOp::steering_heisenberg(subject->xi0, Side::First);
  const Dims core_dims{subject->omega0.dims()[0], subject->xi0.dims()[1]};
  std::vector<EnsembleEntry> entries;
  for (std::size_t i = 0; i < subject->m.outcomes(); ++i) {
    const ComplexMatrix core = apply_local(s_left, s_right, subject->m.effect(i), subject->m.dims());
    push_block_outcomes(net, core, core_dims, {i}, opts.tuple_cap, entries);
  }
  for (auto& e : entries) e.state = hermitian_part(e.state);
  return StateEnsemble(std::move(entries), net.endpoint_dims());
}

StateEnsemble evaluate_network(const LineNetwork& net, const EvaluationOptions& opts) {
  return net.has_state_subject() ? evaluate_state_network(net, opts) : evaluate_meas_network(net, opts);
}

SharedRandomnessScenario::SharedRandomnessScenario(std::vector<Branch> branches_in) : branches(std::move(branches_in)) {
  if (branches.empty()) throw ValidationError("shared_randomness.nonempty", "need at least one branch");
  double total = 0.0;
  for (const auto& b : branches) {
    if (!(b.probability >= 0.0)) throw ValidationError("shared_randomness.probability", "probabilities must be >= 0");
    total += b.probability;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw ValidationError("shared_randomness.normalization", fmt::format("probabilities sum to {:.12g}", total));
  }
}

StateEnsemble evaluate_shared_randomness(const SharedRandomnessScenario& s, const EvaluationOptions& opts) {
  std::vector<EnsembleEntry> mixed;
  Dims dims;
  for (std::size_t k = 0; k < s.branches.size(); ++k) {
    const auto& branch = s.branches[k];
    const StateEnsemble ens = evaluate_network(branch.network, opts);
    if (k == 0) {
      dims = ens.dims();
      mixed = ens.entries();
      for (auto& e : mixed) e.state *= branch.probability;
      continue;
    }
    if (ens.dims() != dims || ens.size() != mixed.size()) {
      throw InvalidArgument(fmt::format("evaluate_shared_randomness: branch {} has a different outcome structure", k));
    }
    for (std::size_t t = 0; t < mixed.size(); ++t) {
      if (ens.entries()[t].key != mixed[t].key) {
        throw InvalidArgument(fmt::format("evaluate_shared_randomness: branch {} enumerates different outcome keys", k));
      }
      mixed[t].state += branch.probability * ens.entries()[t].state;
    }
  }
  return StateEnsemble(std::move(mixed), dims);
}

}  // namespace choinet
