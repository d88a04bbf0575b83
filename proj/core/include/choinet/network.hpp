#pragma once

// Line networks with trusted endpoints and their end-point state ensembles.
//
// Every BlockSpec is oriented from the subject outward: its POVM acts on
// {incoming, mid} and its state on {mid, outgoing}. Left blocks act on the
// subject's first factor, right blocks on its second; blocks are listed nearest
// the subject first.

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "choinet/choi.hpp"

namespace choinet {

struct BlockSpec {
  BlockSpec(Povm povm, QuantumState state);

  Povm povm;
  QuantumState state;

  Index in_dim() const { return povm.dims()[0]; }
  Index out_dim() const { return state.dims()[1]; }
  LocalOp op(std::size_t outcome) const;
};

struct StateSubject {
  QuantumState rho;
};

/// Bipartite measurement M on {d_B, d_B'} between omega0 on {d_A, d_B} and
/// xi0 on {d_B', d_C}.
struct MeasSubject {
  MeasSubject(Povm m, QuantumState omega0, QuantumState xi0);

  Povm m;
  QuantumState omega0;
  QuantumState xi0;
};

using Subject = std::variant<StateSubject, MeasSubject>;

class LineNetwork {
 public:
  LineNetwork(std::vector<BlockSpec> left, std::vector<BlockSpec> right, Subject subject);

  const std::vector<BlockSpec>& left_blocks() const noexcept { return left_; }
  const std::vector<BlockSpec>& right_blocks() const noexcept { return right_; }
  const Subject& subject() const noexcept { return subject_; }
  bool has_state_subject() const noexcept { return std::holds_alternative<StateSubject>(subject_); }

  /// End-point dims {d_left, d_right}.
  Dims endpoint_dims() const;

  /// Outcome counts in enumeration order: (subject outcomes?, left blocks, right blocks).
  std::vector<std::size_t> outcome_shape() const;

 private:
  std::vector<BlockSpec> left_;
  std::vector<BlockSpec> right_;
  Subject subject_;
};

using OutcomeKey = std::vector<std::size_t>;

struct EnsembleEntry {
  OutcomeKey key;
  ComplexMatrix state;  // subnormalised
  double weight() const { return state.trace().real(); }
};

/// Outcome-indexed subnormalised end-point states in row-major key order.
class StateEnsemble {
 public:
  StateEnsemble(std::vector<EnsembleEntry> entries, Dims dims);

  const std::vector<EnsembleEntry>& entries() const noexcept { return entries_; }
  const Dims& dims() const noexcept { return dims_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const EnsembleEntry& at(const OutcomeKey& key) const;

  double total_weight() const;

  /// Throws ValidationError unless every entry is PSD within tol.psd and the
  /// weights sum to one within `sum_tol`.
  void validate(const Tolerances& tol = default_tolerances(), double sum_tol = 1e-8) const;

 private:
  std::vector<EnsembleEntry> entries_;
  Dims dims_;
};

/// sigma / tr(sigma) as a state. PSD slack scales with 1/tr(sigma) so rounding in
/// low-weight entries is not rejected; throws DegenerateTraceError below 1e-12.
QuantumState normalized_entry(const EnsembleEntry& entry, const Dims& dims);

struct EvaluationOptions {
  std::size_t tuple_cap = 4096;
};

/// sigma_b = tr_{BB'}((1 x B_b x 1)(rho1 x rho2)), factor order A, B, B', C.
StateEnsemble evaluate_bilocality(const QuantumState& rho1, const QuantumState& rho2, const Povm& povm);

/// sigma_{b,c} = (A_b x A~_c)(rho).
StateEnsemble evaluate_state_network(const LineNetwork& net, const EvaluationOptions& opts = {});

/// sigma_{i,b,c} = (A_b o S*_omega0 x A~_c o S*_xi0)(M_i).
StateEnsemble evaluate_meas_network(const LineNetwork& net, const EvaluationOptions& opts = {});

/// Dispatches on the subject kind.
StateEnsemble evaluate_network(const LineNetwork& net, const EvaluationOptions& opts = {});

struct SharedRandomnessScenario {
  struct Branch {
    double probability;
    LineNetwork network;
  };
  explicit SharedRandomnessScenario(std::vector<Branch> branches);
  std::vector<Branch> branches;
};

/// Entrywise p(lambda)-mixture of the branch ensembles.
StateEnsemble evaluate_shared_randomness(const SharedRandomnessScenario& s, const EvaluationOptions& opts = {});

}  // namespace choinet
