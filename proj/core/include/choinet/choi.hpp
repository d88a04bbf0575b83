#pragma once

// Generalized Choi isomorphism: states and effects viewed as local operations.
//
// All maps are evaluated by direct contraction of their defining trace formulas;
// none of them materialises a Choi matrix. The maps are linear, so every `apply`
// accepts arbitrary (not necessarily Hermitian) square inputs, which is what the
// block-wise action on one tensor factor needs.

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "choinet/objects.hpp"

namespace choinet {

/// Which factor of a bipartite state the incoming effect acts on.
enum class Side { First = 0, Second = 1 };

/// Assemblage member S*_rho(B) = tr_B(rho (1 x B)) for `measured == Side::Second`
/// (the default), or tr_A(rho (B x 1)) for `Side::First`; it lives on the other
/// factor. Validates 0 <= B <= 1.
SubnormalizedState steer_heisenberg(const QuantumState& rho, const ComplexMatrix& effect,
                                    Side measured = Side::Second);

/// S_rho(tau) = tr_A(rho (tau x 1)); maps operators on factor 0 to factor 1.
ComplexMatrix steer_schrodinger(const QuantumState& rho, const ComplexMatrix& tau);

/// B'(tau) = tr_B(E (tau x 1)) for an effect E on dims {d_B, d_B'}.
ComplexMatrix meas_op(const ComplexMatrix& effect, const Dims& dims, const ComplexMatrix& tau);

/// A state together with the cached eigensystem of its first-factor marginal,
/// which the channel picture needs.
class ChannelPair {
 public:
  explicit ChannelPair(QuantumState state, double tol_psd = default_tolerances().psd);

  const QuantumState& state() const noexcept { return state_; }
  const ComplexMatrix& marginal() const noexcept { return marginal_; }
  const EigenSystem& marginal_eigensystem() const noexcept { return eig_; }
  bool full_rank() const noexcept { return full_rank_; }

  /// rho_A^{1/2} and rho_A^{-1/2} built from the cached eigensystem.
  ComplexMatrix marginal_sqrt() const;
  ComplexMatrix marginal_inv_sqrt() const;

  /// Transpose in the eigenbasis of rho_A: V (V^dagger X V)^T V^dagger. For a
  /// degenerate rho_A this depends on the eigenbasis the solver returned.
  ComplexMatrix eigenbasis_transpose(const ComplexMatrix& x) const;

 private:
  QuantumState state_;
  ComplexMatrix marginal_;
  EigenSystem eig_;
  bool full_rank_;
};

/// Lambda*_rho(B) = rho_A^{-1/2} (tr_B(rho (1 x B)))^{T_e} rho_A^{-1/2}; unital.
/// Throws SingularMarginalError for rank-deficient rho_A.
ComplexMatrix channel_heisenberg(const ChannelPair& cp, const ComplexMatrix& effect);

/// Lambda_rho(tau) = tr_A(rho ((rho_A^{-1/2} tau^{T_e} rho_A^{-1/2}) x 1)); trace preserving.
ComplexMatrix channel_schrodinger(const ChannelPair& cp, const ComplexMatrix& tau);

/// Linear map held by its generating data. Immutable; `apply` is pure.
/// Building blocks are completely positive; the two steering maps have a partial
/// transpose of their state as Choi operator, so they are CP only for PPT states.
class LocalOp {
 public:
  struct Identity {
    Index dim;
  };
  struct SteeringHeisenberg {
    QuantumState state;
    Side measured;
  };
  struct SteeringSchrodinger {
    QuantumState state;
  };
  struct Measurement {
    ComplexMatrix effect;
    Dims dims;
  };
  struct BuildingBlock {
    ComplexMatrix effect;
    Dims effect_dims;
    QuantumState state;
  };
  struct Chain {
    std::vector<LocalOp> ops;
  };
  using Kind = std::variant<Identity, SteeringHeisenberg, SteeringSchrodinger, Measurement, BuildingBlock, Chain>;

  static LocalOp identity(Index dim);
  static LocalOp steering_heisenberg(QuantumState state, Side measured = Side::Second);
  static LocalOp steering_schrodinger(QuantumState state);
  static LocalOp measurement(ComplexMatrix effect, Dims dims);
  /// E_{effect, state}: measure `effect` on {d_in, d_mid}, then steer through
  /// `state` on {d_mid, d_out}.
  static LocalOp building_block(ComplexMatrix effect, Dims effect_dims, QuantumState state);
  /// Composition applied left to right (ops[0] first). An empty chain is the
  /// identity on any dimension and reports in_dim() == out_dim() == 0.
  static LocalOp chain(std::vector<LocalOp> ops);

  Index in_dim() const noexcept { return in_dim_; }
  Index out_dim() const noexcept { return out_dim_; }
  const Kind& kind() const noexcept { return *kind_; }

  ComplexMatrix apply(const ComplexMatrix& x) const;

  /// Applies the op to half of |psi+_{in}> and checks the (unnormalised) output
  /// is PSD within `tol`; a numerical complete-positivity probe.
  bool probe_complete_positivity(double tol = default_tolerances().psd) const;

 private:
  LocalOp(std::shared_ptr<const Kind> kind, Index in_dim, Index out_dim)
      : kind_(std::move(kind)), in_dim_(in_dim), out_dim_(out_dim) {}

  std::shared_ptr<const Kind> kind_;
  Index in_dim_;
  Index out_dim_;
};

/// Convenience alias for building_block.
LocalOp building_block(const ComplexMatrix& effect, const Dims& effect_dims, const QuantumState& state2);

/// (op x id)(m) for `side == First` or (id x op)(m) for `Second`, with m on {d0, d1}.
ComplexMatrix apply_on_factor(const LocalOp& op, const ComplexMatrix& m, const Dims& dims, Side side);

/// (left x right)(m) on a bipartite operator.
ComplexMatrix apply_local(const LocalOp& left, const LocalOp& right, const ComplexMatrix& m, const Dims& dims);

}  // namespace choinet
