#pragma once

// Validated physical objects (states, effects, POVMs) and their canonical families.

#include <cstdint>
#include <vector>

#include "choinet/matrix.hpp"

namespace choinet {

/// Density operator: Hermitian, PSD and unit trace within tolerance.
class QuantumState {
 public:
  QuantumState(ComplexMatrix mat, Dims dims, const Tolerances& tol = default_tolerances());

  const ComplexMatrix& matrix() const noexcept { return mat_; }
  const Dims& dims() const noexcept { return dims_; }
  Index dim() const noexcept { return mat_.rows(); }

  /// Reduced state on the given factors.
  QuantumState marginal(const FactorSet& keep) const;

 private:
  ComplexMatrix mat_;
  Dims dims_;
};

/// Hermitian PSD operator with 0 <= trace <= 1.
class SubnormalizedState {
 public:
  SubnormalizedState(ComplexMatrix mat, Dims dims, const Tolerances& tol = default_tolerances());

  const ComplexMatrix& matrix() const noexcept { return mat_; }
  const Dims& dims() const noexcept { return dims_; }
  double weight() const { return mat_.trace().real(); }

  /// Unit-trace version; throws DegenerateTraceError when the weight is zero.
  QuantumState normalized() const;

 private:
  ComplexMatrix mat_;
  Dims dims_;
};

class Povm {
 public:
  Povm(std::vector<ComplexMatrix> effects, Dims dims, const Tolerances& tol = default_tolerances());

  const std::vector<ComplexMatrix>& effects() const noexcept { return effects_; }
  const ComplexMatrix& effect(std::size_t i) const { return effects_.at(i); }
  const Dims& dims() const noexcept { return dims_; }
  std::size_t outcomes() const noexcept { return effects_.size(); }
  Index dim() const { return total_dim(dims_); }

 private:
  std::vector<ComplexMatrix> effects_;
  Dims dims_;
};

class PureState {
 public:
  PureState(ComplexVector vec, Dims dims, const Tolerances& tol = default_tolerances());

  const ComplexVector& vector() const noexcept { return vec_; }
  const Dims& dims() const noexcept { return dims_; }
  ComplexMatrix projector() const { return vec_ * vec_.adjoint(); }
  QuantumState state() const { return QuantumState(projector(), dims_); }

 private:
  ComplexVector vec_;
  Dims dims_;
};

/// Checks Hermiticity and positivity of a single effect (0 <= E, optionally E <= 1).
void validate_effect(const ComplexMatrix& effect, const Dims& dims, bool bounded_by_identity,
                     const Tolerances& tol = default_tolerances());

// -- canonical families ------------------------------------------------------

/// (1/sqrt d) sum_i |ii> on dims {d, d}.
PureState max_entangled(Index d);

/// The d^2 projectors onto (1 x W_{a,b})|psi+_d>, W_{a,b} = shift^a clock^b,
/// ordered a-major.
Povm bell_povm(Index d);

/// p |psi+><psi+| + (1 - p) I/d^2 on {d, d}.
QuantumState isotropic(Index d, double p);

/// q p psi+ + q (1-p) I/d^2 + (1-q) (I/d) x |0><0| on {d, d+1}; the second
/// factor holds the d signal levels first and the vacuum flag at level d.
QuantumState isotropic_with_loss(Index d, double p, double q);

// -- seeded random instances -------------------------------------------------
//
// All generators use std::mt19937_64 seeded with `seed` and
// std::normal_distribution<double>, so results reproduce bit for bit with the same
// standard library.

/// G G^dagger / tr(G G^dagger) with a complex Gaussian G of the given column count
/// (rank = 0 means full rank).
QuantumState random_state(const Dims& dims, std::uint64_t seed, Index rank = 0);

/// {G_i G_i^dagger} normalised as S^{-1/2} (.) S^{-1/2}, S = sum_i G_i G_i^dagger.
Povm random_povm(const Dims& dims, std::size_t outcomes, std::uint64_t seed);

/// Pure bipartite state with exactly `schmidt_rank` Schmidt terms.
PureState random_pure(const Dims& dims, Index schmidt_rank, std::uint64_t seed);

/// Convex mixture of `terms` random product states (each factor a random mixed state).
QuantumState random_separable_state(const Dims& dims, std::size_t terms, std::uint64_t seed);

/// Separable POVM: random local POVMs A^l x B^l mixed with weights p_l and
/// coarse-grained onto `outcomes` labels, so every effect is sum_a A_a x B_a.
Povm random_separable_povm(const Dims& dims, std::size_t outcomes, std::uint64_t seed);

}  // namespace choinet
