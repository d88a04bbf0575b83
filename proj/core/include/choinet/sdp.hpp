#pragma once

// Primal-dual interior-point solver for block Hermitian semidefinite programs:
//
//   minimise   sum_j Re tr(C_j X_j)
//   subject to the affine constraints of a ConeSpec, X_j in the block cones.
//
// Infeasible-start HKM search direction with a Mehrotra predictor-corrector step.

#include <cstddef>
#include <vector>

#include "choinet/cone.hpp"

namespace choinet {

struct ObjectiveTerm {
  std::size_t block = 0;
  ComplexMatrix c;  // Hermitian, same size as the block
};

struct SdpProblem {
  ConeSpec cone;
  std::vector<ObjectiveTerm> objective;
};

enum class SdpStatus { Optimal, MaxIter, Failed };

struct SdpOptions {
  int max_iter = 120;
  double tol = 1e-9;  // relative gap and relative infeasibilities
};

struct SdpResult {
  SdpStatus status = SdpStatus::Failed;
  double primal = 0.0;  // sum Re tr(C X) at the returned iterate
  double dual = 0.0;    // b^T y at the returned iterate
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  std::vector<ComplexMatrix> x;  // original (unlifted) blocks
};

SdpResult minimize(const SdpProblem& problem, const SdpOptions& opts = {});

}  // namespace choinet
