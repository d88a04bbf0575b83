#pragma once

// Block-structured cone programs over Hermitian matrices and the Dykstra
// alternating-projection feasibility engine.
//
// A ConeSpec has variable blocks X_j, each constrained to the PSD cone or to
// PSD intersected with PPT, and affine constraints of the form
//   sum_t coef_t * op_t(X_{block_t}) = rhs
// with a Hermitian right-hand side.

#include <cstddef>
#include <vector>

#include "choinet/matrix.hpp"

namespace choinet {

enum class ConeKind { Psd, PsdPpt };

struct ConeBlock {
  Index dim = 1;
  ConeKind kind = ConeKind::Psd;
  Dims dims;     // tensor structure, needed for PartialTranspose terms and PsdPpt
  FactorSet on;  // factors transposed by PartialTranspose terms and the PPT test

  static ConeBlock psd(Index dim);
  static ConeBlock psd(Dims dims, FactorSet on);
  static ConeBlock ppt(Dims dims, FactorSet on);
  /// 1x1 block, i.e. a nonnegative real scalar.
  static ConeBlock scalar();
};

enum class TermOp {
  Identity,          // X                 (rhs has the block's size)
  PartialTranspose,  // X^Gamma           (rhs has the block's size)
  ScalarIdentity,    // x * I             (1x1 block, any rhs size)
  Trace              // tr(X)             (1x1 rhs)
};

struct Term {
  std::size_t block = 0;
  TermOp op = TermOp::Identity;
  double coef = 1.0;
};

struct AffineConstraint {
  std::vector<Term> terms;
  ComplexMatrix rhs;
};

struct ConeSpec {
  std::vector<ConeBlock> blocks;
  std::vector<AffineConstraint> constraints;

  /// Throws InvalidArgument on size mismatches or out-of-range block indices.
  void validate() const;
};

/// Real scalar rows sum_j Re tr(A_kj X_j) = b_k. Every PsdPpt block is lifted to
/// a PSD block plus an extra PSD block W_j with X_j^Gamma - W_j = 0, so the
/// expanded problem only has PSD blocks; the original blocks keep their indices.
struct ExpandedSpec {
  struct Part {
    std::size_t block;
    ComplexMatrix a;
  };
  std::vector<Index> block_dims;
  std::vector<std::vector<Part>> rows;
  RealVector rhs;
  std::size_t original_blocks = 0;
};

/// Each Hermitian equality is split over the orthonormal basis E_aa,
/// (E_ab + E_ba)/sqrt2, i(E_ab - E_ba)/sqrt2.
ExpandedSpec expand(const ConeSpec& spec);

/// Orthonormal basis of n x n Hermitian matrices under Re tr(A B).
std::vector<ComplexMatrix> hermitian_basis(Index n);

enum class FeasibilityStatus { Feasible, Infeasible, Undecided };

struct FeasibilityOptions {
  int max_iter = 5000;
  double tol_feas = default_tolerances().feas;
  double tol_sep = default_tolerances().sep;
};

struct FeasibilityResult {
  FeasibilityStatus status = FeasibilityStatus::Undecided;
  std::vector<ComplexMatrix> point;  // original blocks, in the cone, when feasible
  double residual = 0.0;             // affine residual of the last cone iterate
  double margin = 0.0;               // separation margin of the last certificate attempt
  int iterations = 0;
};

/// Dykstra alternating projections between the affine set and the product of
/// PSD cones. Feasible when the cone iterate meets the affine constraints within
/// tol_feas. Infeasible when a Farkas-type certificate y with A^T y in -K (up to
/// tol_feas) and b^T y / |A^T y| > tol_sep is found.
FeasibilityResult feasibility(const ConeSpec& spec, const FeasibilityOptions& opts = {});

}  // namespace choinet
