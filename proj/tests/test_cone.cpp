#include <gtest/gtest.h>

#include "choinet/cone.hpp"
#include "choinet/errors.hpp"
#include "choinet/objects.hpp"
#include "oracles/oracles.hpp"

using namespace choinet;

namespace {

// X in PSD ∩ PPT with X = rho.
ConeSpec ppt_membership(const QuantumState& rho) {
  ConeSpec spec;
  spec.blocks.push_back(ConeBlock::ppt(rho.dims(), {1}));
  spec.constraints.push_back({{{0, TermOp::Identity, 1.0}}, rho.matrix()});
  return spec;
}

}  // namespace

TEST(HermitianBasis, Orthonormal) {
  for (Index n : {1, 2, 3}) {
    const auto basis = hermitian_basis(n);
    ASSERT_EQ(basis.size(), static_cast<std::size_t>(n * n));
    for (std::size_t a = 0; a < basis.size(); ++a) {
      EXPECT_LT(hermiticity_error(basis[a]), 1e-15);
      for (std::size_t b = 0; b < basis.size(); ++b) {
        EXPECT_NEAR(real_inner(basis[a], basis[b]), a == b ? 1.0 : 0.0, 1e-14);
      }
    }
  }
}

TEST(Expand, PptBlockIsLifted) {
  const ExpandedSpec ex = expand(ppt_membership(max_entangled(2).state()));
  EXPECT_EQ(ex.original_blocks, 1u);
  EXPECT_EQ(ex.block_dims.size(), 2u);
  EXPECT_EQ(ex.rows.size(), 32u);  // 16 rows for X = rho, 16 for X^Gamma - W = 0
}

TEST(Feasibility, SeparableStatesAreFeasible) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const QuantumState rho = random_separable_state({2, 2}, 4, s);
    const FeasibilityResult r = feasibility(ppt_membership(rho));
    EXPECT_EQ(r.status, FeasibilityStatus::Feasible) << "seed " << s;
    ASSERT_EQ(r.point.size(), 1u);
    EXPECT_LT((r.point[0] - rho.matrix()).norm(), 1e-6);
  }
}

TEST(Feasibility, EntangledStateIsCertifiedInfeasible) {
  const FeasibilityResult r = feasibility(ppt_membership(max_entangled(2).state()));
  EXPECT_EQ(r.status, FeasibilityStatus::Infeasible);
  EXPECT_GT(r.margin, default_tolerances().sep);
}

TEST(Feasibility, NegativeTargetIsInfeasible) {
  ConeSpec spec;
  spec.blocks.push_back(ConeBlock::psd(2));
  ComplexMatrix rhs = identity(2);
  rhs(1, 1) = -1.0;
  spec.constraints.push_back({{{0, TermOp::Identity, 1.0}}, rhs});
  EXPECT_EQ(feasibility(spec).status, FeasibilityStatus::Infeasible);
}

TEST(Feasibility, ScalarAndTraceTerms) {
  // X >= 0 on C^2, t >= 0, X - t I = diag(0.3, 0.1), tr X = 1  ->  t = 0.3
  ConeSpec spec;
  spec.blocks = {ConeBlock::psd(2), ConeBlock::scalar()};
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 0.3;
  d(1, 1) = 0.1;
  spec.constraints.push_back({{{0, TermOp::Identity, 1.0}, {1, TermOp::ScalarIdentity, -1.0}}, d});
  spec.constraints.push_back({{{0, TermOp::Trace, 1.0}}, identity(1)});
  const FeasibilityResult r = feasibility(spec);
  ASSERT_EQ(r.status, FeasibilityStatus::Feasible);
  EXPECT_NEAR(r.point[1](0, 0).real(), 0.3, 1e-6);
  EXPECT_GT(oracle::min_eig(r.point[0]), -1e-7);
}

TEST(ConeSpec, ValidateRejectsBadShapes) {
  ConeSpec spec;
  spec.blocks.push_back(ConeBlock::psd(2));
  spec.constraints.push_back({{{0, TermOp::Identity, 1.0}}, identity(3)});
  EXPECT_THROW(spec.validate(), InvalidArgument);
  spec.constraints = {{{{5, TermOp::Identity, 1.0}}, identity(2)}};
  EXPECT_THROW(spec.validate(), InvalidArgument);
}
