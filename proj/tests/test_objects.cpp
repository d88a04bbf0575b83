#include <gtest/gtest.h>

#include "choinet/errors.hpp"
#include "choinet/objects.hpp"
#include "oracles/oracles.hpp"

using namespace choinet;

TEST(QuantumState, ValidationNamesInvariant) {
  ComplexMatrix m = identity(4) / 4.0;
  m(0, 1) = 0.1;
  try {
    QuantumState(m, {2, 2});
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.invariant(), "state.hermitian");
  }
  try {
    QuantumState(identity(4) / 2.0, {2, 2});
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.invariant(), "state.trace");
  }
  ComplexMatrix neg = identity(2);
  neg(1, 1) = -0.5;
  neg /= 0.5;
  try {
    QuantumState(neg / neg.trace().real(), {2});
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.invariant(), "state.psd");
  }
}

TEST(Povm, CompletenessIsChecked) {
  try {
    Povm({identity(4) * 0.5, identity(4) * 0.4}, {2, 2});
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.invariant(), "povm.completeness");
  }
}

TEST(Families, BellPovmIsComplete) {
  for (Index d : {2, 3}) {
    const Povm b = bell_povm(d);
    ASSERT_EQ(b.outcomes(), static_cast<std::size_t>(d * d));
    ComplexMatrix sum = ComplexMatrix::Zero(d * d, d * d);
    for (const auto& e : b.effects()) {
      sum += e;
      EXPECT_NEAR(e.trace().real(), 1.0, 1e-12);
      EXPECT_LT((e * e - e).norm(), 1e-12);
    }
    EXPECT_LT((sum - identity(d * d)).norm(), 1e-12);
    EXPECT_LT((b.effect(0) - max_entangled(d).projector()).norm(), 1e-12);
  }
}

TEST(Families, IsotropicSpectrum) {
  const QuantumState rho = isotropic(3, 0.6);
  const auto ev = oracle::jacobi_eigvals(rho.matrix());
  EXPECT_NEAR(ev.back(), 0.6 + 0.4 / 9, 1e-12);
  EXPECT_NEAR(ev.front(), 0.4 / 9, 1e-12);
}

TEST(Families, LossyIsotropicBlocks) {
  const QuantumState rho = isotropic_with_loss(3, 0.5, 0.2);
  EXPECT_EQ(rho.dims(), (Dims{3, 4}));
  // vacuum weight on the second factor
  const ComplexMatrix rb = partial_trace(rho.matrix(), rho.dims(), {1});
  EXPECT_NEAR(rb(3, 3).real(), 0.8, 1e-12);
  EXPECT_THROW(isotropic_with_loss(3, 1.5, 0.2), InvalidArgument);
}

TEST(Random, Reproducible) {
  EXPECT_EQ(random_state({2, 2}, 5).matrix(), random_state({2, 2}, 5).matrix());
  EXPECT_NE(random_state({2, 2}, 5).matrix(), random_state({2, 2}, 6).matrix());
}

TEST(Random, RankAndSchmidtRank) {
  const QuantumState r2 = random_state({2, 2}, 3, 2);
  const auto ev = oracle::jacobi_eigvals(r2.matrix());
  EXPECT_NEAR(ev[0], 0.0, 1e-12);
  EXPECT_NEAR(ev[1], 0.0, 1e-12);
  EXPECT_GT(ev[2], 1e-6);
  for (Index r = 1; r <= 3; ++r) {
    const PureState psi = random_pure({3, 3}, r, 11 + static_cast<std::uint64_t>(r));
    const auto lam = oracle::jacobi_eigvals(partial_trace(psi.projector(), {3, 3}, {0}));
    const long nonzero = std::count_if(lam.begin(), lam.end(), [](double x) { return x > 1e-10; });
    EXPECT_EQ(nonzero, r);
  }
}

TEST(Random, SeparableObjectsArePpt) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const QuantumState rho = random_separable_state({2, 3}, 6, s);
    EXPECT_GT(oracle::min_eig(oracle::partial_transpose(rho.matrix(), {2, 3}, 1)), -1e-12);
    const Povm m = random_separable_povm({2, 2}, 3, s);
    for (const auto& e : m.effects()) {
      EXPECT_GT(oracle::min_eig(oracle::partial_transpose(e, {2, 2}, 1)), -1e-12);
    }
  }
}
