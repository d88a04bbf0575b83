#include <gtest/gtest.h>

#include "choinet/errors.hpp"
#include "choinet/objects.hpp"
#include "oracles/oracles.hpp"

using namespace choinet;

namespace {

oracle::Dims od(const Dims& d) { return oracle::Dims(d.begin(), d.end()); }

ComplexMatrix random_square(Index n, unsigned seed) {
  std::srand(seed);
  return ComplexMatrix::Random(n, n);
}

}  // namespace

TEST(Jacobi, MatchesKnownSpectra) {
  const auto ev = oracle::jacobi_eigvals(partial_transpose(max_entangled(2).projector(), {2, 2}, {1}));
  ASSERT_EQ(ev.size(), 4u);
  EXPECT_NEAR(ev[0], -0.5, 1e-12);
  for (int i = 1; i < 4; ++i) EXPECT_NEAR(ev[i], 0.5, 1e-12);

  ComplexMatrix pauli_y(2, 2);
  pauli_y << 0, Complex(0, -1), Complex(0, 1), 0;
  const auto y = oracle::jacobi_eigvals(pauli_y);
  EXPECT_NEAR(y[0], -1.0, 1e-12);
  EXPECT_NEAR(y[1], 1.0, 1e-12);
}

TEST(Matrix, EigenvaluesAgreeWithJacobi) {
  for (unsigned s = 0; s < 10; ++s) {
    const Index n = 2 + s % 7;
    const ComplexMatrix a = random_square(n, s);
    const ComplexMatrix h = a + a.adjoint();
    const RealVector lib = eigvals_hermitian(h);
    const auto ref = oracle::jacobi_eigvals(h);
    for (Index i = 0; i < n; ++i) EXPECT_NEAR(lib(n - 1 - i), ref[static_cast<std::size_t>(i)], 1e-10);
    EXPECT_NEAR(min_eigenvalue(h), ref.front(), 1e-10);
  }
}

TEST(Matrix, PartialTraceMatchesLoops) {
  const Dims dims{2, 3, 2};
  const ComplexMatrix m = random_square(12, 3);
  for (const FactorSet& keep : {FactorSet{0}, FactorSet{1}, FactorSet{2}, FactorSet{0, 2}, FactorSet{1, 2}}) {
    std::vector<int> k(keep.begin(), keep.end());
    EXPECT_LT((partial_trace(m, dims, keep) - oracle::partial_trace(m, od(dims), k)).norm(), 1e-12);
  }
}

TEST(Matrix, PartialTransposeMatchesLoops) {
  const Dims dims{3, 2};
  const ComplexMatrix m = random_square(6, 4);
  EXPECT_LT((partial_transpose(m, dims, {1}) - oracle::partial_transpose(m, od(dims), 1)).norm(), 1e-14);
  EXPECT_LT((partial_transpose(m, dims, {0}) - oracle::partial_transpose(m, od(dims), 0)).norm(), 1e-14);
  EXPECT_LT((partial_transpose(m, dims, {0, 1}) - m.transpose()).norm(), 1e-14);
}

TEST(Matrix, SwapFactorsMatchesPlacement) {
  const Dims dims{2, 3};
  const ComplexMatrix a = random_square(2, 5);
  const ComplexMatrix b = random_square(3, 6);
  EXPECT_LT((swap_factors(kron(a, b), dims) - kron(b, a)).norm(), 1e-14);
}

TEST(Matrix, EmbedPadsEachFactor) {
  const ComplexMatrix p = max_entangled(2).projector();
  const ComplexMatrix e = embed(p, {2, 2}, {3, 3});
  ASSERT_EQ(e.rows(), 9);
  EXPECT_NEAR(e.trace().real(), 1.0, 1e-14);
  EXPECT_NEAR(e(0, 4).real(), 0.5, 1e-14);  // |00><11|, 11 -> index 1*3+1
}

TEST(Matrix, SqrtAndInverseSqrt) {
  const QuantumState rho = random_state({2, 2}, 9);
  const ComplexMatrix s = mat_sqrt(rho.matrix());
  EXPECT_LT((s * s - rho.matrix()).norm(), 1e-12);
  const ComplexMatrix is = mat_inv_sqrt(rho.matrix());
  EXPECT_LT((is * rho.matrix() * is - identity(4)).norm(), 1e-9);
}

TEST(Matrix, DimensionErrors) {
  EXPECT_THROW(check_dims(identity(4), {2, 3}), InvalidArgument);
  EXPECT_THROW(partial_trace(identity(4), {2, 2}, {2}), InvalidArgument);
  EXPECT_THROW(mat_sqrt(-identity(2)), NotPsdError);
}
