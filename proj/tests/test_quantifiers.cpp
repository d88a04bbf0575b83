#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "choinet/errors.hpp"
#include "choinet/quantifiers.hpp"
#include "json.hpp"
#include "oracles/oracles.hpp"

using namespace choinet;

namespace {

bool ppt_oracle(const ComplexMatrix& m, const Dims& dims, double tol = 1e-7) {
  return oracle::min_eig(m) > -tol &&
         oracle::min_eig(oracle::partial_transpose(m, oracle::Dims(dims.begin(), dims.end()), 1)) > -tol;
}

nlohmann::json reference() {
  std::ifstream in(std::string(CHOINET_TEST_DATA) + "/quantifier_reference.json");
  return nlohmann::json::parse(in);
}

}  // namespace

TEST(Robustness, MaximallyEntangled) {
  for (Index d : {2, 3}) {
    const QuantifierResult r = generalized_robustness_ppt(max_entangled(d).state());
    EXPECT_EQ(r.status, QuantifierStatus::Converged);
    EXPECT_NEAR(r.value, static_cast<double>(d - 1), 1e-4);
    EXPECT_LE(r.lower, r.value + 1e-12);
  }
}

TEST(Robustness, CertificateDecomposes) {
  const QuantumState rho = random_state({2, 2}, 102);
  const QuantifierResult r = robustness_ppt(rho, NoiseSet::All);
  ASSERT_EQ(r.certificate.size(), 2u);
  const ComplexMatrix& tau = r.certificate[0];
  const ComplexMatrix& eta = r.certificate[1];
  EXPECT_LT((rho.matrix() + r.value * eta - (1 + r.value) * tau).norm(), 1e-7);
  EXPECT_TRUE(ppt_oracle(tau, {2, 2}));
  EXPECT_GT(oracle::min_eig(eta), -1e-7);
}

TEST(Robustness, SeparableNoiseIsNeverSmaller) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const QuantumState rho = random_state({2, 2}, 300 + s, 2);
    EXPECT_GE(robustness_ppt(rho, NoiseSet::Separable).value, robustness_ppt(rho, NoiseSet::All).value - 1e-7);
  }
}

TEST(FixedNoise, BellWithWhiteNoise) {
  const QuantifierResult r = fixed_noise_robustness(max_entangled(2).state(), QuantumState(identity(4) / 4.0, {2, 2}));
  EXPECT_NEAR(r.value, 2.0, 1e-6);
  EXPECT_LE(r.lower, 2.0 + 1e-9);
  EXPECT_GE(r.upper, 2.0 - 1e-9);
}

TEST(FixedNoise, IsotropicClosedForm) {
  // (iso_p + r I/d^2)/(1 + r) = iso_{p/(1+r)}, PPT iff p/(1+r) <= 1/(d+1)
  const QuantumState white(identity(9) / 9.0, {3, 3});
  for (double p : {0.1, 0.3, 0.5, 0.8, 1.0}) {
    const double expected = std::max(0.0, 4.0 * p - 1.0);
    EXPECT_NEAR(fixed_noise_robustness(isotropic(3, p), white).value, expected, 1e-8) << "p " << p;
  }
}

TEST(FixedNoise, DykstraRouteAgrees) {
  const QuantumState white(identity(4) / 4.0, {2, 2});
  for (std::uint64_t s = 0; s < 3; ++s) {
    const QuantumState rho = random_state({2, 2}, 400 + s, 1);
    EXPECT_NEAR(fixed_noise_robustness_dykstra(rho, white).value, fixed_noise_robustness(rho, white).value, 1e-5);
  }
}

TEST(FixedNoise, EntangledNoiseCanBeInfeasible) {
  const QuantumState psi = max_entangled(2).state();
  const QuantifierResult r = fixed_noise_robustness(psi, psi);
  EXPECT_EQ(r.status, QuantifierStatus::Infeasible);
  EXPECT_TRUE(std::isinf(r.value));
}

TEST(Weight, MaximallyEntangledAndSeparable) {
  EXPECT_NEAR(weight_ppt(max_entangled(2).state()).value, 1.0, 1e-3);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const QuantumState rho = random_separable_state({2, 2}, 5, 500 + s);
    EXPECT_NEAR(generalized_robustness_ppt(rho).value, 0.0, 1e-6);
    EXPECT_NEAR(weight_ppt(rho).value, 0.0, 1e-6);
    EXPECT_NEAR(fixed_noise_robustness(rho, QuantumState(identity(4) / 4.0, {2, 2})).value, 0.0, 1e-6);
  }
}

TEST(Reference, StatesAgreeWithConicSolver) {
  const auto ref = reference();
  for (const auto& s : ref["states"]) {
    const Dims dims{s["dims"][0].get<Index>(), s["dims"][1].get<Index>()};
    const QuantumState rho = random_state(dims, s["seed"].get<std::uint64_t>());
    const double tol = total_dim(dims) > 4 ? 1e-6 : 1e-8;
    EXPECT_NEAR(robustness_ppt(rho, NoiseSet::All).value, s["grob"].get<double>(), tol);
    EXPECT_NEAR(robustness_ppt(rho, NoiseSet::Separable).value, s["grob_sep"].get<double>(), tol);
    EXPECT_NEAR(weight_ppt(rho).value, s["weight"].get<double>(), tol);
  }
}

TEST(Reference, PovmsAgreeWithConicSolver) {
  const auto ref = reference();
  for (const auto& p : ref["povms"]) {
    const Povm m = random_povm({2, 2}, p["outcomes"].get<std::size_t>(), p["seed"].get<std::uint64_t>());
    EXPECT_NEAR(povm_robustness_ppt(m, NoiseSet::All).value, p["rob"].get<double>(), 1e-8);
    EXPECT_NEAR(povm_robustness_ppt(m, NoiseSet::Separable).value, p["rob_sep"].get<double>(), 1e-8);
    EXPECT_NEAR(povm_weight_ppt(m).value, p["weight"].get<double>(), 1e-8);
  }
}

TEST(PovmQuantifiers, BellAndSeparable) {
  const Povm bell = bell_povm(2);
  EXPECT_NEAR(povm_robustness_ppt(bell, NoiseSet::All).value, 1.0, 1e-6);
  EXPECT_NEAR(povm_weight_ppt(bell).value, 1.0, 1e-6);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Povm m = random_separable_povm({2, 2}, 3, 600 + s);
    EXPECT_NEAR(povm_robustness_ppt(m, NoiseSet::All).value, 0.0, 1e-6);
    EXPECT_NEAR(povm_weight_ppt(m).value, 0.0, 1e-6);
    EXPECT_TRUE(is_ppt(m.effect(0), m.dims()));
  }
  EXPECT_FALSE(is_ppt(bell.effect(0), bell.dims()));
}

TEST(PovmQuantifiers, CertificateIsAPptPovm) {
  const Povm m = random_povm({2, 2}, 2, 201);
  const QuantifierResult r = povm_robustness_ppt(m, NoiseSet::All);
  ASSERT_EQ(r.certificate.size(), 4u);
  ComplexMatrix sum = ComplexMatrix::Zero(4, 4);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_TRUE(ppt_oracle(r.certificate[i], {2, 2}));
    sum += r.certificate[i];
    EXPECT_LT((m.effect(i) - (1 + r.value) * r.certificate[i] + r.value * r.certificate[2 + i]).norm(), 1e-7);
  }
  EXPECT_LT((sum - identity(4)).norm(), 1e-7);
}

TEST(SchmidtNumber, Witness) {
  const WitnessReport w = sn_witness_value(max_entangled(3).state(), 3, 2);
  EXPECT_NEAR(w.witness_value, 1.0 - 3.0, 1e-12);
  EXPECT_TRUE(w.certified);
  EXPECT_THROW(sn_witness_value(max_entangled(3).state(), 3, 4), InvalidArgument);
  EXPECT_THROW(sn_witness_value(max_entangled(3).state(), 2, 2), InvalidArgument);
}

TEST(SchmidtNumber, MaximallyEntangled) {
  for (Index d = 2; d <= 4; ++d) EXPECT_EQ(sn_state_lower_bound(max_entangled(d).state()), d);
}

TEST(SchmidtNumber, IsotropicThresholds) {
  // SN(iso) >= k iff fidelity F = p + (1 - p)/d^2 exceeds (k - 1)/d
  const Index d = 4;
  for (int i = 0; i <= 20; ++i) {
    const double p = i / 20.0;
    const double f = p + (1 - p) / 16.0;
    int expected = 1;
    for (int k = 2; k <= d; ++k) {
      if (f > (k - 1) / 4.0 + 1e-9) expected = k;
    }
    if (std::abs(f * 4.0 - std::round(f * 4.0)) < 1e-6) continue;
    EXPECT_EQ(sn_state_lower_bound(isotropic(d, p)), expected) << "p " << p;
  }
}

TEST(SchmidtNumber, SeparableStatesGiveOne) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Index d = 2 + s % 3;
    EXPECT_EQ(sn_state_lower_bound(random_separable_state({d, d}, 8, 700 + s)), 1);
  }
}

TEST(SchmidtNumber, PureStatesNeverExceedTheirRank) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Index r = 1 + static_cast<Index>(s % 3);
    const PureState psi = random_pure({3, 3}, r, 800 + s);
    EXPECT_EQ(schmidt_rank(psi), r);
    EXPECT_LE(sn_state_lower_bound(psi.state()), r);
  }
}

TEST(SchmidtNumber, BellPovms) {
  for (Index d : {2, 3}) {
    const Povm bell = bell_povm(d);
    const auto probes = default_sn_probes(bell, 0);
    ASSERT_EQ(probes.size(), 1u);
    EXPECT_EQ(sn_povm_lower_bound(bell, probes), d);
  }
  const Povm sep = random_separable_povm({2, 2}, 3, 900);
  EXPECT_EQ(sn_povm_lower_bound(sep, default_sn_probes(sep)), 1);
}

TEST(SchmidtNumber, OperatorBoundSkipsEmptyOutcomes) {
  EXPECT_EQ(sn_operator_lower_bound(ComplexMatrix::Zero(4, 4), {2, 2}), 0);
  // psi+_2 padded into a 2x3 space: compression keeps the entangled block
  EXPECT_EQ(sn_operator_lower_bound(embed(max_entangled(2).projector(), {2, 2}, {2, 3}), {2, 3}), 2);
}
