#pragma once

// Entanglement quantifiers of states and POVMs, with PPT standing in for the
// separable set, plus the Schmidt-number witness tools.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "choinet/network.hpp"
#include "choinet/sdp.hpp"

namespace choinet {

enum class QuantifierStatus { Converged, MaxIter, Infeasible };

const char* to_string(QuantifierStatus s);

struct QuantifierResult {
  double value = 0.0;
  QuantifierStatus status = QuantifierStatus::Converged;
  /// Interval known to contain the optimum (value for closed-form or bisection
  /// answers, the primal/dual objective pair for SDP answers).
  double lower = 0.0;
  double upper = 0.0;
  /// Decomposition members. States: {tau, eta} with rho + r eta = (1 + r) tau for
  /// robustness and rho = (1 - w) tau + w eta for weight (eta omitted when the
  /// noise weight is zero). POVMs: P_0..P_{n-1} followed by N_0..N_{n-1}.
  std::vector<ComplexMatrix> certificate;
};

/// Noise set for robustness: every state/POVM, or the PPT ones.
enum class NoiseSet { All, Separable };

const char* to_string(NoiseSet n);

/// Bisection membership tolerance used by the eigenvalue route.
inline constexpr double kSegmentMembershipTol = 1e-12;

/// min r >= 0 with (rho + r eta)/(1 + r) PSD and PPT, by bisection on
/// t = r/(1 + r) to width 1e-12 using eigenvalue membership tests.
QuantifierResult fixed_noise_robustness(const QuantumState& rho, const QuantumState& eta);

/// Same quantity, deciding every bisection point with the Dykstra engine.
QuantifierResult fixed_noise_robustness_dykstra(const QuantumState& rho, const QuantumState& eta,
                                                const FeasibilityOptions& opts = {}, int depth = 40);

/// min r with rho + r eta = (1 + r) tau, tau PPT, eta in the noise set.
QuantifierResult robustness_ppt(const QuantumState& rho, NoiseSet noise, const SdpOptions& opts = {});

/// robustness_ppt with all states as noise.
QuantifierResult generalized_robustness_ppt(const QuantumState& rho, const SdpOptions& opts = {});

/// min w with rho = (1 - w) tau + w eta, tau PPT.
QuantifierResult weight_ppt(const QuantumState& rho, const SdpOptions& opts = {});

/// min r with M_i = (1 + r) P_i - r N_i, {P_i} a PPT POVM, {N_i} in the noise set.
QuantifierResult povm_robustness_ppt(const Povm& m, NoiseSet noise, const SdpOptions& opts = {});

/// min w with M_i = (1 - w) P_i + w N_i, {P_i} a PPT POVM.
QuantifierResult povm_weight_ppt(const Povm& m, const SdpOptions& opts = {});

/// Transposition is applied to the last factor for every PPT test above.
bool is_ppt(const ComplexMatrix& m, const Dims& dims, double tol = default_tolerances().psd);

// -- Schmidt number ----------------------------------------------------------

/// Number of marginal eigenvalues above tol.
int schmidt_rank(const PureState& psi, double tol = 1e-10);

struct WitnessReport {
  int k = 0;
  double witness_value = 0.0;
  bool certified = false;
};

/// tr(W_k rho) with W_k = 1 - d/(k - 1) |psi+_d><psi+_d|; certified means
/// witness_value < -tol_wit, which implies SN(rho) >= k.
WitnessReport sn_witness_value(const QuantumState& rho, Index d, int k, double tol_wit = default_tolerances().wit);

/// Largest k certified by W_k, either directly or after local unitaries that
/// align the Schmidt bases of the leading eigenvector with psi+_d; else 1.
/// rho must be on {d, d}.
int sn_state_lower_bound(const QuantumState& rho, double tol_wit = default_tolerances().wit);

using ProbePair = std::pair<QuantumState, QuantumState>;

/// Maximally entangled probes plus `random_probes` seeded full-rank states, on
/// {d_B, d_B} and {d_B', d_B'} for a POVM on {d_B, d_B'}.
std::vector<ProbePair> default_sn_probes(const Povm& m, std::size_t random_probes = 10, std::uint64_t seed = 1);

/// Maximum certified k over probes (alpha, beta) and outcomes i of
/// sigma_i = (S*_alpha x S*_beta)(M_i), alpha measured on its second factor and
/// beta on its first. Outcomes with trace below 1e-12 are skipped; unequal end
/// dimensions are compressed to the smaller one by a local projector first.
int sn_povm_lower_bound(const Povm& m, const std::vector<ProbePair>& probes,
                        double tol_wit = default_tolerances().wit);

/// SN lower bound for a possibly subnormalised operator with unequal factor
/// dimensions; 0 when its trace is below 1e-12.
int sn_operator_lower_bound(const ComplexMatrix& sigma, const Dims& dims, double tol_wit = default_tolerances().wit);

}  // namespace choinet
