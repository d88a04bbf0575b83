#include "choinet/quantifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "choinet/errors.hpp"

namespace choinet {
namespace {

constexpr double kTraceFloor = 1e-12;

void require_bipartite(const Dims& dims, const char* what) {
  if (dims.size() != 2) throw InvalidArgument(fmt::format("{}: expects a bipartite operator", what));
}

ComplexMatrix pt(const ComplexMatrix& m, const Dims& dims) { return partial_transpose(m, dims, {1}); }

QuantifierStatus from_sdp(SdpStatus s) {
  return s == SdpStatus::Optimal ? QuantifierStatus::Converged : QuantifierStatus::MaxIter;
}

// Witness value for a unit-trace operator on {d, d}.
double witness(const ComplexMatrix& rho, Index d, int k) {
  Complex overlap = 0.0;
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) overlap += rho(i * d + i, j * d + j);
  }
  const double fidelity = overlap.real() / static_cast<double>(d);
  return rho.trace().real() - static_cast<double>(d) / static_cast<double>(k - 1) * fidelity;
}

// Local unitaries taking the Schmidt bases of the leading eigenvector of rho to
// the computational basis, applied to rho. The Schmidt number is unchanged.
ComplexMatrix schmidt_aligned(const ComplexMatrix& rho, Index d) {
  const EigenSystem es = eig_hermitian(hermitian_part(rho));
  ComplexMatrix phi(d, d);
  for (Index a = 0; a < d; ++a) {
    for (Index b = 0; b < d; ++b) phi(a, b) = es.vectors(a * d + b, 0);
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(phi, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const ComplexMatrix u = kron(ComplexMatrix(svd.matrixU().adjoint()), ComplexMatrix(svd.matrixV().transpose()));
  return u * rho * u.adjoint();
}

int lower_bound_unit(const ComplexMatrix& rho, Index d, double tol_wit) {
  const ComplexMatrix aligned = schmidt_aligned(rho, d);
  for (int k = static_cast<int>(d); k >= 2; --k) {
    if (witness(rho, d, k) < -tol_wit || witness(aligned, d, k) < -tol_wit) return k;
  }
  return 1;
}

bool segment_member(const ComplexMatrix& rho, const ComplexMatrix& eta, const Dims& dims, double t) {
  const ComplexMatrix mix = hermitian_part((1.0 - t) * rho + t * eta);
  return min_eigenvalue(mix) >= -kSegmentMembershipTol && min_eigenvalue(pt(mix, dims)) >= -kSegmentMembershipTol;
}

template <typename Member>
QuantifierResult bisect_segment(const QuantumState& rho, const QuantumState& eta, Member member, int depth,
                                double width) {
  require_bipartite(rho.dims(), "fixed_noise_robustness");
  if (rho.dims() != eta.dims()) throw InvalidArgument("fixed_noise_robustness: rho and eta have different dims");
  QuantifierResult res;
  if (member(0.0)) {
    res.certificate = {rho.matrix()};
    return res;
  }
  if (!member(1.0)) {
    res.status = QuantifierStatus::Infeasible;
    res.value = res.lower = res.upper = std::numeric_limits<double>::infinity();
    return res;
  }
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < depth && hi - lo > width; ++it) {
    const double mid = 0.5 * (lo + hi);
    (member(mid) ? hi : lo) = mid;
  }
  res.value = res.upper = hi / (1.0 - hi);
  res.lower = lo / (1.0 - lo);
  res.certificate = {(1.0 - hi) * rho.matrix() + hi * eta.matrix(), eta.matrix()};
  return res;
}

}  // namespace

const char* to_string(QuantifierStatus s) {
  switch (s) {
    case QuantifierStatus::Converged:
      return "converged";
    case QuantifierStatus::MaxIter:
      return "max-iter";
    case QuantifierStatus::Infeasible:
      return "infeasible";
  }
  return "?";
}

const char* to_string(NoiseSet n) { return n == NoiseSet::All ? "all" : "separable"; }

bool is_ppt(const ComplexMatrix& m, const Dims& dims, double tol) {
  require_bipartite(dims, "is_ppt");
  return min_eigenvalue(hermitian_part(pt(m, dims))) >= -tol;
}

QuantifierResult fixed_noise_robustness(const QuantumState& rho, const QuantumState& eta) {
  auto member = [&](double t) { return segment_member(rho.matrix(), eta.matrix(), rho.dims(), t); };
  return bisect_segment(rho, eta, member, 200, 1e-12);
}

QuantifierResult fixed_noise_robustness_dykstra(const QuantumState& rho, const QuantumState& eta,
                                                const FeasibilityOptions& opts, int depth) {
  auto member = [&](double t) {
    ConeSpec spec;
    spec.blocks = {ConeBlock::ppt(rho.dims(), {1})};
    spec.constraints = {{{{0, TermOp::Identity, 1.0}}, hermitian_part((1.0 - t) * rho.matrix() + t * eta.matrix())}};
    return feasibility(spec, opts).status == FeasibilityStatus::Feasible;
  };
  return bisect_segment(rho, eta, member, depth, 0.0);
}

QuantifierResult robustness_ppt(const QuantumState& rho, NoiseSet noise, const SdpOptions& opts) {
  require_bipartite(rho.dims(), "robustness_ppt");
  const Index n = rho.dim();
  SdpProblem prob;
  prob.cone.blocks = {noise == NoiseSet::All ? ConeBlock::psd(rho.dims(), {1}) : ConeBlock::ppt(rho.dims(), {1}),
                      ConeBlock::psd(n)};
  // (rho + S)^Gamma = Z
  prob.cone.constraints = {
      {{{0, TermOp::PartialTranspose, 1.0}, {1, TermOp::Identity, -1.0}}, -pt(rho.matrix(), rho.dims())}};
  prob.objective = {{0, identity(n)}};
  const SdpResult sol = minimize(prob, opts);

  QuantifierResult res;
  res.status = from_sdp(sol.status);
  res.value = std::max(0.0, sol.primal);
  res.upper = res.value;
  res.lower = std::clamp(sol.dual, 0.0, res.value);
  const ComplexMatrix& s = sol.x[0];
  res.certificate = {(rho.matrix() + s) / (1.0 + s.trace().real())};
  if (s.trace().real() > kTraceFloor) res.certificate.push_back(s / s.trace().real());
  return res;
}

QuantifierResult generalized_robustness_ppt(const QuantumState& rho, const SdpOptions& opts) {
  return robustness_ppt(rho, NoiseSet::All, opts);
}

QuantifierResult weight_ppt(const QuantumState& rho, const SdpOptions& opts) {
  require_bipartite(rho.dims(), "weight_ppt");
  const Index n = rho.dim();
  SdpProblem prob;
  prob.cone.blocks = {ConeBlock::ppt(rho.dims(), {1}), ConeBlock::psd(n)};
  // Y + S = rho, maximise tr Y
  prob.cone.constraints = {{{{0, TermOp::Identity, 1.0}, {1, TermOp::Identity, 1.0}}, rho.matrix()}};
  prob.objective = {{0, -identity(n)}};
  const SdpResult sol = minimize(prob, opts);

  QuantifierResult res;
  res.status = from_sdp(sol.status);
  res.value = std::clamp(1.0 + sol.primal, 0.0, 1.0);
  res.upper = res.value;
  res.lower = std::clamp(1.0 + sol.dual, 0.0, res.value);
  const double ty = sol.x[0].trace().real();
  const double ts = sol.x[1].trace().real();
  if (ty > kTraceFloor) res.certificate.push_back(sol.x[0] / ty);
  if (ts > kTraceFloor) res.certificate.push_back(sol.x[1] / ts);
  return res;
}

QuantifierResult povm_robustness_ppt(const Povm& m, NoiseSet noise, const SdpOptions& opts) {
  require_bipartite(m.dims(), "povm_robustness_ppt");
  const std::size_t k = m.outcomes();
  const Index n = m.dim();
  SdpProblem prob;
  auto& blocks = prob.cone.blocks;
  for (std::size_t i = 0; i < k; ++i) {
    blocks.push_back(noise == NoiseSet::All ? ConeBlock::psd(m.dims(), {1}) : ConeBlock::ppt(m.dims(), {1}));
  }
  for (std::size_t i = 0; i < k; ++i) blocks.push_back(ConeBlock::psd(n));
  const std::size_t r_block = blocks.size();
  blocks.push_back(ConeBlock::scalar());

  // (M_i + Ntilde_i)^Gamma = Z_i and sum_i Ntilde_i = r I
  AffineConstraint total{{}, ComplexMatrix::Zero(n, n)};
  for (std::size_t i = 0; i < k; ++i) {
    prob.cone.constraints.push_back(
        {{{i, TermOp::PartialTranspose, 1.0}, {k + i, TermOp::Identity, -1.0}}, -pt(m.effect(i), m.dims())});
    total.terms.push_back({i, TermOp::Identity, 1.0});
  }
  total.terms.push_back({r_block, TermOp::ScalarIdentity, -1.0});
  prob.cone.constraints.push_back(std::move(total));
  prob.objective = {{r_block, ComplexMatrix::Ones(1, 1)}};
  const SdpResult sol = minimize(prob, opts);

  QuantifierResult res;
  res.status = from_sdp(sol.status);
  res.value = std::max(0.0, sol.primal);
  res.upper = res.value;
  res.lower = std::clamp(sol.dual, 0.0, res.value);
  const double r = sol.x[r_block](0, 0).real();
  for (std::size_t i = 0; i < k; ++i) res.certificate.push_back((m.effect(i) + sol.x[i]) / (1.0 + r));
  if (r > kTraceFloor) {
    for (std::size_t i = 0; i < k; ++i) res.certificate.push_back(sol.x[i] / r);
  }
  return res;
}

QuantifierResult povm_weight_ppt(const Povm& m, const SdpOptions& opts) {
  require_bipartite(m.dims(), "povm_weight_ppt");
  const std::size_t k = m.outcomes();
  const Index n = m.dim();
  SdpProblem prob;
  auto& blocks = prob.cone.blocks;
  for (std::size_t i = 0; i < k; ++i) blocks.push_back(ConeBlock::ppt(m.dims(), {1}));
  for (std::size_t i = 0; i < k; ++i) blocks.push_back(ConeBlock::psd(n));
  const std::size_t t_block = blocks.size();
  blocks.push_back(ConeBlock::scalar());

  // Ptilde_i + S_i = M_i and sum_i Ptilde_i = t I, maximise t
  AffineConstraint total{{}, ComplexMatrix::Zero(n, n)};
  for (std::size_t i = 0; i < k; ++i) {
    prob.cone.constraints.push_back({{{i, TermOp::Identity, 1.0}, {k + i, TermOp::Identity, 1.0}}, m.effect(i)});
    total.terms.push_back({i, TermOp::Identity, 1.0});
  }
  total.terms.push_back({t_block, TermOp::ScalarIdentity, -1.0});
  prob.cone.constraints.push_back(std::move(total));
  prob.objective = {{t_block, -ComplexMatrix::Ones(1, 1)}};
  const SdpResult sol = minimize(prob, opts);

  QuantifierResult res;
  res.status = from_sdp(sol.status);
  res.value = std::clamp(1.0 + sol.primal, 0.0, 1.0);
  res.upper = res.value;
  res.lower = std::clamp(1.0 + sol.dual, 0.0, res.value);
  const double t = sol.x[t_block](0, 0).real();
  if (t > kTraceFloor) {
    for (std::size_t i = 0; i < k; ++i) res.certificate.push_back(sol.x[i] / t);
  }
  if (1.0 - t > kTraceFloor) {
    for (std::size_t i = 0; i < k; ++i) res.certificate.push_back(sol.x[k + i] / (1.0 - t));
  }
  return res;
}

int schmidt_rank(const PureState& psi, double tol) {
  require_bipartite(psi.dims(), "schmidt_rank");
  const RealVector lambda = eigvals_hermitian(partial_trace(psi.projector(), psi.dims(), {0}));
  return static_cast<int>((lambda.array() > tol).count());
}

WitnessReport sn_witness_value(const QuantumState& rho, Index d, int k, double tol_wit) {
  if (rho.dims() != Dims{d, d}) throw InvalidArgument(fmt::format("sn_witness_value: state is not on {{{0}, {0}}}", d));
  if (k < 2 || k > d) throw InvalidArgument(fmt::format("sn_witness_value: k = {} outside [2, {}]", k, d));
  WitnessReport rep;
  rep.k = k;
  rep.witness_value = witness(rho.matrix(), d, k);
  rep.certified = rep.witness_value < -tol_wit;
  return rep;
}

int sn_state_lower_bound(const QuantumState& rho, double tol_wit) {
  require_bipartite(rho.dims(), "sn_state_lower_bound");
  if (rho.dims()[0] != rho.dims()[1]) throw InvalidArgument("sn_state_lower_bound: state must be on {d, d}");
  return lower_bound_unit(rho.matrix(), rho.dims()[0], tol_wit);
}

int sn_operator_lower_bound(const ComplexMatrix& sigma, const Dims& dims, double tol_wit) {
  require_bipartite(dims, "sn_operator_lower_bound");
  check_dims(sigma, dims);
  const Index d = std::min(dims[0], dims[1]);
  ComplexMatrix block(d * d, d * d);
  for (Index a = 0; a < d * d; ++a) {
    for (Index b = 0; b < d * d; ++b) block(a, b) = sigma((a / d) * dims[1] + a % d, (b / d) * dims[1] + b % d);
  }
  const double tr = block.trace().real();
  if (tr < kTraceFloor || sigma.trace().real() < kTraceFloor) return 0;
  if (d < 2) return 1;
  return lower_bound_unit(hermitian_part(block) / tr, d, tol_wit);
}

std::vector<ProbePair> default_sn_probes(const Povm& m, std::size_t random_probes, std::uint64_t seed) {
  require_bipartite(m.dims(), "default_sn_probes");
  const Index db = m.dims()[0];
  const Index dc = m.dims()[1];
  auto ideal = [](Index d) { return d >= 2 ? max_entangled(d).state() : QuantumState(identity(1), {1, 1}); };
  std::vector<ProbePair> probes;
  probes.emplace_back(ideal(db), ideal(dc));
  for (std::size_t i = 0; i < random_probes; ++i) {
    probes.emplace_back(random_state({db, db}, seed + 2 * i), random_state({dc, dc}, seed + 2 * i + 1));
  }
  return probes;
}

int sn_povm_lower_bound(const Povm& m, const std::vector<ProbePair>& probes, double tol_wit) {
  require_bipartite(m.dims(), "sn_povm_lower_bound");
  int best = 1;
  for (std::size_t p = 0; p < probes.size(); ++p) {
    const auto& [alpha, beta] = probes[p];
    if (alpha.dims().size() != 2 || beta.dims().size() != 2 || alpha.dims()[1] != m.dims()[0] ||
        beta.dims()[0] != m.dims()[1]) {
      throw InvalidArgument(fmt::format("sn_povm_lower_bound: probe {} does not match the POVM dims", p));
    }
    const LocalOp left = LocalOp::steering_heisenberg(alpha, Side::Second);
    const LocalOp right = LocalOp::steering_heisenberg(beta, Side::First);
    const Dims out{alpha.dims()[0], beta.dims()[1]};
    for (const auto& e : m.effects()) {
      best = std::max(best, sn_operator_lower_bound(apply_local(left, right, e, m.dims()), out, tol_wit));
    }
  }
  return best;
}

}  // namespace choinet
