#include "choinet/objects.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <fmt/format.h>

#include "choinet/errors.hpp"

namespace choinet {
namespace {

void validate_hermitian_psd(const ComplexMatrix& m, const char* what, const Tolerances& tol) {
  if (!m.allFinite()) throw ValidationError(std::string(what) + ".finite", "matrix has NaN or Inf entries");
  const double herm = hermiticity_error(m);
  if (herm > tol.herm) {
    throw ValidationError(std::string(what) + ".hermitian",
                          fmt::format("max |m - m^dagger| = {:.3e} exceeds {:.1e}", herm, tol.herm));
  }
  const double lmin = min_eigenvalue(m, tol.herm);
  if (lmin < -tol.psd) {
    throw ValidationError(std::string(what) + ".psd",
                          fmt::format("min eigenvalue {:.3e} below -{:.1e}", lmin, tol.psd));
  }
}

ComplexMatrix gaussian_matrix(std::mt19937_64& rng, Index rows, Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(r, c) = Complex(re, im);
    }
  return g;
}

ComplexMatrix random_density(std::mt19937_64& rng, Index n, Index rank) {
  const ComplexMatrix g = gaussian_matrix(rng, n, rank <= 0 ? n : rank);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return hermitian_part(rho);
}

std::vector<ComplexMatrix> random_effects(std::mt19937_64& rng, Index n, std::size_t outcomes) {
  std::vector<ComplexMatrix> raw;
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < outcomes; ++i) {
    const ComplexMatrix g = gaussian_matrix(rng, n, n);
    raw.push_back(g * g.adjoint());
    sum += raw.back();
  }
  const ComplexMatrix s = mat_inv_sqrt(hermitian_part(sum), 0.0);
  for (auto& e : raw) e = hermitian_part(s * e * s);
  return raw;
}

ComplexMatrix orthonormal_columns(std::mt19937_64& rng, Index n, Index k) {
  const ComplexMatrix g = gaussian_matrix(rng, n, k);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  return qr.householderQ() * ComplexMatrix::Identity(n, k);
}

void require_bipartite(const Dims& dims, const char* what) {
  if (dims.size() != 2 || dims[0] <= 0 || dims[1] <= 0) {
    throw InvalidArgument(std::string(what) + ": expected two positive factor dimensions");
  }
}

}  // namespace

QuantumState::QuantumState(ComplexMatrix mat, Dims dims, const Tolerances& tol)
    : mat_(std::move(mat)), dims_(std::move(dims)) {
  check_dims(mat_, dims_);
  validate_hermitian_psd(mat_, "state", tol);
  const double tr = mat_.trace().real();
  if (std::abs(tr - 1.0) > tol.trace) {
    throw ValidationError("state.trace", fmt::format("trace {:.12g} differs from 1 by more than {:.1e}", tr, tol.trace));
  }
}

QuantumState QuantumState::marginal(const FactorSet& keep) const {
  Dims kept;
  for (auto k : keep) kept.push_back(dims_.at(k));
  return QuantumState(partial_trace(mat_, dims_, keep), kept);
}

SubnormalizedState::SubnormalizedState(ComplexMatrix mat, Dims dims, const Tolerances& tol)
    : mat_(std::move(mat)), dims_(std::move(dims)) {
  check_dims(mat_, dims_);
  validate_hermitian_psd(mat_, "subnormalized_state", tol);
  const double tr = mat_.trace().real();
  if (tr < -tol.trace || tr > 1.0 + tol.trace) {
    throw ValidationError("subnormalized_state.trace", fmt::format("trace {:.12g} outside [0, 1]", tr));
  }
}

QuantumState SubnormalizedState::normalized() const {
  const double w = weight();
  if (!(w > 0.0)) throw DegenerateTraceError("subnormalized_state: zero trace cannot be normalised");
  return QuantumState(hermitian_part(mat_ / w), dims_);
}

void validate_effect(const ComplexMatrix& effect, const Dims& dims, bool bounded_by_identity, const Tolerances& tol) {
  check_dims(effect, dims);
  validate_hermitian_psd(effect, "effect", tol);
  if (bounded_by_identity) {
    const double lmin = min_eigenvalue(identity(effect.rows()) - effect, tol.herm);
    if (lmin < -tol.psd) {
      throw ValidationError("effect.bounded", fmt::format("effect exceeds identity (min eigenvalue of I - E is {:.3e})", lmin));
    }
  }
}

Povm::Povm(std::vector<ComplexMatrix> effects, Dims dims, const Tolerances& tol)
    : effects_(std::move(effects)), dims_(std::move(dims)) {
  if (effects_.empty()) throw ValidationError("povm.nonempty", "a POVM needs at least one effect");
  const Index n = total_dim(dims_);
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < effects_.size(); ++i) {
    try {
      check_dims(effects_[i], dims_);
      validate_hermitian_psd(effects_[i], "povm.effect", tol);
    } catch (const ValidationError& e) {
      throw ValidationError(e.invariant(), fmt::format("effect {}: {}", i, e.what()));
    } catch (const InvalidArgument& e) {
      throw ValidationError("povm.dims", fmt::format("effect {}: {}", i, e.what()));
    }
    sum += effects_[i];
  }
  const ComplexMatrix deviation = sum - identity(n);
  Index row = 0;
  Index col = 0;
  const double worst = deviation.cwiseAbs().maxCoeff(&row, &col);
  if (worst > tol.completeness) {
    throw ValidationError("povm.completeness",
                          fmt::format("sum of effects deviates from identity at entry ({}, {}) by {:.3e}", row, col, worst));
  }
}

PureState::PureState(ComplexVector vec, Dims dims, const Tolerances& tol) : vec_(std::move(vec)), dims_(std::move(dims)) {
  if (dims_.empty() || vec_.size() != total_dim(dims_)) {
    throw InvalidArgument("pure_state: vector length does not match dims");
  }
  const double norm = vec_.norm();
  if (std::abs(norm - 1.0) > tol.trace) {
    throw ValidationError("pure_state.norm", fmt::format("norm {:.12g} differs from 1", norm));
  }
}

PureState max_entangled(Index d) {
  if (d < 2) throw InvalidArgument("max_entangled: d must be at least 2");
  ComplexVector v = ComplexVector::Zero(d * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (Index i = 0; i < d; ++i) v(i * d + i) = amp;
  return PureState(v, {d, d});
}

Povm bell_povm(Index d) {
  if (d < 2) throw InvalidArgument("bell_povm: d must be at least 2");
  const ComplexVector psi = max_entangled(d).vector();
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<ComplexMatrix> effects;
  for (Index a = 0; a < d; ++a) {
    for (Index b = 0; b < d; ++b) {
      // W_{a,b} = shift^a clock^b: |j> -> omega^{b j} |j + a mod d>
      ComplexMatrix w = ComplexMatrix::Zero(d, d);
      for (Index j = 0; j < d; ++j) {
        const double phase = two_pi * static_cast<double>(b * j) / static_cast<double>(d);
        w((j + a) % d, j) = std::polar(1.0, phase);
      }
      const ComplexVector v = kron(identity(d), w) * psi;
      effects.push_back(projector(v));
    }
  }
  return Povm(std::move(effects), {d, d});
}

QuantumState isotropic(Index d, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("isotropic: visibility p must lie in [0, 1]");
  const ComplexMatrix psi = max_entangled(d).projector();
  const double n = static_cast<double>(d * d);
  return QuantumState(p * psi + (1.0 - p) / n * identity(d * d), {d, d});
}

QuantumState isotropic_with_loss(Index d, double p, double q) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("isotropic_with_loss: visibility p must lie in [0, 1]");
  if (!(q >= 0.0 && q <= 1.0)) throw InvalidArgument("isotropic_with_loss: transmission q must lie in [0, 1]");
  if (d < 2) throw InvalidArgument("isotropic_with_loss: d must be at least 2");
  const ComplexMatrix signal = isotropic(d, p).matrix();
  ComplexMatrix vacuum = ComplexMatrix::Zero(d + 1, d + 1);
  vacuum(d, d) = 1.0;
  const ComplexMatrix lost = kron(identity(d) / static_cast<double>(d), vacuum);
  return QuantumState(q * embed(signal, {d, d}, {d, d + 1}) + (1.0 - q) * lost, {d, d + 1});
}

QuantumState random_state(const Dims& dims, std::uint64_t seed, Index rank) {
  const Index n = total_dim(dims);
  if (rank < 0 || rank > n) throw InvalidArgument("random_state: rank out of range");
  std::mt19937_64 rng(seed);
  return QuantumState(random_density(rng, n, rank), dims);
}

Povm random_povm(const Dims& dims, std::size_t outcomes, std::uint64_t seed) {
  if (outcomes < 1) throw InvalidArgument("random_povm: need at least one outcome");
  std::mt19937_64 rng(seed);
  return Povm(random_effects(rng, total_dim(dims), outcomes), dims);
}

PureState random_pure(const Dims& dims, Index schmidt_rank, std::uint64_t seed) {
  require_bipartite(dims, "random_pure");
  if (schmidt_rank < 1 || schmidt_rank > std::min(dims[0], dims[1])) {
    throw InvalidArgument(fmt::format("random_pure: Schmidt rank {} infeasible for dims {{{}, {}}}", schmidt_rank,
                                      dims[0], dims[1]));
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(0.2, 1.0);
  const ComplexMatrix u = orthonormal_columns(rng, dims[0], schmidt_rank);
  const ComplexMatrix v = orthonormal_columns(rng, dims[1], schmidt_rank);
  ComplexVector psi = ComplexVector::Zero(dims[0] * dims[1]);
  for (Index k = 0; k < schmidt_rank; ++k) {
    psi += coef(rng) * kron(ComplexVector(u.col(k)), ComplexVector(v.col(k)));
  }
  psi.normalize();
  return PureState(psi, dims);
}

QuantumState random_separable_state(const Dims& dims, std::size_t terms, std::uint64_t seed) {
  require_bipartite(dims, "random_separable_state");
  if (terms < 1) throw InvalidArgument("random_separable_state: need at least one term");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  ComplexMatrix rho = ComplexMatrix::Zero(dims[0] * dims[1], dims[0] * dims[1]);
  double total = 0.0;
  for (std::size_t t = 0; t < terms; ++t) {
    const double w = unif(rng) + 1e-3;
    rho += w * kron(random_density(rng, dims[0], 0), random_density(rng, dims[1], 0));
    total += w;
  }
  return QuantumState(hermitian_part(rho / total), dims);
}

Povm random_separable_povm(const Dims& dims, std::size_t outcomes, std::uint64_t seed) {
  require_bipartite(dims, "random_separable_povm");
  if (outcomes < 1) throw InvalidArgument("random_separable_povm: need at least one outcome");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  constexpr std::size_t kBranches = 3;
  std::size_t local = 2;
  while (kBranches * local * local < outcomes) ++local;

  std::vector<double> weights(kBranches);
  double total = 0.0;
  for (auto& w : weights) total += (w = unif(rng) + 0.05);
  for (auto& w : weights) w /= total;

  std::vector<ComplexMatrix> terms;
  for (std::size_t l = 0; l < kBranches; ++l) {
    const auto a = random_effects(rng, dims[0], local);
    const auto b = random_effects(rng, dims[1], local);
    for (const auto& ea : a)
      for (const auto& eb : b) terms.push_back(weights[l] * kron(ea, eb));
  }
  std::vector<std::size_t> label(terms.size());
  for (std::size_t t = 0; t < terms.size(); ++t) label[t] = t % outcomes;
  std::shuffle(label.begin(), label.end(), rng);

  const Index n = dims[0] * dims[1];
  std::vector<ComplexMatrix> effects(outcomes, ComplexMatrix::Zero(n, n));
  for (std::size_t t = 0; t < terms.size(); ++t) effects[label[t]] += terms[t];
  return Povm(std::move(effects), dims);
}

}  // namespace choinet
