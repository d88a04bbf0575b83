#include "choinet/choi.hpp"

#include <string>
#include <type_traits>

#include <fmt/format.h>

#include "choinet/errors.hpp"

namespace choinet {
namespace {

void require_bipartite(const Dims& dims, const char* what) {
  if (dims.size() != 2) throw InvalidArgument(std::string(what) + ": expected a bipartite operator");
}

void require_square(const ComplexMatrix& x, Index dim, const char* what) {
  if (x.rows() != dim || x.cols() != dim) {
    throw InvalidArgument(fmt::format("{}: expected a {}x{} operator, got {}x{}", what, dim, dim, x.rows(), x.cols()));
  }
}

// tr_B(rho (1 x X)) for measured second factor, tr_A(rho (X x 1)) for the first.
ComplexMatrix contract_state(const ComplexMatrix& rho, const Dims& dims, const ComplexMatrix& x, Side measured) {
  const Index d0 = dims[0];
  const Index d1 = dims[1];
  if (measured == Side::Second) {
    require_square(x, d1, "steering");
    ComplexMatrix out = ComplexMatrix::Zero(d0, d0);
    for (Index a = 0; a < d0; ++a)
      for (Index c = 0; c < d0; ++c) {
        Complex acc{0.0, 0.0};
        for (Index b = 0; b < d1; ++b)
          for (Index e = 0; e < d1; ++e) acc += rho(a * d1 + b, c * d1 + e) * x(e, b);
        out(a, c) = acc;
      }
    return out;
  }
  require_square(x, d0, "steering");
  ComplexMatrix out = ComplexMatrix::Zero(d1, d1);
  for (Index b = 0; b < d1; ++b)
    for (Index e = 0; e < d1; ++e) {
      Complex acc{0.0, 0.0};
      for (Index a = 0; a < d0; ++a)
        for (Index c = 0; c < d0; ++c) acc += rho(a * d1 + b, c * d1 + e) * x(c, a);
      out(b, e) = acc;
    }
  return out;
}

// tr_B(E (tau x 1)) with E on {dB, dB'}.
ComplexMatrix contract_effect(const ComplexMatrix& effect, const Dims& dims, const ComplexMatrix& tau) {
  const Index db = dims[0];
  const Index dp = dims[1];
  require_square(tau, db, "meas_op");
  ComplexMatrix out = ComplexMatrix::Zero(dp, dp);
  for (Index b = 0; b < db; ++b)
    for (Index e = 0; e < db; ++e) {
      const Complex t = tau(e, b);
      if (t == Complex{0.0, 0.0}) continue;
      out += t * effect.block(b * dp, e * dp, dp, dp);
    }
  return out;
}

Index other_dim(const Dims& dims, Side measured) { return measured == Side::Second ? dims[0] : dims[1]; }
Index measured_dim(const Dims& dims, Side measured) { return measured == Side::Second ? dims[1] : dims[0]; }

}  // namespace

SubnormalizedState steer_heisenberg(const QuantumState& rho, const ComplexMatrix& effect, Side measured) {
  require_bipartite(rho.dims(), "steer_heisenberg");
  const Index dm = measured_dim(rho.dims(), measured);
  require_square(effect, dm, "steer_heisenberg");
  validate_effect(effect, {dm}, /*bounded_by_identity=*/true);
  return SubnormalizedState(hermitian_part(contract_state(rho.matrix(), rho.dims(), effect, measured)),
                            {other_dim(rho.dims(), measured)});
}

ComplexMatrix steer_schrodinger(const QuantumState& rho, const ComplexMatrix& tau) {
  require_bipartite(rho.dims(), "steer_schrodinger");
  return contract_state(rho.matrix(), rho.dims(), tau, Side::First);
}

ComplexMatrix meas_op(const ComplexMatrix& effect, const Dims& dims, const ComplexMatrix& tau) {
  require_bipartite(dims, "meas_op");
  check_dims(effect, dims);
  return contract_effect(effect, dims, tau);
}

ChannelPair::ChannelPair(QuantumState state, double tol_psd) : state_(std::move(state)) {
  require_bipartite(state_.dims(), "ChannelPair");
  marginal_ = partial_trace(state_.matrix(), state_.dims(), {0});
  eig_ = eig_hermitian(marginal_);
  full_rank_ = eig_.values.size() > 0 && eig_.values(eig_.values.size() - 1) > tol_psd;
}

ComplexMatrix ChannelPair::marginal_sqrt() const {
  const RealVector roots = eig_.values.cwiseMax(0.0).cwiseSqrt();
  return eig_.vectors * roots.asDiagonal() * eig_.vectors.adjoint();
}

ComplexMatrix ChannelPair::marginal_inv_sqrt() const {
  if (!full_rank_) throw SingularMarginalError("channel picture needs a full-rank marginal rho_A");
  const RealVector inv = eig_.values.cwiseSqrt().cwiseInverse();
  return eig_.vectors * inv.asDiagonal() * eig_.vectors.adjoint();
}

ComplexMatrix ChannelPair::eigenbasis_transpose(const ComplexMatrix& x) const {
  const ComplexMatrix& v = eig_.vectors;
  return v * (v.adjoint() * x * v).transpose() * v.adjoint();
}

ComplexMatrix channel_heisenberg(const ChannelPair& cp, const ComplexMatrix& effect) {
  const ComplexMatrix s = cp.marginal_inv_sqrt();
  const ComplexMatrix steered = contract_state(cp.state().matrix(), cp.state().dims(), effect, Side::Second);
  return s * cp.eigenbasis_transpose(steered) * s;
}

ComplexMatrix channel_schrodinger(const ChannelPair& cp, const ComplexMatrix& tau) {
  const ComplexMatrix s = cp.marginal_inv_sqrt();
  require_square(tau, cp.marginal().rows(), "channel_schrodinger");
  const ComplexMatrix x = s * cp.eigenbasis_transpose(tau) * s;
  return contract_state(cp.state().matrix(), cp.state().dims(), x, Side::First);
}

LocalOp LocalOp::identity(Index dim) {
  if (dim <= 0) throw InvalidArgument("LocalOp::identity: dimension must be positive");
  return LocalOp(std::make_shared<const Kind>(Identity{dim}), dim, dim);
}

LocalOp LocalOp::steering_heisenberg(QuantumState state, Side measured) {
  require_bipartite(state.dims(), "LocalOp::steering_heisenberg");
  const Index in = measured_dim(state.dims(), measured);
  const Index out = other_dim(state.dims(), measured);
  return LocalOp(std::make_shared<const Kind>(SteeringHeisenberg{std::move(state), measured}), in, out);
}

LocalOp LocalOp::steering_schrodinger(QuantumState state) {
  require_bipartite(state.dims(), "LocalOp::steering_schrodinger");
  const Index in = state.dims()[0];
  const Index out = state.dims()[1];
  return LocalOp(std::make_shared<const Kind>(SteeringSchrodinger{std::move(state)}), in, out);
}

LocalOp LocalOp::measurement(ComplexMatrix effect, Dims dims) {
  require_bipartite(dims, "LocalOp::measurement");
  validate_effect(effect, dims, /*bounded_by_identity=*/true);
  const Index in = dims[0];
  const Index out = dims[1];
  return LocalOp(std::make_shared<const Kind>(Measurement{std::move(effect), std::move(dims)}), in, out);
}

LocalOp LocalOp::building_block(ComplexMatrix effect, Dims effect_dims, QuantumState state) {
  require_bipartite(effect_dims, "building_block");
  require_bipartite(state.dims(), "building_block");
  if (effect_dims[1] != state.dims()[0]) {
    throw InvalidArgument(fmt::format("building_block: effect output factor has dimension {} but the state's first "
                                      "factor has dimension {}",
                                      effect_dims[1], state.dims()[0]));
  }
  validate_effect(effect, effect_dims, /*bounded_by_identity=*/true);
  const Index in = effect_dims[0];
  const Index out = state.dims()[1];
  return LocalOp(std::make_shared<const Kind>(BuildingBlock{std::move(effect), std::move(effect_dims), std::move(state)}),
                 in, out);
}

LocalOp LocalOp::chain(std::vector<LocalOp> ops) {
  Index in = 0;
  Index out = 0;
  for (std::size_t k = 0; k < ops.size(); ++k) {
    const auto& op = ops[k];
    if (op.in_dim() == 0) continue;  // nested empty chain
    if (in == 0) in = op.in_dim();
    if (out != 0 && out != op.in_dim()) {
      throw InvalidArgument(fmt::format("LocalOp::chain: op {} expects input dimension {} but receives {}", k,
                                        op.in_dim(), out));
    }
    out = op.out_dim();
  }
  return LocalOp(std::make_shared<const Kind>(Chain{std::move(ops)}), in, out);
}

ComplexMatrix LocalOp::apply(const ComplexMatrix& x) const {
  if (in_dim_ != 0) require_square(x, in_dim_, "LocalOp::apply");
  return std::visit(
      [&x](const auto& k) -> ComplexMatrix {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Identity>) {
          return x;
        } else if constexpr (std::is_same_v<T, SteeringHeisenberg>) {
          return contract_state(k.state.matrix(), k.state.dims(), x, k.measured);
        } else if constexpr (std::is_same_v<T, SteeringSchrodinger>) {
          return contract_state(k.state.matrix(), k.state.dims(), x, Side::First);
        } else if constexpr (std::is_same_v<T, Measurement>) {
          return contract_effect(k.effect, k.dims, x);
        } else if constexpr (std::is_same_v<T, BuildingBlock>) {
          return contract_state(k.state.matrix(), k.state.dims(), contract_effect(k.effect, k.effect_dims, x),
                                Side::First);
        } else {
          ComplexMatrix y = x;
          for (const auto& op : k.ops) y = op.apply(y);
          return y;
        }
      },
      *kind_);
}

bool LocalOp::probe_complete_positivity(double tol) const {
  if (in_dim_ == 0) return true;
  const Index d = in_dim_;
  // d |psi+><psi+| pushed through (id x op): sum_ij |i><j| x op(|i><j|).
  ComplexMatrix choi = ComplexMatrix::Zero(d * out_dim_, d * out_dim_);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      ComplexMatrix unit = ComplexMatrix::Zero(d, d);
      unit(i, j) = 1.0;
      choi.block(i * out_dim_, j * out_dim_, out_dim_, out_dim_) = apply(unit);
    }
  return min_eigenvalue(hermitian_part(choi)) >= -tol;
}

LocalOp building_block(const ComplexMatrix& effect, const Dims& effect_dims, const QuantumState& state2) {
  return LocalOp::building_block(effect, effect_dims, state2);
}

ComplexMatrix apply_on_factor(const LocalOp& op, const ComplexMatrix& m, const Dims& dims, Side side) {
  require_bipartite(dims, "apply_on_factor");
  check_dims(m, dims);
  const Index d0 = dims[0];
  const Index d1 = dims[1];
  if (side == Side::First) {
    if (op.in_dim() == 0) return m;
    if (op.in_dim() != d0) throw InvalidArgument("apply_on_factor: op input dimension does not match factor 0");
    const Index o0 = op.out_dim();
    ComplexMatrix out = ComplexMatrix::Zero(o0 * d1, o0 * d1);
    ComplexMatrix sub(d0, d0);
    for (Index k = 0; k < d1; ++k)
      for (Index l = 0; l < d1; ++l) {
        for (Index i = 0; i < d0; ++i)
          for (Index j = 0; j < d0; ++j) sub(i, j) = m(i * d1 + k, j * d1 + l);
        const ComplexMatrix y = op.apply(sub);
        for (Index a = 0; a < o0; ++a)
          for (Index c = 0; c < o0; ++c) out(a * d1 + k, c * d1 + l) = y(a, c);
      }
    return out;
  }
  if (op.in_dim() == 0) return m;
  if (op.in_dim() != d1) throw InvalidArgument("apply_on_factor: op input dimension does not match factor 1");
  const Index o1 = op.out_dim();
  ComplexMatrix out = ComplexMatrix::Zero(d0 * o1, d0 * o1);
  for (Index i = 0; i < d0; ++i)
    for (Index j = 0; j < d0; ++j) out.block(i * o1, j * o1, o1, o1) = op.apply(m.block(i * d1, j * d1, d1, d1));
  return out;
}

ComplexMatrix apply_local(const LocalOp& left, const LocalOp& right, const ComplexMatrix& m, const Dims& dims) {
  const ComplexMatrix half = apply_on_factor(left, m, dims, Side::First);
  const Index d0 = left.in_dim() == 0 ? dims[0] : left.out_dim();
  return apply_on_factor(right, half, {d0, dims[1]}, Side::Second);
}

}  // namespace choinet
