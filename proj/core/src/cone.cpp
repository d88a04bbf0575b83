#include "choinet/cone.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "choinet/errors.hpp"

namespace choinet {
namespace {

// Coordinates of a Hermitian matrix in the orthonormal basis of hermitian_basis();
// the map is an isometry, so Re tr(A X) = <vec(A), vec(X)>.
void to_vec(const ComplexMatrix& x, Eigen::Ref<RealVector> out) {
  const Index n = x.rows();
  Index k = 0;
  for (Index a = 0; a < n; ++a) out[k++] = x(a, a).real();
  for (Index a = 0; a < n; ++a) {
    for (Index b = a + 1; b < n; ++b) {
      const Complex z = 0.5 * (x(a, b) + std::conj(x(b, a)));
      out[k++] = std::sqrt(2.0) * z.real();
      out[k++] = std::sqrt(2.0) * z.imag();
    }
  }
}

ComplexMatrix from_vec(const Eigen::Ref<const RealVector>& v, Index n) {
  ComplexMatrix x = ComplexMatrix::Zero(n, n);
  Index k = 0;
  for (Index a = 0; a < n; ++a) x(a, a) = v[k++];
  for (Index a = 0; a < n; ++a) {
    for (Index b = a + 1; b < n; ++b) {
      const Complex z(v[k], v[k + 1]);
      k += 2;
      x(a, b) = z / std::sqrt(2.0);
      x(b, a) = std::conj(x(a, b));
    }
  }
  return x;
}

ComplexMatrix term_adjoint(const Term& t, const ConeBlock& block, const ComplexMatrix& f) {
  switch (t.op) {
    case TermOp::Identity:
      return t.coef * f;
    case TermOp::PartialTranspose:
      return t.coef * partial_transpose(f, block.dims, block.on);
    case TermOp::ScalarIdentity:
      return ComplexMatrix::Constant(1, 1, t.coef * f.trace().real());
    case TermOp::Trace:
      return t.coef * f(0, 0).real() * identity(block.dim);
  }
  return {};
}

struct Layout {
  std::vector<Index> dims;
  std::vector<Index> offsets;
  Index size = 0;

  explicit Layout(const std::vector<Index>& block_dims) : dims(block_dims) {
    for (Index n : dims) {
      offsets.push_back(size);
      size += n * n;
    }
  }
};

}  // namespace

ConeBlock ConeBlock::psd(Index dim) { return ConeBlock{dim, ConeKind::Psd, {dim}, {}}; }

ConeBlock ConeBlock::psd(Dims dims, FactorSet on) {
  const Index n = total_dim(dims);
  return ConeBlock{n, ConeKind::Psd, std::move(dims), std::move(on)};
}

ConeBlock ConeBlock::ppt(Dims dims, FactorSet on) {
  const Index n = total_dim(dims);
  return ConeBlock{n, ConeKind::PsdPpt, std::move(dims), std::move(on)};
}

ConeBlock ConeBlock::scalar() { return ConeBlock{1, ConeKind::Psd, {1}, {}}; }

void ConeSpec::validate() const {
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    const auto& b = blocks[j];
    if (b.dim < 1) throw InvalidArgument(fmt::format("ConeSpec: block {} has dimension {}", j, b.dim));
    if (!b.dims.empty() && total_dim(b.dims) != b.dim) {
      throw InvalidArgument(fmt::format("ConeSpec: block {} dims do not multiply to {}", j, b.dim));
    }
    for (auto f : b.on) {
      if (f >= b.dims.size()) throw InvalidArgument(fmt::format("ConeSpec: block {} transposes a missing factor", j));
    }
  }
  for (std::size_t c = 0; c < constraints.size(); ++c) {
    const auto& con = constraints[c];
    const Index n = con.rhs.rows();
    if (n < 1 || con.rhs.cols() != n) throw InvalidArgument(fmt::format("ConeSpec: constraint {} rhs is not square", c));
    if (hermiticity_error(con.rhs) > 1e-12 * std::max(1.0, con.rhs.cwiseAbs().maxCoeff())) {
      throw InvalidArgument(fmt::format("ConeSpec: constraint {} rhs is not Hermitian", c));
    }
    if (con.terms.empty()) throw InvalidArgument(fmt::format("ConeSpec: constraint {} has no terms", c));
    for (const auto& t : con.terms) {
      if (t.block >= blocks.size()) throw InvalidArgument(fmt::format("ConeSpec: constraint {} names block {}", c, t.block));
      const auto& b = blocks[t.block];
      const bool ok = (t.op == TermOp::Identity && b.dim == n) || (t.op == TermOp::PartialTranspose && b.dim == n) ||
                      (t.op == TermOp::ScalarIdentity && b.dim == 1) || (t.op == TermOp::Trace && n == 1);
      if (!ok) throw InvalidArgument(fmt::format("ConeSpec: constraint {} term on block {} has inconsistent size", c, t.block));
    }
  }
}

std::vector<ComplexMatrix> hermitian_basis(Index n) {
  std::vector<ComplexMatrix> basis;
  basis.reserve(static_cast<std::size_t>(n * n));
  const double s = 1.0 / std::sqrt(2.0);
  for (Index a = 0; a < n; ++a) {
    ComplexMatrix e = ComplexMatrix::Zero(n, n);
    e(a, a) = 1.0;
    basis.push_back(std::move(e));
  }
  for (Index a = 0; a < n; ++a) {
    for (Index b = a + 1; b < n; ++b) {
      ComplexMatrix sym = ComplexMatrix::Zero(n, n);
      sym(a, b) = s;
      sym(b, a) = s;
      basis.push_back(std::move(sym));
      ComplexMatrix asym = ComplexMatrix::Zero(n, n);
      asym(a, b) = Complex(0.0, s);
      asym(b, a) = Complex(0.0, -s);
      basis.push_back(std::move(asym));
    }
  }
  return basis;
}

ExpandedSpec expand(const ConeSpec& spec) {
  spec.validate();
  ExpandedSpec out;
  out.original_blocks = spec.blocks.size();
  for (const auto& b : spec.blocks) out.block_dims.push_back(b.dim);

  std::map<Index, std::vector<ComplexMatrix>> bases;
  auto basis_for = [&](Index n) -> const std::vector<ComplexMatrix>& {
    auto it = bases.find(n);
    if (it == bases.end()) it = bases.emplace(n, hermitian_basis(n)).first;
    return it->second;
  };

  std::vector<double> rhs;
  for (const auto& con : spec.constraints) {
    for (const auto& f : basis_for(con.rhs.rows())) {
      std::vector<ExpandedSpec::Part> parts;
      for (const auto& t : con.terms) {
        ComplexMatrix a = term_adjoint(t, spec.blocks[t.block], f);
        auto it = std::find_if(parts.begin(), parts.end(), [&](const auto& p) { return p.block == t.block; });
        if (it == parts.end()) {
          parts.push_back({t.block, std::move(a)});
        } else {
          it->a += a;
        }
      }
      std::erase_if(parts, [](const auto& p) { return p.a.cwiseAbs().maxCoeff() == 0.0; });
      if (parts.empty()) continue;
      out.rows.push_back(std::move(parts));
      rhs.push_back(real_inner(f, con.rhs));
    }
  }

  for (std::size_t j = 0; j < spec.blocks.size(); ++j) {
    const auto& b = spec.blocks[j];
    if (b.kind != ConeKind::PsdPpt) continue;
    const std::size_t w = out.block_dims.size();
    out.block_dims.push_back(b.dim);
    for (const auto& f : basis_for(b.dim)) {
      out.rows.push_back({{j, partial_transpose(f, b.dims, b.on)}, {w, -f}});
      rhs.push_back(0.0);
    }
  }
  out.rhs = Eigen::Map<RealVector>(rhs.data(), static_cast<Index>(rhs.size()));
  return out;
}

FeasibilityResult feasibility(const ConeSpec& spec, const FeasibilityOptions& opts) {
  const ExpandedSpec ex = expand(spec);
  const Layout layout(ex.block_dims);
  const Index m = static_cast<Index>(ex.rows.size());

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, layout.size);
  for (Index k = 0; k < m; ++k) {
    for (const auto& part : ex.rows[static_cast<std::size_t>(k)]) {
      const Index n = layout.dims[part.block];
      RealVector seg(n * n);
      to_vec(part.a, seg);
      a.row(k).segment(layout.offsets[part.block], n * n) += seg.transpose();
    }
  }
  const Eigen::MatrixXd pinv = m > 0 ? Eigen::MatrixXd(a.completeOrthogonalDecomposition().pseudoInverse())
                                     : Eigen::MatrixXd::Zero(layout.size, 0);
  const Eigen::MatrixXd row_space = pinv * a;

  auto project_affine = [&](const RealVector& x) -> RealVector {
    if (m == 0) return x;
    return x - pinv * (a * x - ex.rhs);
  };
  auto project_cone = [&](const RealVector& x) -> RealVector {
    RealVector out(layout.size);
    for (std::size_t j = 0; j < layout.dims.size(); ++j) {
      const Index n = layout.dims[j];
      const ComplexMatrix blk = from_vec(x.segment(layout.offsets[j], n * n), n);
      to_vec(psd_projection(blk), out.segment(layout.offsets[j], n * n));
    }
    return out;
  };
  auto max_block_eig = [&](const RealVector& u) {
    double worst = -INFINITY;
    for (std::size_t j = 0; j < layout.dims.size(); ++j) {
      const Index n = layout.dims[j];
      worst = std::max(worst, eigvals_hermitian(from_vec(u.segment(layout.offsets[j], n * n), n))[0]);
    }
    return worst;
  };

  FeasibilityResult res;
  RealVector x = RealVector::Zero(layout.size);
  RealVector p = RealVector::Zero(layout.size);
  RealVector q = RealVector::Zero(layout.size);
  for (int it = 1; it <= opts.max_iter; ++it) {
    const RealVector y = project_affine(x + p);
    p = x + p - y;
    x = project_cone(y + q);
    q = y + q - x;
    res.iterations = it;
    res.residual = m > 0 ? (a * x - ex.rhs).norm() : 0.0;
    if (res.residual <= opts.tol_feas) {
      res.status = FeasibilityStatus::Feasible;
      for (std::size_t j = 0; j < ex.original_blocks; ++j) {
        const Index n = layout.dims[j];
        res.point.push_back(from_vec(x.segment(layout.offsets[j], n * n), n));
      }
      return res;
    }
    if (it <= 10 || it % 10 == 0) {
      const RealVector v = row_space * (y - project_cone(y));
      const double norm = v.norm();
      if (norm > 0.0) {
        res.margin = v.dot(y) / norm;
        if (res.margin > opts.tol_sep && max_block_eig(v / norm) <= opts.tol_feas) {
          res.status = FeasibilityStatus::Infeasible;
          return res;
        }
      }
    }
  }
  res.status = FeasibilityStatus::Undecided;
  return res;
}

}  // namespace choinet
