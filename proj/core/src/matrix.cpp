#include "choinet/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "choinet/errors.hpp"

namespace choinet {
namespace {

// strides[k] = product of dims after k.
std::vector<Index> strides_of(const Dims& dims) {
  std::vector<Index> strides(dims.size(), 1);
  for (std::size_t k = dims.size(); k-- > 1;) strides[k - 1] = strides[k] * dims[k];
  return strides;
}

bool contains(const FactorSet& set, std::size_t k) {
  return std::find(set.begin(), set.end(), k) != set.end();
}

void check_factor_set(const FactorSet& set, const Dims& dims, const char* what) {
  for (std::size_t k : set) {
    if (k >= dims.size()) {
      throw InvalidArgument(std::string(what) + ": factor index " + std::to_string(k) +
                            " out of range for " + std::to_string(dims.size()) + " factors");
    }
  }
}

// Offsets of every composite index restricted to a subset of factors. For the
// subset S, offsets[r] is the full index whose S-digits spell r and whose other
// digits are zero.
std::vector<Index> subset_offsets(const Dims& dims, const std::vector<std::size_t>& subset) {
  const auto strides = strides_of(dims);
  Index count = 1;
  for (auto k : subset) count *= dims[k];
  std::vector<Index> offsets(static_cast<std::size_t>(count), 0);
  for (Index r = 0; r < count; ++r) {
    Index rest = r;
    Index off = 0;
    for (std::size_t s = subset.size(); s-- > 0;) {
      const auto k = subset[s];
      off += (rest % dims[k]) * strides[k];
      rest /= dims[k];
    }
    offsets[static_cast<std::size_t>(r)] = off;
  }
  return offsets;
}

}  // namespace

Index total_dim(const Dims& dims) {
  Index n = 1;
  for (auto d : dims) n *= d;
  return n;
}

void check_dims(const ComplexMatrix& m, const Dims& dims) {
  if (dims.empty()) throw InvalidArgument("dims: empty dimension list");
  for (auto d : dims) {
    if (d <= 0) throw InvalidArgument("dims: dimensions must be positive");
  }
  const Index n = total_dim(dims);
  if (m.rows() != n || m.cols() != n) {
    throw InvalidArgument("dims: matrix is " + std::to_string(m.rows()) + "x" +
                          std::to_string(m.cols()) + " but dims multiply to " + std::to_string(n));
  }
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

ComplexMatrix identity(Index dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix partial_trace(const ComplexMatrix& m, const Dims& dims, const FactorSet& keep) {
  check_dims(m, dims);
  check_factor_set(keep, dims, "partial_trace");
  if (keep.empty()) throw InvalidArgument("partial_trace: keep set must be nonempty");

  std::vector<std::size_t> kept;
  std::vector<std::size_t> traced;
  for (std::size_t k = 0; k < dims.size(); ++k) (contains(keep, k) ? kept : traced).push_back(k);

  const auto off_keep = subset_offsets(dims, kept);
  const auto off_trace = subset_offsets(dims, traced);
  const auto n = static_cast<Index>(off_keep.size());
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (Index r = 0; r < n; ++r) {
    for (Index c = 0; c < n; ++c) {
      Complex acc{0.0, 0.0};
      const Index rr = off_keep[static_cast<std::size_t>(r)];
      const Index cc = off_keep[static_cast<std::size_t>(c)];
      for (Index t : off_trace) acc += m(rr + t, cc + t);
      out(r, c) = acc;
    }
  }
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, const Dims& dims, const FactorSet& on) {
  check_dims(m, dims);
  check_factor_set(on, dims, "partial_transpose");
  const Index n = m.rows();
  const auto strides = strides_of(dims);

  // part_on[i]: the digits of i on the transposed factors; the rest is i - part_on[i].
  std::vector<Index> part_on(static_cast<std::size_t>(n), 0);
  for (Index i = 0; i < n; ++i) {
    Index acc = 0;
    for (std::size_t k : on) acc += ((i / strides[k]) % dims[k]) * strides[k];
    part_on[static_cast<std::size_t>(i)] = acc;
  }
  ComplexMatrix out(n, n);
  for (Index r = 0; r < n; ++r) {
    const Index r_on = part_on[static_cast<std::size_t>(r)];
    for (Index c = 0; c < n; ++c) {
      const Index c_on = part_on[static_cast<std::size_t>(c)];
      out(r - r_on + c_on, c - c_on + r_on) = m(r, c);
    }
  }
  return out;
}

ComplexMatrix swap_factors(const ComplexMatrix& m, const Dims& dims) {
  check_dims(m, dims);
  if (dims.size() != 2) throw InvalidArgument("swap_factors: expected a bipartite operator");
  const Index d0 = dims[0];
  const Index d1 = dims[1];
  ComplexMatrix out(m.rows(), m.cols());
  for (Index a = 0; a < d0; ++a)
    for (Index b = 0; b < d1; ++b)
      for (Index c = 0; c < d0; ++c)
        for (Index e = 0; e < d1; ++e) out(b * d0 + a, e * d0 + c) = m(a * d1 + b, c * d1 + e);
  return out;
}

ComplexMatrix embed(const ComplexMatrix& m, const Dims& from, const Dims& to) {
  check_dims(m, from);
  if (from.size() != to.size()) throw InvalidArgument("embed: factor count mismatch");
  for (std::size_t k = 0; k < from.size(); ++k) {
    if (to[k] < from[k]) throw InvalidArgument("embed: target dimension smaller than source");
  }
  const auto to_strides = strides_of(to);
  const auto from_strides = strides_of(from);
  const Index n = m.rows();
  std::vector<Index> map(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    Index target = 0;
    for (std::size_t k = 0; k < from.size(); ++k) target += ((i / from_strides[k]) % from[k]) * to_strides[k];
    map[static_cast<std::size_t>(i)] = target;
  }
  const Index big = total_dim(to);
  ComplexMatrix out = ComplexMatrix::Zero(big, big);
  for (Index r = 0; r < n; ++r)
    for (Index c = 0; c < n; ++c) out(map[static_cast<std::size_t>(r)], map[static_cast<std::size_t>(c)]) = m(r, c);
  return out;
}

double hermiticity_error(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return INFINITY;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return (m + m.adjoint()) * 0.5; }

EigenSystem eig_hermitian(const ComplexMatrix& m, double tol_herm) {
  if (m.rows() != m.cols()) throw InvalidArgument("eig_hermitian: matrix is not square");
  if (!m.allFinite()) throw InvalidArgument("eig_hermitian: non-finite entries");
  const double err = m.size() == 0 ? 0.0 : hermiticity_error(m);
  if (err > tol_herm) {
    throw InvalidArgument("eig_hermitian: matrix is not Hermitian (max |m - m^dagger| = " +
                          std::to_string(err) + ")");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m));
  // Eigen returns ascending order.
  EigenSystem out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

RealVector eigvals_hermitian(const ComplexMatrix& m, double tol_herm) {
  if (m.rows() != m.cols()) throw InvalidArgument("eigvals_hermitian: matrix is not square");
  const double err = m.size() == 0 ? 0.0 : hermiticity_error(m);
  if (err > tol_herm) throw InvalidArgument("eigvals_hermitian: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().reverse();
}

double min_eigenvalue(const ComplexMatrix& m, double tol_herm) {
  const auto values = eigvals_hermitian(m, tol_herm);
  return values.size() == 0 ? 0.0 : values(values.size() - 1);
}

ComplexMatrix mat_sqrt(const ComplexMatrix& m, double tol_psd) {
  const auto es = eig_hermitian(m);
  RealVector roots(es.values.size());
  for (Index i = 0; i < es.values.size(); ++i) {
    const double v = es.values(i);
    if (v < -tol_psd) throw NotPsdError("mat_sqrt: eigenvalue " + std::to_string(v) + " below -tol_psd");
    roots(i) = std::sqrt(std::max(v, 0.0));
  }
  return es.vectors * roots.asDiagonal() * es.vectors.adjoint();
}

ComplexMatrix mat_inv_sqrt(const ComplexMatrix& m, double tol_psd) {
  const auto es = eig_hermitian(m);
  RealVector inv(es.values.size());
  for (Index i = 0; i < es.values.size(); ++i) {
    const double v = es.values(i);
    if (v < -tol_psd) throw NotPsdError("mat_inv_sqrt: eigenvalue " + std::to_string(v) + " below -tol_psd");
    inv(i) = v > tol_psd ? 1.0 / std::sqrt(v) : 0.0;
  }
  return es.vectors * inv.asDiagonal() * es.vectors.adjoint();
}

bool is_psd(const ComplexMatrix& m, double tol) { return min_eigenvalue(m) >= -tol; }

ComplexMatrix psd_projection(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(m));
  const RealVector clipped = solver.eigenvalues().cwiseMax(0.0);
  return solver.eigenvectors() * clipped.asDiagonal() * solver.eigenvectors().adjoint();
}

ComplexMatrix projector(const ComplexVector& v) { return v * v.adjoint(); }

Complex trace(const ComplexMatrix& m) { return m.trace(); }

double real_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  // Re tr(a b) = Re sum_ij a_ij b_ji
  return (a.array() * b.transpose().array()).sum().real();
}

}  // namespace choinet
