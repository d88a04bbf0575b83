#pragma once

// Dense complex linear algebra on tensor-product spaces.
//
// Index convention: factor 0 is the leftmost tensor slot and composite indices are
// row-major, i = i0*d1*...*dn + i1*d2*...*dn + ... + in. Every routine that takes a
// Dims list relies on this layout, as does the JSON config format.

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "choinet/tolerances.hpp"

namespace choinet {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Local Hilbert-space dimensions, factor 0 first.
using Dims = std::vector<Index>;

/// Factor positions inside a Dims list.
using FactorSet = std::vector<std::size_t>;

Index total_dim(const Dims& dims);

/// Throws InvalidArgument unless `m` is square with side product(dims) and every
/// dimension is positive.
void check_dims(const ComplexMatrix& m, const Dims& dims);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector kron(const ComplexVector& a, const ComplexVector& b);

ComplexMatrix identity(Index dim);

/// Reduced operator on the `keep` factors (kept in their original order).
ComplexMatrix partial_trace(const ComplexMatrix& m, const Dims& dims, const FactorSet& keep);

/// Transpose of the factors listed in `on`, in the computational basis.
ComplexMatrix partial_transpose(const ComplexMatrix& m, const Dims& dims, const FactorSet& on);

/// Exchanges the two factors of a bipartite operator on dims {d0, d1}.
ComplexMatrix swap_factors(const ComplexMatrix& m, const Dims& dims);

/// Zero-pads each factor of `m` from `from[k]` to `to[k]` levels; the original
/// levels occupy the first from[k] slots of every factor.
ComplexMatrix embed(const ComplexMatrix& m, const Dims& from, const Dims& to);

/// max_{ij} |m_ij - conj(m_ji)|
double hermiticity_error(const ComplexMatrix& m);

ComplexMatrix hermitian_part(const ComplexMatrix& m);

struct EigenSystem {
  RealVector values;      // descending
  ComplexMatrix vectors;  // columns match `values`
};

/// Throws InvalidArgument if `m` is not Hermitian within `tol_herm`.
EigenSystem eig_hermitian(const ComplexMatrix& m, double tol_herm = default_tolerances().herm);

RealVector eigvals_hermitian(const ComplexMatrix& m, double tol_herm = default_tolerances().herm);

double min_eigenvalue(const ComplexMatrix& m, double tol_herm = default_tolerances().herm);

/// Principal square root of a PSD matrix. Eigenvalues in [-tol_psd, 0) are clamped;
/// anything below -tol_psd throws NotPsdError.
ComplexMatrix mat_sqrt(const ComplexMatrix& m, double tol_psd = default_tolerances().psd);

/// Pseudo-inverse square root on the support: eigenvalues <= tol_psd map to zero.
ComplexMatrix mat_inv_sqrt(const ComplexMatrix& m, double tol_psd = default_tolerances().psd);

bool is_psd(const ComplexMatrix& m, double tol = default_tolerances().psd);

/// Frobenius-nearest PSD matrix (negative eigenvalues dropped).
ComplexMatrix psd_projection(const ComplexMatrix& m);

ComplexMatrix projector(const ComplexVector& v);

Complex trace(const ComplexMatrix& m);

/// Re tr(a b); the real inner product on Hermitian matrices when a is Hermitian.
double real_inner(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace choinet
