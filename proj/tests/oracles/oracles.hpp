#pragma once

// Test-side reference implementations, written with plain index loops and no
// shared code with the library beyond the matrix type.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Dims = std::vector<long>;

inline long prod(const Dims& d) {
  long n = 1;
  for (long x : d) n *= x;
  return n;
}

// digits of a row-major multi-index, factor 0 leftmost
inline std::vector<long> digits(long idx, const Dims& dims) {
  std::vector<long> out(dims.size());
  for (long k = static_cast<long>(dims.size()) - 1; k >= 0; --k) {
    out[k] = idx % dims[k];
    idx /= dims[k];
  }
  return out;
}

inline long compose(const std::vector<long>& dig, const Dims& dims) {
  long idx = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) idx = idx * dims[k] + dig[k];
  return idx;
}

// Eigenvalues (ascending) of a Hermitian matrix by cyclic Jacobi on the real
// 2n x 2n embedding [[Re, -Im], [Im, Re]], whose spectrum is each value twice.
inline std::vector<double> jacobi_eigvals(const Mat& h, int sweeps = 100) {
  const long n = h.rows();
  const long m = 2 * n;
  std::vector<double> a(m * m);
  auto at = [&](long i, long j) -> double& { return a[i * m + j]; };
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      const Complex z = 0.5 * (h(i, j) + std::conj(h(j, i)));
      at(i, j) = z.real();
      at(i + n, j + n) = z.real();
      at(i, j + n) = -z.imag();
      at(i + n, j) = z.imag();
    }
  }
  for (int s = 0; s < sweeps; ++s) {
    double off = 0.0;
    for (long p = 0; p < m; ++p)
      for (long q = p + 1; q < m; ++q) off += at(p, q) * at(p, q);
    if (off < 1e-30) break;
    for (long p = 0; p < m; ++p) {
      for (long q = p + 1; q < m; ++q) {
        if (std::abs(at(p, q)) < 1e-300) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;
        for (long k = 0; k < m; ++k) {
          const double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - sn * akq;
          at(k, q) = sn * akp + c * akq;
        }
        for (long k = 0; k < m; ++k) {
          const double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - sn * aqk;
          at(q, k) = sn * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(m);
  for (long i = 0; i < m; ++i) ev[i] = at(i, i);
  std::sort(ev.begin(), ev.end());
  std::vector<double> out;
  for (long i = 0; i < m; i += 2) out.push_back(0.5 * (ev[i] + ev[i + 1]));
  return out;
}

inline double min_eig(const Mat& h) { return jacobi_eigvals(h).front(); }

inline Mat partial_trace(const Mat& m, const Dims& dims, const std::vector<int>& keep) {
  Dims kd;
  for (int k : keep) kd.push_back(dims[k]);
  const long n = prod(dims);
  Mat out = Mat::Zero(prod(kd), prod(kd));
  for (long r = 0; r < n; ++r) {
    const auto dr = digits(r, dims);
    for (long c = 0; c < n; ++c) {
      const auto dc = digits(c, dims);
      bool diag = true;
      for (std::size_t k = 0; k < dims.size() && diag; ++k) {
        if (std::find(keep.begin(), keep.end(), static_cast<int>(k)) == keep.end() && dr[k] != dc[k]) diag = false;
      }
      if (!diag) continue;
      std::vector<long> kr, kc;
      for (int k : keep) {
        kr.push_back(dr[k]);
        kc.push_back(dc[k]);
      }
      out(compose(kr, kd), compose(kc, kd)) += m(r, c);
    }
  }
  return out;
}

inline Mat partial_transpose(const Mat& m, const Dims& dims, int factor) {
  const long n = prod(dims);
  Mat out(n, n);
  for (long r = 0; r < n; ++r) {
    for (long c = 0; c < n; ++c) {
      auto dr = digits(r, dims);
      auto dc = digits(c, dims);
      std::swap(dr[factor], dc[factor]);
      out(compose(dr, dims), compose(dc, dims)) = m(r, c);
    }
  }
  return out;
}

// Operator `op`, whose own factor order is `on`, acting on the full space.
inline Mat place(const Mat& op, const std::vector<int>& on, const Dims& dims) {
  Dims od;
  for (int k : on) od.push_back(dims[k]);
  const long n = prod(dims);
  Mat out = Mat::Zero(n, n);
  for (long r = 0; r < n; ++r) {
    const auto dr = digits(r, dims);
    for (long c = 0; c < n; ++c) {
      const auto dc = digits(c, dims);
      bool rest_equal = true;
      for (std::size_t k = 0; k < dims.size() && rest_equal; ++k) {
        if (std::find(on.begin(), on.end(), static_cast<int>(k)) == on.end() && dr[k] != dc[k]) rest_equal = false;
      }
      if (!rest_equal) continue;
      std::vector<long> orr, oc;
      for (int k : on) {
        orr.push_back(dr[k]);
        oc.push_back(dc[k]);
      }
      out(r, c) = op(compose(orr, od), compose(oc, od));
    }
  }
  return out;
}

struct Placed {
  Mat op;
  std::vector<int> on;
};

// tr_{all but keep}[(prod of effects)(tensor product of states)] on the factor list `dims`.
inline Mat contract(const Dims& dims, const std::vector<Placed>& states, const std::vector<Placed>& effects,
                    const std::vector<int>& keep) {
  const long n = prod(dims);
  Mat s = Mat::Identity(n, n);
  for (const auto& p : states) s = place(p.op, p.on, dims) * s;
  Mat e = Mat::Identity(n, n);
  for (const auto& p : effects) e = place(p.op, p.on, dims) * e;
  return partial_trace(e * s, dims, keep);
}

}  // namespace oracle
