#include "choinet/sdp.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "choinet/errors.hpp"

namespace choinet {
namespace {

struct BlockRow {
  Index row;
  const ComplexMatrix* a;
};

// Re tr(a b) without forming the product.
double inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.array() * b.transpose().array()).sum().real();
}

ComplexMatrix herm(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

// Largest alpha with x + alpha dx PSD (infinity if unbounded); x must be PD.
double max_step(const ComplexMatrix& x, const ComplexMatrix& dx) {
  Eigen::LLT<ComplexMatrix> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  const ComplexMatrix t = llt.matrixL().solve(dx);
  const ComplexMatrix w = llt.matrixL().solve(t.adjoint().eval()).adjoint();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm(w), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()[0];
  return lmin < 0.0 ? -1.0 / lmin : INFINITY;
}

class Solver {
 public:
  Solver(const SdpProblem& problem, const SdpOptions& opts) : opts_(opts), ex_(expand(problem.cone)) {
    const std::size_t nb = ex_.block_dims.size();
    m_ = static_cast<Index>(ex_.rows.size());
    by_block_.resize(nb);
    for (Index k = 0; k < m_; ++k) {
      for (const auto& part : ex_.rows[static_cast<std::size_t>(k)]) by_block_[part.block].push_back({k, &part.a});
    }
    c_.resize(nb);
    for (std::size_t j = 0; j < nb; ++j) c_[j] = ComplexMatrix::Zero(ex_.block_dims[j], ex_.block_dims[j]);
    for (const auto& term : problem.objective) {
      if (term.block >= ex_.original_blocks || term.c.rows() != ex_.block_dims[term.block] ||
          term.c.cols() != term.c.rows()) {
        throw InvalidArgument(fmt::format("SdpProblem: objective term on block {} has the wrong size", term.block));
      }
      c_[term.block] += herm(term.c);
    }
    for (auto n : ex_.block_dims) n_total_ += static_cast<double>(n);
  }

  SdpResult run() {
    const std::size_t nb = c_.size();
    const double b_norm = ex_.rhs.norm();
    double c_norm = 0.0;
    for (const auto& c : c_) c_norm += c.squaredNorm();
    c_norm = std::sqrt(c_norm);

    std::vector<ComplexMatrix> x(nb), z(nb);
    for (std::size_t j = 0; j < nb; ++j) {
      const Index n = ex_.block_dims[j];
      double xi = std::max(10.0, std::sqrt(static_cast<double>(n)));
      double eta = std::max({10.0, std::sqrt(static_cast<double>(n)), c_[j].norm()});
      for (const auto& br : by_block_[j]) {
        const double an = br.a->norm();
        xi = std::max(xi, static_cast<double>(n) * (1.0 + std::abs(ex_.rhs[br.row])) / (1.0 + an));
        eta = std::max(eta, an);
      }
      x[j] = xi * identity(n);
      z[j] = eta * identity(n);
    }
    RealVector y = RealVector::Zero(m_);

    SdpResult res;
    int stalled = 0;
    for (int it = 0; it <= opts_.max_iter; ++it) {
      const RealVector rp = ex_.rhs - apply_a(x);
      std::vector<ComplexMatrix> rd(nb);
      double rd_norm = 0.0;
      double pobj = 0.0;
      double xz = 0.0;
      for (std::size_t j = 0; j < nb; ++j) {
        rd[j] = c_[j] - z[j] - apply_at(y, j);
        rd_norm += rd[j].squaredNorm();
        pobj += inner(c_[j], x[j]);
        xz += inner(x[j], z[j]);
      }
      rd_norm = std::sqrt(rd_norm);
      const double dobj = ex_.rhs.dot(y);
      const double mu = xz / n_total_;

      res.iterations = it;
      res.primal = pobj;
      res.dual = dobj;
      res.primal_infeasibility = rp.norm() / (1.0 + b_norm);
      res.dual_infeasibility = rd_norm / (1.0 + c_norm);
      const double scale = 1.0 + std::abs(pobj) + std::abs(dobj);
      const double gap = std::max(std::abs(pobj - dobj), xz) / scale;
      if (res.primal_infeasibility < opts_.tol && res.dual_infeasibility < opts_.tol && gap < opts_.tol) {
        res.status = SdpStatus::Optimal;
        break;
      }
      if (it == opts_.max_iter || stalled >= 5) {
        res.status = SdpStatus::MaxIter;
        break;
      }

      std::vector<ComplexMatrix> zinv(nb);
      for (std::size_t j = 0; j < nb; ++j) {
        Eigen::LLT<ComplexMatrix> llt(z[j]);
        if (llt.info() != Eigen::Success) {
          res.status = SdpStatus::Failed;
          return finish(res, x);
        }
        zinv[j] = llt.solve(identity(z[j].rows()));
      }

      Eigen::MatrixXd schur = Eigen::MatrixXd::Zero(m_, m_);
      for (std::size_t j = 0; j < nb; ++j) {
        for (const auto& bk : by_block_[j]) {
          const ComplexMatrix g = zinv[j] * (*bk.a) * x[j];
          for (const auto& bl : by_block_[j]) schur(bk.row, bl.row) += inner(*bl.a, g);
        }
      }
      schur = 0.5 * (schur + schur.transpose()).eval();
      Eigen::LLT<Eigen::MatrixXd> chol(schur);
      Eigen::LDLT<Eigen::MatrixXd> ldlt;
      const bool use_llt = chol.info() == Eigen::Success;
      if (!use_llt) {
        const double reg = 1e-13 * std::max(1.0, schur.diagonal().cwiseAbs().maxCoeff());
        ldlt.compute(schur + reg * Eigen::MatrixXd::Identity(m_, m_));
      }
      auto solve = [&](const RealVector& rhs) -> RealVector {
        if (use_llt) return chol.solve(rhs);
        return ldlt.solve(rhs);
      };

      // Direction for a complementarity target R = sigma mu Z^-1 - X (+ corrector).
      std::vector<ComplexMatrix> xrdz(nb);
      for (std::size_t j = 0; j < nb; ++j) xrdz[j] = x[j] * rd[j] * zinv[j];
      const RealVector a_xrdz = apply_a(xrdz);
      auto direction = [&](const std::vector<ComplexMatrix>& r, std::vector<ComplexMatrix>& dx, RealVector& dy,
                           std::vector<ComplexMatrix>& dz) {
        dy = solve(rp - apply_a(r) + a_xrdz);
        for (std::size_t j = 0; j < nb; ++j) {
          dz[j] = rd[j] - apply_at(dy, j);
          dx[j] = r[j] - herm(x[j] * dz[j] * zinv[j]);
        }
      };
      auto steps = [&](const std::vector<ComplexMatrix>& dx, const std::vector<ComplexMatrix>& dz) {
        double ap = INFINITY;
        double ad = INFINITY;
        for (std::size_t j = 0; j < nb; ++j) {
          ap = std::min(ap, max_step(x[j], dx[j]));
          ad = std::min(ad, max_step(z[j], dz[j]));
        }
        return std::pair{ap, ad};
      };

      std::vector<ComplexMatrix> r(nb), dx(nb), dz(nb);
      RealVector dy;
      for (std::size_t j = 0; j < nb; ++j) r[j] = -x[j];
      direction(r, dx, dy, dz);
      auto [ap_aff, ad_aff] = steps(dx, dz);
      ap_aff = std::min(1.0, ap_aff);
      ad_aff = std::min(1.0, ad_aff);
      double xz_aff = 0.0;
      for (std::size_t j = 0; j < nb; ++j) xz_aff += inner(x[j] + ap_aff * dx[j], z[j] + ad_aff * dz[j]);
      const double sigma = std::clamp(std::pow(std::max(xz_aff, 0.0) / n_total_ / mu, 3.0), 0.0, 1.0);

      for (std::size_t j = 0; j < nb; ++j) {
        r[j] = sigma * mu * zinv[j] - x[j] - herm(dx[j] * dz[j] * zinv[j]);
      }
      direction(r, dx, dy, dz);
      auto [ap, ad] = steps(dx, dz);
      ap = std::min(1.0, 0.95 * ap);
      ad = std::min(1.0, 0.95 * ad);
      stalled = (ap < 1e-10 && ad < 1e-10) ? stalled + 1 : 0;
      for (std::size_t j = 0; j < nb; ++j) {
        x[j] = herm(x[j] + ap * dx[j]);
        z[j] = herm(z[j] + ad * dz[j]);
      }
      y += ad * dy;
    }
    return finish(res, x);
  }

 private:
  RealVector apply_a(const std::vector<ComplexMatrix>& x) const {
    RealVector out = RealVector::Zero(m_);
    for (std::size_t j = 0; j < by_block_.size(); ++j) {
      for (const auto& br : by_block_[j]) out[br.row] += inner(*br.a, x[j]);
    }
    return out;
  }

  ComplexMatrix apply_at(const RealVector& y, std::size_t j) const {
    ComplexMatrix out = ComplexMatrix::Zero(ex_.block_dims[j], ex_.block_dims[j]);
    for (const auto& br : by_block_[j]) out += y[br.row] * (*br.a);
    return out;
  }

  SdpResult& finish(SdpResult& res, const std::vector<ComplexMatrix>& x) const {
    res.x.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(ex_.original_blocks));
    return res;
  }

  SdpOptions opts_;
  ExpandedSpec ex_;
  Index m_ = 0;
  double n_total_ = 0.0;
  std::vector<std::vector<BlockRow>> by_block_;
  std::vector<ComplexMatrix> c_;
};

}  // namespace

SdpResult minimize(const SdpProblem& problem, const SdpOptions& opts) {
  Solver solver(problem, opts);
  return solver.run();
}

}  // namespace choinet
