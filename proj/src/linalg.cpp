#include "llab/linalg.hpp"

#include <cmath>

#include "llab/errors.hpp"

namespace llab {

HermitianEigen hermitian_eigen(const CMat& a) {
  Eigen::SelfAdjointEigenSolver<CMat> es(a);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

double min_eigenvalue(const CMat& a) {
  if (a.rows() == 0) throw DomainError("min_eigenvalue: empty matrix");
  Eigen::SelfAdjointEigenSolver<CMat> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
  return es.eigenvalues()(0);
}

double spectral_norm(const CMat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMat> svd(a);
  return svd.singularValues()(0);
}

double hermiticity_defect(const CMat& a) {
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

double hermiticity_defect(const SpMat& a) {
  const SpMat d = a - SpMat(a.adjoint());
  double m = 0.0;
  for (int k = 0; k < d.outerSize(); ++k)
    for (SpMat::InnerIterator it(d, k); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

CMat orthogonal_complement(const CVec& v) {
  const Eigen::Index n = v.size();
  if (n == 0 || v.norm() == 0.0) throw DomainError("orthogonal_complement: zero vector");
  Eigen::HouseholderQR<CMat> qr(CMat(v / v.norm()));
  const CMat q = qr.householderQ() * CMat::Identity(n, n);
  return q.rightCols(n - 1);
}

CMat principal_submatrix(const SpMat& a, const std::vector<Eigen::Index>& idx) {
  std::vector<Eigen::Index> pos(static_cast<std::size_t>(a.rows()), -1);
  for (std::size_t k = 0; k < idx.size(); ++k) pos[static_cast<std::size_t>(idx[k])] = static_cast<Eigen::Index>(k);
  CMat out = CMat::Zero(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const Eigen::Index col = idx[k];
    for (SpMat::InnerIterator it(a, col); it; ++it) {
      const Eigen::Index r = pos[static_cast<std::size_t>(it.row())];
      if (r >= 0) out(r, static_cast<Eigen::Index>(k)) = it.value();
    }
  }
  return out;
}

CMat principal_submatrix(const CMat& a, const std::vector<Eigen::Index>& idx) {
  const auto n = static_cast<Eigen::Index>(idx.size());
  CMat out(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) out(i, j) = a(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("loglog_slope: need two or more points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] > 0.0) || !(y[k] > 0.0)) throw DomainError("loglog_slope: non-positive sample");
    const double lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace llab

namespace llab {

double hermitian_norm(const SpMat& a) {
  const Eigen::Index n = a.rows();
  if (n == 0) return 0.0;
  if (n <= 1500) {
    Eigen::SelfAdjointEigenSolver<CMat> es(CMat(a), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
    return std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(n - 1)));
  }
  const int steps = static_cast<int>(std::min<Eigen::Index>(n, 250));
  CMat basis(n, steps + 1);
  RVec alpha = RVec::Zero(steps), beta = RVec::Zero(steps);
  CVec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = cplx(1.0 + 0.37 * std::sin(0.71 * static_cast<double>(i)), 0.0);
  v.normalize();
  basis.col(0) = v;
  int used = steps;
  for (int k = 0; k < steps; ++k) {
    CVec w = a * basis.col(k);
    alpha(k) = basis.col(k).dot(w).real();
    // Full reorthogonalization, applied twice.
    for (int pass = 0; pass < 2; ++pass)
      w -= basis.leftCols(k + 1) * (basis.leftCols(k + 1).adjoint() * w);
    beta(k) = w.norm();
    if (beta(k) < 1e-13 * std::max(1.0, std::abs(alpha(k)))) {
      used = k + 1;
      break;
    }
    basis.col(k + 1) = w / beta(k);
  }
  RMat t = RMat::Zero(used, used);
  for (int k = 0; k < used; ++k) {
    t(k, k) = alpha(k);
    if (k + 1 < used) t(k, k + 1) = t(k + 1, k) = beta(k);
  }
  Eigen::SelfAdjointEigenSolver<RMat> es(t, Eigen::EigenvaluesOnly);
  return std::max(std::abs(es.eigenvalues()(0)), std::abs(es.eigenvalues()(used - 1)));
}

}  // namespace llab
