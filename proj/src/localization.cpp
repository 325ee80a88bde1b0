#include "llab/localization.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "llab/errors.hpp"
#include "llab/linalg.hpp"

namespace llab {

namespace {

std::vector<Eigen::Index> complement_of(const std::vector<Eigen::Index>& p_idx, Eigen::Index n) {
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  for (auto i : p_idx) {
    if (i < 0 || i >= n) throw DomainError("feshbach_map: index out of range");
    if (in[static_cast<std::size_t>(i)]) throw DomainError("feshbach_map: repeated index");
    in[static_cast<std::size_t>(i)] = 1;
  }
  std::vector<Eigen::Index> q;
  for (Eigen::Index i = 0; i < n; ++i)
    if (!in[static_cast<std::size_t>(i)]) q.push_back(i);
  return q;
}

CMat block(const CMat& b, const std::vector<Eigen::Index>& r, const std::vector<Eigen::Index>& c) {
  CMat out(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(c.size()));
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = b(r[i], c[j]);
  return out;
}

CMat schur(const CMat& b11, const CMat& b12, const CMat& b21, const CMat& b22, cplx z, double scale) {
  if (b22.rows() == 0) return b11;
  const CMat shifted = b22 - z * CMat::Identity(b22.rows(), b22.cols());
  Eigen::JacobiSVD<CMat> svd(shifted);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  if (smin <= 1e-10 * scale)
    throw DomainError("feshbach_map: resolvent set violated (z too close to the spectrum of B22)");
  return b11 - b12 * shifted.partialPivLu().solve(b21);
}

double matrix_scale(const CMat& b) { return std::max(1.0, b.cwiseAbs().rowwise().sum().maxCoeff()); }

}  // namespace

CMat feshbach_map(const CMat& b, const std::vector<Eigen::Index>& p_idx, cplx z) {
  if (b.rows() != b.cols()) throw DomainError("feshbach_map: matrix must be square");
  const auto q_idx = complement_of(p_idx, b.rows());
  return schur(block(b, p_idx, p_idx), block(b, p_idx, q_idx), block(b, q_idx, p_idx), block(b, q_idx, q_idx), z,
               matrix_scale(b));
}

CMat feshbach_map(const CMat& b, const CMat& p_basis, cplx z) {
  if (b.rows() != b.cols() || p_basis.rows() != b.rows()) throw DomainError("feshbach_map: dimension mismatch");
  const Eigen::Index n = b.rows(), k = p_basis.cols();
  const CMat gram = p_basis.adjoint() * p_basis;
  if ((gram - CMat::Identity(k, k)).norm() > 1e-10) throw DomainError("feshbach_map: basis must be orthonormal");
  const CMat full = p_basis.householderQr().householderQ() * CMat::Identity(n, n);
  const CMat q = full.rightCols(n - k);
  return schur(p_basis.adjoint() * b * p_basis, p_basis.adjoint() * b * q, q.adjoint() * b * p_basis,
               q.adjoint() * b * q, z, matrix_scale(b));
}

IsospectralityReport check_isospectrality(const CMat& b, const std::vector<Eigen::Index>& p_idx, double tol) {
  if (hermiticity_defect(b) > 1e-12 * matrix_scale(b))
    throw DomainError("check_isospectrality: matrix must be Hermitian");
  IsospectralityReport rep;
  const Eigen::Index n = b.rows();
  const auto q_idx = complement_of(p_idx, n);
  const CMat b11 = block(b, p_idx, p_idx), b12 = block(b, p_idx, q_idx), b21 = block(b, q_idx, p_idx),
             b22 = block(b, q_idx, q_idx);
  rep.scale = matrix_scale(b);
  const double scale = rep.scale;
  if (b22.rows() > 0) {
    const RVec pv = hermitian_eigen(b22).values;
    rep.poles.assign(pv.data(), pv.data() + pv.size());
  }
  const RVec full = hermitian_eigen(b).values;
  const double exclusion = 1e-6 * scale;

  auto e_of = [&](double z) -> CMat {
    if (b22.rows() == 0) return b11;
    const CMat shifted = b22 - z * CMat::Identity(b22.rows(), b22.cols());
    CMat e = b11 - b12 * shifted.partialPivLu().solve(b21);
    return 0.5 * (e + e.adjoint());
  };
  auto count_above = [&](double z) {
    const RVec mu = hermitian_eigen(e_of(z)).values;
    return static_cast<int>((mu.array() > z).count());
  };

  // Intervals between poles, shrunk by the exclusion radius.
  std::vector<std::pair<double, double>> intervals;
  double lo = -2.0 * scale;
  for (double p : rep.poles) {
    if (p - exclusion > lo) intervals.emplace_back(lo, p - exclusion);
    lo = std::max(lo, p + exclusion);
  }
  if (2.0 * scale > lo) intervals.emplace_back(lo, 2.0 * scale);

  const double resolution = 1e-13 * scale;
  std::function<void(double, int, double, int)> bisect = [&](double a, int ca, double c, int cc) {
    if (ca == cc) return;
    if (c - a <= resolution) {
      for (int k = 0; k < ca - cc; ++k) rep.roots.push_back(0.5 * (a + c));
      return;
    }
    const double m = 0.5 * (a + c);
    const int cm = count_above(m);
    bisect(a, ca, m, cm);
    bisect(m, cm, c, cc);
  };
  for (const auto& [a, c] : intervals) {
    bisect(a, count_above(a), c, count_above(c));
    for (Eigen::Index k = 0; k < full.size(); ++k)
      if (full(k) > a && full(k) < c) rep.eigen_outside.push_back(full(k));
  }
  std::sort(rep.roots.begin(), rep.roots.end());
  std::sort(rep.eigen_outside.begin(), rep.eigen_outside.end());

  for (double z : rep.eigen_outside) {
    const RVec mu = hermitian_eigen(e_of(z)).values;
    rep.max_min_singular = std::max(rep.max_min_singular, (mu.array() - z).abs().minCoeff());
  }
  rep.counts_equal = rep.roots.size() == rep.eigen_outside.size();
  if (rep.counts_equal)
    for (std::size_t k = 0; k < rep.roots.size(); ++k)
      rep.max_root_error = std::max(rep.max_root_error, std::abs(rep.roots[k] - rep.eigen_outside[k]));
  rep.ok = rep.counts_equal && rep.max_root_error <= tol * scale && rep.max_min_singular <= tol * scale;
  return rep;
}

namespace {

double smoothstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t), b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

// Angle profile of the partition: its derivative (1-t) smoothstep((1-t)/0.1) puts
// most of the transition at small x, where a fixed sigma covers few occupation numbers.
double transition_density(double t) { return (1.0 - t) * smoothstep((1.0 - t) / 0.1); }

double transition_angle(double x) {
  using boost::math::quadrature::gauss_kronrod;
  static const double total = gauss_kronrod<double, 31>::integrate(transition_density, 0.0, 1.0, 15, 1e-14);
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 0.5 * kPi;
  return 0.5 * kPi * gauss_kronrod<double, 31>::integrate(transition_density, 0.0, x, 15, 1e-14) / total;
}

}  // namespace

double ims_chi1(double x) { return std::cos(transition_angle(x)); }
double ims_chi2(double x) { return std::sin(transition_angle(x)); }

ImsDecomposition ims_decompose(const SpMat& b, const RVec& number, double sigma) {
  if (!(sigma > 0.0)) throw DomainError("ims_decompose: sigma must be > 0");
  if (number.size() != b.rows() || b.rows() != b.cols()) throw DomainError("ims_decompose: dimension mismatch");
  const Eigen::Index n = number.size();
  RVec c1(n), c2(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    c1(i) = ims_chi1(number(i) / sigma);
    c2(i) = ims_chi2(number(i) / sigma);
    if (std::abs(c1(i) * c1(i) + c2(i) * c2(i) - 1.0) > 1e-14)
      throw DomainError("ims_decompose: partition does not sum to one");
  }
  ImsDecomposition d;
  const CVec c1c = c1.cast<cplx>(), c2c = c2.cast<cplx>();
  d.local1 = c1c.asDiagonal() * b * c1c.asDiagonal();
  d.local2 = c2c.asDiagonal() * b * c2c.asDiagonal();
  d.double_comm1 = b;
  d.double_comm2 = b;
  for (int which = 0; which < 2; ++which) {
    SpMat& m = which == 0 ? d.double_comm1 : d.double_comm2;
    const RVec& c = which == 0 ? c1 : c2;
    for (Eigen::Index col = 0; col < m.outerSize(); ++col)
      for (SpMat::InnerIterator it(m, col); it; ++it) {
        const double diff = c(it.row()) - c(it.col());
        it.valueRef() *= diff * diff;
      }
    m.prune(cplx(0.0));
  }
  const SpMat dc = d.double_comm1 + d.double_comm2;
  const SpMat residual = b - d.local1 - d.local2 - 0.5 * dc;
  d.residual = residual.norm();
  const SpMat herm = 0.5 * (b + SpMat(b.adjoint()));
  d.b_norm = hermitian_norm(herm);
  d.double_comm_norm = hermitian_norm(SpMat(0.5 * (dc + SpMat(dc.adjoint()))));
  return d;
}

}  // namespace llab
