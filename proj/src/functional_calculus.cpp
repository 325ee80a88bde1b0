#include "llab/functional_calculus.hpp"

#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "llab/errors.hpp"
#include "llab/linalg.hpp"
#include "llab/parallel.hpp"

namespace llab {

PolynomialBump::PolynomialBump(double center, double radius) : center_(center), radius_(radius) {
  if (!(radius > 0.0)) throw DomainError("PolynomialBump: radius must be > 0");
  // (1 - s^2)^4 = 1 - 4 s^2 + 6 s^4 - 4 s^6 + s^8
  const double c[9] = {1, 0, -4, 0, 6, 0, -4, 0, 1};
  for (int i = 0; i < 9; ++i) coeff_[i] = c[i];
}

double PolynomialBump::derivative(int k, double x) const {
  const double s = (x - center_) / radius_;
  if (std::abs(s) >= 1.0 || k > 8) return 0.0;
  double acc = 0.0;
  for (int i = 8; i >= k; --i) {
    double falling = 1.0;
    for (int j = 0; j < k; ++j) falling *= static_cast<double>(i - j);
    acc = acc * s + coeff_[i] * falling;
  }
  return acc / std::pow(radius_, k);
}

namespace {

// Cutoff in y: 1 on [0, Y/2], (1 - t^2)^4 with t = 2 (y/Y - 1/2) above.
double cutoff(double y, double ymax) {
  const double t = 2.0 * (y / ymax - 0.5);
  if (t <= 0.0) return 1.0;
  if (t >= 1.0) return 0.0;
  return std::pow(1.0 - t * t, 4);
}

double cutoff_derivative(double y, double ymax) {
  const double t = 2.0 * (y / ymax - 0.5);
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 4.0 * std::pow(1.0 - t * t, 3) * (-2.0 * t) * 2.0 / ymax;
}

struct Rule {
  std::vector<double> x, w;  // on [-1, 1]
};

Rule legendre(int n) {
  Rule r;
  auto push = [&](const auto& abscissa, const auto& weights) {
    const bool odd = n % 2 == 1;
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
      r.x.push_back(abscissa[i]);
      r.w.push_back(weights[i]);
      if (!(odd && i == 0)) {
        r.x.push_back(-abscissa[i]);
        r.w.push_back(weights[i]);
      }
    }
  };
  using boost::math::quadrature::gauss;
  switch (n) {
    case 4: push(gauss<double, 4>::abscissa(), gauss<double, 4>::weights()); break;
    case 6: push(gauss<double, 6>::abscissa(), gauss<double, 6>::weights()); break;
    case 8: push(gauss<double, 8>::abscissa(), gauss<double, 8>::weights()); break;
    case 10: push(gauss<double, 10>::abscissa(), gauss<double, 10>::weights()); break;
    case 12: push(gauss<double, 12>::abscissa(), gauss<double, 12>::weights()); break;
    default: throw DomainError("HsOptions: node count must be one of 4, 6, 8, 10, 12");
  }
  return r;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

CMat hs_functional_calculus(const SmoothFunction& f, const CMat& a, int p, const HsOptions& opts) {
  if (a.rows() != a.cols()) throw DomainError("hs_functional_calculus: matrix must be square");
  if (hermiticity_defect(a) > 1e-12 * std::max(1.0, a.norm()))
    throw DomainError("hs_functional_calculus: matrix must be Hermitian");
  if (p < 0 || opts.order < 1) throw DomainError("hs_functional_calculus: invalid order");
  const Eigen::Index n = a.rows();
  const Rule rx = legendre(opts.nodes_x), ry = legendre(opts.nodes_y);
  const double ymax = opts.y_max;

  // y panels: [0, y_min], geometric up to Y/2, then four uniform panels on [Y/2, Y].
  std::vector<double> edges{0.0, std::min(opts.y_min, 0.5 * ymax)};
  while (edges.back() < 0.5 * ymax) edges.push_back(std::min(0.5 * ymax, 2.0 * edges.back()));
  for (int k = 1; k <= 4; ++k) edges.push_back(0.5 * ymax * (1.0 + k / 4.0));

  struct YNode {
    double y, w;
  };
  std::vector<YNode> ynodes;
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    const double h = 0.5 * (edges[k + 1] - edges[k]), m = 0.5 * (edges[k + 1] + edges[k]);
    for (std::size_t i = 0; i < ry.x.size(); ++i) ynodes.push_back({m + h * ry.x[i], h * ry.w[i]});
  }

  const double lo = f.lo(), hi = f.hi(), width = hi - lo;
  const int order = opts.order;
  const double pfact = factorial(p);
  const CMat id = CMat::Identity(n, n);
  std::vector<CMat> partial(ynodes.size(), CMat::Zero(n, n));

  auto level = [&](std::size_t k) {
    const double y = ynodes[k].y, wy = ynodes[k].w;
    const double tau = cutoff(y, ymax), dtau = cutoff_derivative(y, ymax);
    const int panels = std::max(opts.min_x_panels, static_cast<int>(std::ceil(width / std::max(y, opts.y_min))));
    const double hx = width / panels;
    CMat acc = CMat::Zero(n, n);
    for (int j = 0; j < panels; ++j) {
      const double mid = lo + (j + 0.5) * hx;
      for (std::size_t i = 0; i < rx.x.size(); ++i) {
        const double x = mid + 0.5 * hx * rx.x[i];
        const double w = 0.5 * hx * rx.w[i] * wy;
        // (d_x + i d_y) of sum_k f^(k)(x) (iy)^k / k! * tau(y)
        cplx iyk(1.0, 0.0), series(0.0, 0.0);
        for (int m = 0; m <= order; ++m) {
          series += f.derivative(m, x) * iyk / factorial(m);
          if (m < order) iyk *= cplx(0.0, y);
        }
        const cplx dbar = f.derivative(order + 1, x) * iyk / factorial(order) * tau + cplx(0.0, dtau) * series;
        if (dbar == cplx(0.0)) continue;
        const cplx z(x, y);
        const Eigen::PartialPivLU<CMat> lu(z * id - a);
        CMat r = lu.solve(id);
        CMat power = r;
        for (int q = 0; q < p; ++q) power = power * r;
        acc += (w * dbar) * power;
      }
    }
    partial[k] = acc;
  };

  const auto count = static_cast<long>(ynodes.size());
  for_each_index(count, opts.exec, [&](long k) { level(static_cast<std::size_t>(k)); });
  CMat upper = CMat::Zero(n, n);
  for (const auto& m : partial) upper += m;
  upper *= -pfact / (2.0 * kPi);
  return upper + upper.adjoint();
}

CMat spectral_calculus(const SmoothFunction& f, const CMat& a, int p) {
  const HermitianEigen eig = hermitian_eigen(0.5 * (a + a.adjoint()));
  RVec fv(eig.values.size());
  for (Eigen::Index i = 0; i < fv.size(); ++i) fv(i) = f.derivative(p, eig.values(i));
  return eig.vectors * fv.cast<cplx>().asDiagonal() * eig.vectors.adjoint();
}

HsCheck hs_checked(const SmoothFunction& f, const CMat& a, int p, double tol, const HsOptions& opts) {
  HsCheck c;
  c.hs = hs_functional_calculus(f, a, p, opts);
  c.spectral = spectral_calculus(f, a, p);
  c.discrepancy = c.hs.rows() > 0 ? spectral_norm(c.hs - c.spectral) : 0.0;
  if (c.discrepancy > tol)
    throw NumericalError("hs_functional_calculus: quadrature missed tolerance (discrepancy " +
                         std::to_string(c.discrepancy) + ")");
  return c;
}

}  // namespace llab
