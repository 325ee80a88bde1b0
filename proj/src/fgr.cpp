#include "llab/fgr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "llab/errors.hpp"
#include "llab/linalg.hpp"
#include "llab/parallel.hpp"

namespace llab {

CMat coupling_m(const ParticleSystem& ps, const FormFactor& ff, double u) {
  if (u == 0.0 || !std::isfinite(u)) throw NumericalError("coupling_m: u must be nonzero and finite");
  const cplx g1 = glued_g1(ff, ps.beta, u);
  const cplx g2 = glued_g2(ff, ps.beta, u);
  if (!std::isfinite(std::abs(g1)) || !std::isfinite(std::abs(g2)))
    throw NumericalError("coupling_m: thermal density overflows at this u");
  const DoubledCoupling d = doubled_operators(ps);
  return g1 * d.left - g2 * d.right;
}

FgrOperator gamma_operator(const ParticleSystem& ps, const FormFactor& ff, double e) {
  const LiouvilleParticleSpectrum lp = particle_liouvillian(ps);
  const auto k = lp.find(e);
  if (!k) throw DomainError("gamma_operator: e is not an eigenvalue of L_p");
  FgrOperator op;
  op.e = lp.values[*k];
  const Eigen::Index n2 = lp.diagonal.size();
  op.gamma = CMat::Zero(n2, n2);
  for (std::size_t j = 0; j < lp.values.size(); ++j) {
    if (j == *k) continue;
    const CMat m = coupling_m(ps, ff, op.e - lp.values[j]);
    const RVec mask = lp.mask(j);
    op.gamma += kAngularMeasure * m.adjoint() * mask.cast<cplx>().asDiagonal() * m;
  }
  op.gamma = 0.5 * (op.gamma + CMat(op.gamma.adjoint()));
  for (int idx : lp.members[*k]) op.range.push_back(idx);
  const RVec pm = lp.mask(*k);
  op.gamma_p = pm.cast<cplx>().asDiagonal() * op.gamma * pm.cast<cplx>().asDiagonal();
  return op;
}

double fgr_gamma_min(const ParticleSystem& ps, const FgrOperator& op) {
  CMat block = principal_submatrix(op.gamma_p, op.range);
  if (op.e == 0.0) {
    const GibbsVector g = gibbs_vector(ps);
    CVec v(static_cast<Eigen::Index>(op.range.size()));
    for (std::size_t k = 0; k < op.range.size(); ++k) v(static_cast<Eigen::Index>(k)) = g.omega(op.range[k]);
    if (block.rows() < 2) return 0.0;
    const CMat u = orthogonal_complement(v);
    block = u.adjoint() * block * u;
  }
  return min_eigenvalue(0.5 * (block + block.adjoint()));
}

namespace {

// inf sigma(G[S,T] G[T,S]) on C^S; zero when T is empty.
double sandwich_min(const CMat& g, const std::vector<int>& s, const std::vector<int>& t) {
  if (s.empty() || t.empty()) return 0.0;
  CMat st(static_cast<Eigen::Index>(s.size()), static_cast<Eigen::Index>(t.size()));
  for (std::size_t a = 0; a < s.size(); ++a)
    for (std::size_t b = 0; b < t.size(); ++b) st(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = g(s[a], t[b]);
  return min_eigenvalue(st * st.adjoint());
}

}  // namespace

GapLowerBound gap_lower_bound(const ParticleSystem& ps, const FormFactor& ff, double e) {
  validate(ps);
  const int n = ps.size();
  const double tol = energy_tolerance(ps);
  const RVec& E = ps.energies;
  GapLowerBound b;

  // Index sets: i in N_l pairs with j in N_r^{(i)} when E_i - E_j = e.
  std::vector<std::vector<int>> right_of(n), left_of(n);
  std::vector<bool> in_l(n, false), in_r(n, false);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (std::abs(E(i) - E(j) - e) <= tol) {
        right_of[i].push_back(j);
        left_of[j].push_back(i);
        in_l[i] = in_r[j] = true;
      }
  std::vector<int> r_comp, l_comp;
  for (int k = 0; k < n; ++k) {
    if (!in_r[k]) r_comp.push_back(k);
    if (!in_l[k]) l_comp.push_back(k);
  }
  double inf_left = std::numeric_limits<double>::infinity();
  double inf_right = std::numeric_limits<double>::infinity();
  // The right-hand factor uses conj(G); its spectra coincide with those of G here.
  for (int m = 0; m < n; ++m)
    if (in_l[m]) inf_left = std::min(inf_left, sandwich_min(ps.G, right_of[m], r_comp));
  for (int k = 0; k < n; ++k)
    if (in_r[k]) inf_right = std::min(inf_right, sandwich_min(ps.G, left_of[k], l_comp));
  if (!std::isfinite(inf_left) || !std::isfinite(inf_right)) throw DomainError("gap_lower_bound: e not in sigma(L_p)");
  b.delta0 = inf_left + inf_right;

  double inf_weight = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double d = std::abs(E(i) - E(j));
      if (d <= tol) continue;
      const double gv = std::abs(ff.value(d));
      inf_weight = std::min(inf_weight, d * kAngularMeasure * gv * gv);
    }
  b.part1_bound = std::isfinite(inf_weight) ? b.delta0 * inf_weight : 0.0;

  // g0 over E_mn = E_m - E_n < 0 with energies shifted by E_0.
  const double shift = E(0);
  double g0 = std::numeric_limits<double>::infinity();
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k) {
      const double emn = E(m) - E(k);
      if (emn >= -tol) continue;
      const double gv = std::abs(ff.value(-emn));
      const double val = std::norm(ps.G(k, m)) * std::exp(ps.beta * (E(k) - shift)) / std::expm1(-ps.beta * emn) *
                         emn * emn * kAngularMeasure * gv * gv;
      g0 = std::min(g0, val);
    }
  b.g0 = std::isfinite(g0) ? g0 : 0.0;
  b.Z = gibbs_vector(ps).Z;
  b.gap = 2.0 * b.g0 * b.Z;
  return b;
}

FgrReport fgr_condition(const ParticleSystem& ps, const FormFactor& ff, Exec exec) {
  const LiouvilleParticleSpectrum lp = particle_liouvillian(ps);
  FgrReport r;
  r.entries.resize(lp.values.size());
  std::vector<FgrOperator> ops(lp.values.size());
  std::vector<GapLowerBound> bounds(lp.values.size());
  for_each_index(static_cast<long>(lp.values.size()), exec, [&](long k) {
    ops[static_cast<std::size_t>(k)] = gamma_operator(ps, ff, lp.values[static_cast<std::size_t>(k)]);
    bounds[static_cast<std::size_t>(k)] = gap_lower_bound(ps, ff, lp.values[static_cast<std::size_t>(k)]);
  });
  r.all_positive = true;
  for (std::size_t k = 0; k < lp.values.size(); ++k) {
    FgrEntry& en = r.entries[k];
    en.e = lp.values[k];
    en.multiplicity = lp.multiplicity(k);
    en.gamma_min = fgr_gamma_min(ps, ops[k]);
    en.delta0 = bounds[k].delta0;
    en.bound = en.e == 0.0 ? bounds[k].gap : bounds[k].part1_bound;
    const double scale = std::max({spectral_norm(ops[k].gamma_p), std::abs(en.bound), 1e-300});
    en.positive = en.gamma_min > kFgrPositivityThreshold;
    en.bound_ok = en.gamma_min >= en.bound - 1e-9 * scale;
    r.all_positive = r.all_positive && en.positive;
    if (en.e == 0.0) {
      r.g0 = bounds[k].g0;
      r.Z = bounds[k].Z;
      r.gap = bounds[k].gap;
      const double norm = spectral_norm(ops[k].gamma);
      const CVec omega = gibbs_vector(ps).omega;
      r.gibbs_residual = norm > 0.0 ? (ops[k].gamma * omega).norm() / norm : 0.0;
    }
  }
  return r;
}

double zero_mode_quadratic_form(const ParticleSystem& ps, const FormFactor& ff, const CVec& c) {
  validate(ps);
  const int n = ps.size();
  if (c.size() != n) throw DomainError("zero_mode_quadratic_form: coefficient vector has wrong size");
  const double tol = energy_tolerance(ps);
  double total = 0.0;
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k) {
      const double emn = ps.energies(m) - ps.energies(k);
      if (emn >= -tol) continue;
      const double w = -emn;
      // exp(beta E_k) |exp(-beta E_m / 2) c_k - exp(-beta E_k / 2) c_m|^2, shift-free form
      const double thermal = std::norm(std::exp(0.5 * ps.beta * w) * c(k) - c(m)) / std::expm1(ps.beta * w);
      const double delta_weight = w * w * kAngularMeasure * std::norm(cplx(ff.value(w)));
      total += 2.0 * std::norm(ps.G(k, m)) * thermal * delta_weight;
    }
  return total;
}

LorentzianResult lorentzian_gamma(const ParticleSystem& ps, const FormFactor& ff, double e, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("lorentzian_gamma: epsilon must be > 0");
  const LiouvilleParticleSpectrum lp = particle_liouvillian(ps);
  const auto k = lp.find(e);
  if (!k) throw DomainError("lorentzian_gamma: e is not an eigenvalue of L_p");
  const double ev = lp.values[*k];
  const std::vector<int>& cols = lp.members[*k];
  const auto nc = static_cast<Eigen::Index>(cols.size());
  const DoubledCoupling d = doubled_operators(ps);

  using boost::math::quadrature::gauss_kronrod;
  // The form factor decays like exp(-|u|); beyond this cutoff |g|^2 < 1e-100.
  const double cutoff = 120.0;
  const double rel_tol = 1e-11;
  LorentzianResult res;
  res.value = CMat::Zero(nc, nc);

  for (std::size_t j = 0; j < lp.values.size(); ++j) {
    if (j == *k) continue;
    const std::vector<int>& rows = lp.members[j];
    CMat a(static_cast<Eigen::Index>(rows.size()), nc), bm(static_cast<Eigen::Index>(rows.size()), nc);
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (Eigen::Index c = 0; c < nc; ++c) {
        a(static_cast<Eigen::Index>(r), c) = d.left(rows[r], cols[static_cast<std::size_t>(c)]);
        bm(static_cast<Eigen::Index>(r), c) = d.right(rows[r], cols[static_cast<std::size_t>(c)]);
      }
    if (a.cwiseAbs().maxCoeff() == 0.0 && bm.cwiseAbs().maxCoeff() == 0.0) continue;
    const double center = ev - lp.values[j];  // Lorentzian peak in u
    std::vector<double> brk = {-cutoff, 0.0, center, cutoff};
    for (double s : {1.0, 10.0, 100.0}) {
      brk.push_back(center - s * epsilon);
      brk.push_back(center + s * epsilon);
    }
    std::sort(brk.begin(), brk.end());
    brk.erase(std::unique(brk.begin(), brk.end()), brk.end());
    brk.erase(std::remove_if(brk.begin(), brk.end(), [&](double x) { return x < -cutoff || x > cutoff; }), brk.end());

    auto lor = [&](double u) { return 1.0 / ((u - center) * (u - center) + epsilon * epsilon); };
    // Scalar weights: |g1|^2, conj(g1) g2 (real and imaginary), |g2|^2.
    auto integrate = [&](auto&& w) {
      double total = 0.0;
      for (std::size_t s = 0; s + 1 < brk.size(); ++s) {
        double err = 0.0;
        const double v = gauss_kronrod<double, 31>::integrate(
            [&](double u) { return u == 0.0 ? 0.0 : w(u) * lor(u); }, brk[s], brk[s + 1], 30, rel_tol, &err);
        total += v;
        res.error_estimate = std::max(res.error_estimate, err);
      }
      return total;
    };
    const double i11 = integrate([&](double u) { return std::norm(glued_g1(ff, ps.beta, u)); });
    const double i22 = integrate([&](double u) { return std::norm(glued_g2(ff, ps.beta, u)); });
    const double i12r = integrate([&](double u) { return (std::conj(glued_g1(ff, ps.beta, u)) * glued_g2(ff, ps.beta, u)).real(); });
    const double i12i = integrate([&](double u) { return (std::conj(glued_g1(ff, ps.beta, u)) * glued_g2(ff, ps.beta, u)).imag(); });
    const cplx i12(i12r, i12i);
    const CMat aa = a.adjoint() * a, ab = a.adjoint() * bm, ba = bm.adjoint() * a, bb = bm.adjoint() * bm;
    res.value += kAngularMeasure * (i11 * aa - i12 * ab - std::conj(i12) * ba + i22 * bb);
  }
  res.value *= epsilon / kPi;
  res.value = 0.5 * (res.value + CMat(res.value.adjoint()));
  const double scale = std::max(1.0, res.value.cwiseAbs().maxCoeff());
  res.converged = res.error_estimate <= 1e-6 * scale / epsilon;
  return res;
}

}  // namespace llab
