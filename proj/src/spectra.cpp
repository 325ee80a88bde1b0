#include "llab/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SparseLU>

#include "llab/errors.hpp"
#include "llab/fgr.hpp"
#include "llab/linalg.hpp"
#include "llab/parallel.hpp"

namespace llab {

namespace {

struct ZeroMode {
  Eigen::Index index = -1;
  double value = 0.0;
  double gap = 0.0;
};

ZeroMode zero_mode(const RVec& values) {
  ZeroMode z;
  double best = std::numeric_limits<double>::infinity(), second = best;
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    const double a = std::abs(values(k));
    if (a < best) {
      second = best;
      best = a;
      z.index = k;
    } else if (a < second) {
      second = a;
    }
  }
  z.value = values(z.index);
  z.gap = second;
  return z;
}

}  // namespace

CVec unperturbed_eigenvector(const CoupledModel& model, double e) {
  const auto k = model.lp.find(e);
  if (!k) throw DomainError("e is not an eigenvalue of L_p");
  CVec v = CVec::Zero(static_cast<Eigen::Index>(model.dim));
  v(static_cast<Eigen::Index>(model.index(model.lp.members[*k].front(), 0))) = 1.0;
  return v;
}

SpectralScan eigen_scan(const ModelSpec& spec, const std::vector<double>& lambda_grid, double e, double window_lo,
                        double window_hi, Exec exec) {
  if (!(window_lo < window_hi)) throw DomainError("eigen_scan: empty window");
  SpectralScan scan;
  scan.e = e;
  scan.window_lo = window_lo;
  scan.window_hi = window_hi;
  const CoupledModel base = assemble(spec, 0.0);
  const CVec psi = unperturbed_eigenvector(base, e);
  scan.points.resize(lambda_grid.size());
  for_each_index(static_cast<long>(lambda_grid.size()), exec, [&](long i) {
    const CoupledModel m = with_lambda(base, lambda_grid[static_cast<std::size_t>(i)]);
    const HermitianEigen eig = hermitian_eigen(m.dense_L());
    ScanPoint& pt = scan.points[static_cast<std::size_t>(i)];
    pt.lambda = m.lambda;
    for (Eigen::Index k = 0; k < eig.values.size(); ++k)
      if (eig.values(k) > window_lo && eig.values(k) < window_hi) pt.eigenvalues.push_back(eig.values(k));
    pt.max_overlap = (eig.vectors.adjoint() * psi).cwiseAbs2().maxCoeff();
    const ZeroMode z = zero_mode(eig.values);
    pt.zero_value = z.value;
    pt.zero_gap = z.gap;
    pt.zero_residual = (m.L * eig.vectors.col(z.index)).norm();
  });
  return scan;
}

namespace {

// n_max = 1: every block outside the vacuum sector is diagonal, so the
// resolvent reduces to a Schur complement on the vacuum sector.
struct ArrowSplit {
  std::vector<Eigen::Index> vac, rest;
  CMat l_vv;  // vacuum block of L
  CMat l_vr;  // vacuum-to-photon coupling, dense (N^2 rows)
};

ArrowSplit arrow_split(const CoupledModel& model) {
  ArrowSplit a;
  std::vector<Eigen::Index> pos(model.dim, -1);
  for (std::size_t k = 0; k < model.dim; ++k) {
    auto& list = model.fock_of(k) == 0 ? a.vac : a.rest;
    pos[k] = static_cast<Eigen::Index>(list.size());
    list.push_back(static_cast<Eigen::Index>(k));
  }
  const auto nv = static_cast<Eigen::Index>(a.vac.size());
  a.l_vv = CMat::Zero(nv, nv);
  a.l_vr = CMat::Zero(nv, static_cast<Eigen::Index>(a.rest.size()));
  for (Eigen::Index c = 0; c < nv; ++c)
    for (SpMat::InnerIterator it(model.L, a.vac[static_cast<std::size_t>(c)]); it; ++it) {
      // entry (row, vac_c); L Hermitian, so (vac_c, row) is its conjugate
      const auto r = static_cast<std::size_t>(it.row());
      if (model.fock_of(r) == 0) a.l_vv(pos[r], c) = it.value();
      else a.l_vr(c, pos[r]) = std::conj(it.value());
    }
  return a;
}

double arrow_resolvent_form(const CoupledModel& model, const ArrowSplit& a, const CVec& psi, cplx z) {
  const auto nv = static_cast<Eigen::Index>(a.vac.size()), nr = static_cast<Eigen::Index>(a.rest.size());
  CVec inv_d(nr), psi_r(nr), psi_v(nv);
  for (Eigen::Index i = 0; i < nr; ++i) {
    inv_d(i) = 1.0 / (model.L0(a.rest[static_cast<std::size_t>(i)]) - z);
    psi_r(i) = psi(a.rest[static_cast<std::size_t>(i)]);
  }
  for (Eigen::Index i = 0; i < nv; ++i) psi_v(i) = psi(a.vac[static_cast<std::size_t>(i)]);
  const CMat scaled_vr = a.l_vr * inv_d.asDiagonal();
  const CMat s = a.l_vv - z * CMat::Identity(nv, nv) - scaled_vr * a.l_vr.adjoint();
  const CVec r_scaled = inv_d.cwiseProduct(psi_r);
  const CVec y_v = s.partialPivLu().solve(psi_v - a.l_vr * r_scaled);
  const CVec y_r = r_scaled - inv_d.cwiseProduct(a.l_vr.adjoint() * y_v);
  return (psi_v.dot(y_v) + psi_r.dot(y_r)).imag();
}

}  // namespace

std::vector<double> spectral_function(const CoupledModel& model, const CVec& psi, const std::vector<double>& x,
                                      double eta, Exec exec) {
  if (!(eta > 0.0)) throw DomainError("spectral_function: eta must be > 0");
  std::vector<double> s(x.size());
  if (model.fock->n_max() == 1) {
    const ArrowSplit split = arrow_split(model);
    for_each_index(static_cast<long>(x.size()), exec, [&](long i) {
      s[static_cast<std::size_t>(i)] =
          arrow_resolvent_form(model, split, psi, cplx(x[static_cast<std::size_t>(i)], eta));
    });
    return s;
  }
  SpMat id(model.L.rows(), model.L.cols());
  id.setIdentity();
  for_each_index(static_cast<long>(x.size()), exec, [&](long i) {
    const SpMat shifted = model.L - cplx(x[static_cast<std::size_t>(i)], eta) * id;
    Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(shifted);
    if (lu.info() != Eigen::Success) throw NumericalError("spectral_function: factorization failed");
    const CVec y = lu.solve(psi);
    s[static_cast<std::size_t>(i)] = psi.dot(y).imag();
  });
  return s;
}

LorentzianFit fit_lorentzian(const std::vector<double>& x, const std::vector<double>& s) {
  if (x.size() != s.size() || x.size() < 5) throw DomainError("fit_lorentzian: need at least 5 samples");
  const auto peak = std::max_element(s.begin(), s.end());
  const double half = 0.5 * *peak;
  const std::size_t ip = static_cast<std::size_t>(peak - s.begin());
  std::size_t a = ip, b = ip;
  while (a > 0 && s[a - 1] >= half) --a;
  while (b + 1 < s.size() && s[b + 1] >= half) ++b;
  LorentzianFit fit;
  fit.points = b - a + 1;
  if (fit.points < 3) throw NumericalError("fit_lorentzian: half-maximum region under-resolved");
  if (a == 0 || b + 1 == s.size())
    throw NumericalError("fit_lorentzian: half-maximum region touches the grid edge");
  RMat design(static_cast<Eigen::Index>(fit.points), 3);
  RVec rhs(static_cast<Eigen::Index>(fit.points));
  const double x0 = x[ip];
  for (std::size_t k = a; k <= b; ++k) {
    const double t = x[k] - x0;
    const auto r = static_cast<Eigen::Index>(k - a);
    design(r, 0) = t * t;
    design(r, 1) = t;
    design(r, 2) = 1.0;
    rhs(r) = 1.0 / s[k];
  }
  const RVec coef = design.colPivHouseholderQr().solve(rhs);
  const double qa = coef(0), qb = coef(1), qc = coef(2);
  const double shift = -qb / (2.0 * qa);
  const double g2 = qc / qa - shift * shift;
  double rms = 0.0;
  for (std::size_t k = a; k <= b; ++k) {
    const double t = x[k] - x0;
    const double model = 1.0 / (qa * t * t + qb * t + qc);
    rms += std::pow((model - s[k]) / s[k], 2);
  }
  fit.residual = std::sqrt(rms / static_cast<double>(fit.points));
  if (!(qa > 0.0) || !(g2 > 0.0))
    throw NumericalError("fit_lorentzian: profile is not Lorentzian (residual " + std::to_string(fit.residual) +
                         ")");
  fit.center = x0 + shift;
  fit.hwhm = std::sqrt(g2);
  return fit;
}

ResonanceReport resonance_width(const ModelSpec& spec, double e, const std::vector<double>& lambda_grid,
                                const ResonanceOptions& opts) {
  ResonanceReport rep;
  rep.e = e;
  rep.eta = opts.eta;
  const CoupledModel base = assemble(spec, 0.0);
  const auto k = base.lp.find(e);
  if (!k) throw DomainError("resonance_width: e is not an eigenvalue of L_p");
  rep.gamma_e = fgr_gamma_min(base.ps, gamma_operator(base.ps, base.ff, base.lp.values[*k]));
  const CVec psi = unperturbed_eigenvector(base, e);

  const double probe = 0.5 * base.fock->grid().u_max;
  std::size_t in_window = 0;
  for (Eigen::Index i = 0; i < base.L0.size(); ++i)
    if (std::abs(base.L0(i) - e) < probe) ++in_window;
  rep.mean_spacing = 2.0 * probe / static_cast<double>(std::max<std::size_t>(in_window, 1));
  if (opts.eta < 2.0 * rep.mean_spacing)
    throw DomainError("resonance_width: eta must be at least twice the mean level spacing of L_0 (" +
                      std::to_string(rep.mean_spacing) + ")");

  std::vector<double> logl, logw;
  double pref_sum = 0.0;
  int pref_count = 0;
  for (double lambda : lambda_grid) {
    const CoupledModel m = with_lambda(base, lambda);
    ResonancePoint pt;
    pt.lambda = lambda;
    const double guess = opts.eta + kPi * lambda * lambda * rep.gamma_e;
    const double hw = opts.x_half_width.value_or(4.0 * guess);
    const int n = std::max(opts.x_points, 5);
    for (int i = 0; i < n; ++i) pt.x.push_back(e - hw + 2.0 * hw * i / (n - 1));
    pt.s = spectral_function(m, psi, pt.x, opts.eta, opts.exec);
    pt.fit = fit_lorentzian(pt.x, pt.s);
    pt.width = pt.fit.hwhm - opts.eta;
    if (lambda > 0.0 && pt.width > 0.0) {
      logl.push_back(lambda);
      logw.push_back(pt.width);
      pref_sum += pt.width / (lambda * lambda);
      ++pref_count;
    }
    rep.points.push_back(std::move(pt));
  }
  rep.slope = logl.size() >= 2 ? loglog_slope(logl, logw) : std::numeric_limits<double>::quiet_NaN();
  rep.prefactor = pref_count > 0 ? pref_sum / pref_count : std::numeric_limits<double>::quiet_NaN();
  rep.prefactor_ratio = rep.prefactor / (kPi * rep.gamma_e);
  return rep;
}

namespace {

KmsVector kms_from(const CoupledModel& model, const RVec& values, const CMat& vectors, bool require_simple) {
  KmsVector k;
  k.lambda = model.lambda;
  k.beta = model.ps.beta;
  const CVec omega0 = model.omega_beta0();
  if (model.lambda == 0.0) {
    k.vector = omega0;
    k.residual = (model.L * omega0).norm();
    k.kernel_dim = -1;
    return k;
  }
  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  CVec v = CVec::Zero(omega0.size());
  k.gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (std::abs(values(i)) <= 1e-9 * scale) {
      ++k.kernel_dim;
      v += vectors.col(i) * vectors.col(i).dot(omega0);
    } else {
      k.gap = std::min(k.gap, std::abs(values(i)));
    }
  }
  if (k.kernel_dim == 0) throw NumericalError("kms_vector: L has no zero eigenvalue");
  if (require_simple && k.kernel_dim > 1)
    throw NumericalError("kms_vector: zero eigenvalue is not simple (multiplicity " +
                         std::to_string(k.kernel_dim) + ")");
  if (v.norm() < 1e-12) throw NumericalError("kms_vector: kernel orthogonal to the free KMS vector");
  v.normalize();
  k.vector = v;
  k.distance = (v - omega0).norm();
  k.residual = (model.L * v).norm();
  return k;
}

}  // namespace

KmsVector kms_vector(const CoupledModel& model, bool require_simple) {
  if (model.lambda == 0.0) return kms_from(model, RVec(), CMat(), require_simple);
  const HermitianEigen eig = hermitian_eigen(model.dense_L());
  return kms_from(model, eig.values, eig.vectors, require_simple);
}

std::vector<KmsVector> kms_scan(const ModelSpec& spec, const std::vector<double>& lambda_grid, Exec exec) {
  const CoupledModel base = assemble(spec, 0.0);
  std::vector<KmsVector> out(lambda_grid.size());
  for_each_index(static_cast<long>(lambda_grid.size()), exec, [&](long i) {
    out[static_cast<std::size_t>(i)] = kms_vector(with_lambda(base, lambda_grid[static_cast<std::size_t>(i)]));
  });
  return out;
}

SpectralData diagonalize(const CoupledModel& model) {
  const HermitianEigen eig = hermitian_eigen(model.dense_L());
  return {eig.values, eig.vectors};
}

KmsVector kms_vector(const CoupledModel& model, const SpectralData& spectral, bool require_simple) {
  return kms_from(model, spectral.values, spectral.vectors, require_simple);
}

namespace {

// (e^{ix} - 1) / (ix)
cplx mean_phase(double x) {
  if (std::abs(x) < 1e-4) return {1.0 - x * x / 6.0, 0.5 * x};
  const double s = std::sin(0.5 * x);
  return {std::sin(x) / x, 2.0 * s * s / x};
}

double group_tolerance(const RVec& values) { return 1e-9 * std::max(1.0, values.cwiseAbs().maxCoeff()); }

// Group id per eigenvalue (values ascending).
std::vector<int> degenerate_groups(const RVec& values, double tol, double* min_spacing) {
  std::vector<int> g(static_cast<std::size_t>(values.size()), 0);
  double spacing = std::numeric_limits<double>::infinity();
  double group_start = values.size() ? values(0) : 0.0;
  for (Eigen::Index k = 1; k < values.size(); ++k) {
    const double d = values(k) - values(k - 1);
    if (d <= tol) {
      g[static_cast<std::size_t>(k)] = g[static_cast<std::size_t>(k - 1)];
    } else {
      g[static_cast<std::size_t>(k)] = g[static_cast<std::size_t>(k - 1)] + 1;
      spacing = std::min(spacing, values(k) - group_start);
      group_start = values(k);
    }
  }
  if (min_spacing) *min_spacing = spacing;
  return g;
}

void check_observable(const CMat& a, Eigen::Index dim) {
  if (a.rows() != dim || a.cols() != dim) throw DomainError("evolve: observable dimension mismatch");
  if (hermiticity_defect(a) > 1e-12 * std::max(1.0, a.norm())) throw DomainError("evolve: observable not Hermitian");
}

}  // namespace

double ergodic_mean(const SpectralData& spectral, const CVec& psi, const CMat& observable, double T) {
  check_observable(observable, spectral.values.size());
  const CVec c = spectral.vectors.adjoint() * psi;
  const CMat at = spectral.vectors.adjoint() * observable * spectral.vectors;
  const Eigen::Index n = c.size();
  cplx acc = 0.0;
  for (Eigen::Index l = 0; l < n; ++l)
    for (Eigen::Index k = 0; k < n; ++k)
      acc += std::conj(c(k)) * c(l) * at(k, l) * mean_phase((spectral.values(k) - spectral.values(l)) * T);
  return acc.real();
}

TimeSeries evolve(const CoupledModel& model, const SpectralData& spectral, const CVec& psi, const CMat& observable,
                  const EvolveOptions& opts) {
  const Eigen::Index n = spectral.values.size();
  check_observable(observable, n);
  if (psi.size() != n || std::abs(psi.norm() - 1.0) > 1e-10) throw DomainError("evolve: initial state must be a unit vector");
  if (!(opts.T > 0.0) || !(opts.dt > 0.0)) throw DomainError("evolve: T and dt must be > 0");
  const double lnorm = spectral.values.cwiseAbs().maxCoeff();
  if (opts.dt > kPi / std::max(lnorm, 1e-300)) throw DomainError("evolve: dt exceeds pi / |L|");

  TimeSeries ts;
  const CVec c = spectral.vectors.adjoint() * psi;
  const CMat at = spectral.vectors.adjoint() * observable * spectral.vectors;
  ts.observable_norm = hermitian_eigen(0.5 * (observable + observable.adjoint())).values.cwiseAbs().maxCoeff();

  const double tol = group_tolerance(spectral.values);
  double spacing = 0.0;
  const std::vector<int> groups = degenerate_groups(spectral.values, tol, &spacing);
  ts.heisenberg_time = 2.0 * kPi / spacing;

  // Stationary part and the oscillating remainder M_kl = conj(c_k) c_l A_kl / (i Delta_kl).
  cplx limit = 0.0;
  CMat osc = CMat::Zero(n, n);
  for (Eigen::Index l = 0; l < n; ++l)
    for (Eigen::Index k = 0; k < n; ++k) {
      const cplx w = std::conj(c(k)) * c(l) * at(k, l);
      if (groups[static_cast<std::size_t>(k)] == groups[static_cast<std::size_t>(l)])
        limit += w;
      else
        osc(k, l) = w / cplx(0.0, spectral.values(k) - spectral.values(l));
    }
  ts.cesaro_limit = limit.real();
  const cplx osc_total = osc.sum();

  const CVec kms = kms_from(model, spectral.values, spectral.vectors, false).vector;
  ts.target = kms.dot(observable * kms).real();

  std::size_t samples = static_cast<std::size_t>(std::floor(opts.T / opts.dt)) + 1;
  double dt = opts.dt;
  if (samples > opts.max_samples) {
    samples = std::max<std::size_t>(opts.max_samples, 2);
    dt = opts.T / static_cast<double>(samples - 1);
  }
  ts.times.resize(samples);
  ts.values.resize(samples);
  ts.running_mean.resize(samples);
  ts.norms.resize(samples);
  for_each_index(static_cast<long>(samples), opts.exec, [&](long i) {
    const auto si = static_cast<std::size_t>(i);
    const double t = dt * static_cast<double>(i);
    CVec phase(n);
    for (Eigen::Index k = 0; k < n; ++k) phase(k) = std::polar(1.0, -spectral.values(k) * t);
    const CVec d = phase.cwiseProduct(c);
    ts.times[si] = t;
    ts.values[si] = d.dot(at * d).real();
    ts.norms[si] = (spectral.vectors * d).norm();
    if (t == 0.0) {
      ts.running_mean[si] = ts.values[si];
    } else {
      // (1/t) sum M_kl (e^{i Delta t} - 1) with e^{i Delta t} = conj(phase_k) phase_l
      const cplx oscil = phase.dot(osc * phase) - osc_total;
      ts.running_mean[si] = (limit + oscil / t).real();
    }
  });

  ts.horizon = std::min(opts.T, 0.5 * ts.heisenberg_time);
  ts.mean_at_horizon = ergodic_mean(spectral, psi, observable, ts.horizon);
  ts.cesaro_residual = std::abs(ts.mean_at_horizon - ts.cesaro_limit);
  ts.target_residual = std::abs(ts.mean_at_horizon - ts.target);
  return ts;
}

CMat level_observable(const CoupledModel& model, int level) {
  const int n = model.ps.size();
  if (level < 0 || level >= n) throw DomainError("level_observable: level out of range");
  RVec d(static_cast<Eigen::Index>(model.dim));
  for (std::size_t k = 0; k < model.dim; ++k) d(static_cast<Eigen::Index>(k)) = model.particle_of(k) / n == level;
  return d.cast<cplx>().asDiagonal();
}

}  // namespace llab
