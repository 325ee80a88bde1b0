#include "llab/commutator.hpp"

#include <cmath>
#include <sstream>

#include "llab/errors.hpp"
#include "llab/fgr.hpp"
#include "llab/linalg.hpp"

namespace llab {

MourreParameters MourreParameters::automatic(double lambda, int hat_eps, int hat_sigma, int hat_theta,
                                             double gate_s) {
  if (!(lambda > 0.0)) throw DomainError("MourreParameters: lambda must be > 0");
  MourreParameters p;
  p.lambda = lambda;
  p.hat_eps = hat_eps;
  p.hat_sigma = hat_sigma;
  p.hat_theta = hat_theta;
  p.gate_s = gate_s;
  p.eps = std::pow(lambda, hat_eps / 100.0);
  p.sigma = std::pow(lambda, -hat_sigma / 100.0);
  p.theta = std::pow(lambda, hat_theta / 100.0);
  return p;
}

bool MourreParameters::gate_ok() const {
  const double s = gate_s;
  return theta < s && eps < s && eps / theta < s && theta * lambda * lambda / (eps * eps * eps) < s;
}

std::string MourreParameters::gate_status() const {
  std::ostringstream os;
  auto item = [&](const char* name, double v) {
    os << name << "=" << v << (v < gate_s ? " ok" : " FAIL") << "; ";
  };
  item("theta", theta);
  item("eps", eps);
  item("eps/theta", eps / theta);
  item("theta*lambda^2/eps^3", theta * lambda * lambda / (eps * eps * eps));
  os << "s=" << gate_s;
  return os.str();
}

SpMat conjugate_b(const CoupledModel& model, double e, double theta, double eps, RVec* q_out, RVec* r_out) {
  if (!(eps > 0.0)) throw DomainError("conjugate_b: eps must be > 0");
  const auto k = model.lp.find(e);
  if (!k) throw DomainError("conjugate_b: e is not an eigenvalue of L_p");
  const auto n = static_cast<Eigen::Index>(model.dim);
  RVec q = RVec::Zero(n);
  for (int p : model.lp.members[*k]) q(static_cast<Eigen::Index>(model.index(p, 0))) = 1.0;
  RVec r(n), qbar_r2(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = model.L0(i) - e;
    r(i) = 1.0 / std::sqrt(x * x + eps * eps);
    qbar_r2(i) = (1.0 - q(i)) * r(i) * r(i);
  }
  const CVec ql = q.cast<cplx>(), left = qbar_r2.cast<cplx>();
  const SpMat x = left.asDiagonal() * model.I * ql.asDiagonal();
  SpMat b = theta * model.lambda * (x - SpMat(x.adjoint()));
  b.prune(cplx(0.0));
  if (q_out) *q_out = q;
  if (r_out) *r_out = r;
  return b;
}

ConjugatePair build_conjugate_pair(const CoupledModel& model, double e, double theta, double eps) {
  ConjugatePair p;
  p.e = e;
  p.theta = theta;
  p.eps = eps;
  const RMat d = derivative_matrix(model.fock->grid());
  const SpMat a0f = second_quantize(CMat((-d).cast<cplx>()), *model.fock, true);
  const auto np = static_cast<Eigen::Index>(model.lp.diagonal.size());
  SpMat id(np, np);
  id.setIdentity();
  p.A0 = kron(id, a0f);
  p.b = conjugate_b(model, e, theta, eps, &p.q, &p.r_eps);
  const SpMat nmat = diagonal_matrix(model.number);
  const SpMat lb = SpMat(model.L * p.b) - SpMat(p.b * model.L);
  p.comm_LA = nmat + model.lambda * model.I_tilde + lb;
  p.comm_LA.prune(cplx(0.0));
  p.B = p.comm_LA - 0.1 * nmat;
  p.B.prune(cplx(0.0));
  return p;
}

CommutatorComparison defined_commutator(const CoupledModel& model, const ConjugatePair& pair) {
  CommutatorComparison c;
  c.defined = pair.comm_LA;
  const SpMat a = pair.A0 + pair.b;
  c.literal = SpMat(model.L * a) - SpMat(a * model.L);
  const SpMat diff = c.defined - c.literal;
  c.operator_defect = hermitian_norm(SpMat(0.5 * (diff + SpMat(diff.adjoint()))));
  CVec psi = model.I * model.omega_beta0();
  c.smooth_defect = psi.norm() > 0.0 ? (diff * (psi / psi.norm())).norm() : 0.0;
  return c;
}

double minimal_lp_spacing(const LiouvilleParticleSpectrum& lp) {
  double d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < lp.values.size(); ++k) d = std::min(d, lp.values[k] - lp.values[k - 1]);
  return d;
}

double raised_cosine_plateau(double x, double center, double plateau, double support) {
  const double r = std::abs(x - center);
  if (r <= plateau) return 1.0;
  if (r >= support) return 0.0;
  const double t = (r - plateau) / (support - plateau);
  return 0.5 * (1.0 + std::cos(kPi * t));
}

namespace {

double deflated_min(const CMat& block, const std::optional<CVec>& deflate) {
  if (!deflate) return min_eigenvalue(0.5 * (block + block.adjoint()));
  if (block.rows() < 2) throw NumericalError("mourre_check: window too small to deflate");
  const CMat u = orthogonal_complement(*deflate);
  const CMat c = u.adjoint() * block * u;
  return min_eigenvalue(0.5 * (c + c.adjoint()));
}

}  // namespace

MourreReport mourre_check(const CoupledModel& model, double e, const MourreParameters& params,
                          const MourreOptions& opts) {
  const auto k = model.lp.find(e);
  if (!k) throw DomainError("mourre_check: e is not an eigenvalue of L_p");
  const double ev = model.lp.values[*k];
  const double d0 = model.lp.values.size() > 1 ? minimal_lp_spacing(model.lp) : 1.0;
  const double hw = opts.half_width.value_or(0.5 * d0);
  if (!(hw > 0.0)) throw DomainError("mourre_check: window half-width must be > 0");
  for (std::size_t j = 0; j < model.lp.values.size(); ++j)
    if (j != *k && std::abs(model.lp.values[j] - ev) < hw)
      throw DomainError("mourre_check: window contains two eigenvalues of L_p");

  MourreReport rep;
  rep.e = ev;
  rep.lambda = model.lambda;
  rep.theta = params.theta;
  rep.eps = params.eps;
  rep.sigma = params.sigma;
  rep.gate_ok = params.gate_ok();
  rep.gate_status = params.gate_status();
  const FgrOperator op = gamma_operator(model.ps, model.ff, ev);
  rep.gamma_e = fgr_gamma_min(model.ps, op);
  rep.bound = params.theta * model.lambda * model.lambda / params.eps * rep.gamma_e;

  const ConjugatePair pair = build_conjugate_pair(model, ev, params.theta, params.eps);
  std::vector<Eigen::Index> idx;
  const double edge = hw * (1.0 - 1e-12);
  for (Eigen::Index i = 0; i < model.L0.size(); ++i)
    if (std::abs(model.L0(i) - ev) < edge) idx.push_back(i);
  rep.window_dim = idx.size();
  if (idx.empty()) throw NumericalError("mourre_check: empty spectral window");

  const CVec omega = model.omega_beta0();
  std::optional<CVec> defl;
  if (ev == 0.0) {
    CVec v(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t a = 0; a < idx.size(); ++a) v(static_cast<Eigen::Index>(a)) = omega(idx[a]);
    defl = v;
  }
  rep.min_eig = deflated_min(principal_submatrix(pair.B, idx), defl);
  rep.margin = rep.min_eig - rep.bound;

  if (opts.smooth_variant) {
    rep.has_variants = true;
    const HermitianEigen eig = hermitian_eigen(model.dense_L());
    const CMat comm = CMat(pair.comm_LA);
    const double support = hw + 0.5 * (d0 - hw);
    std::vector<Eigen::Index> in_h, in_sharp;
    for (Eigen::Index j = 0; j < eig.values.size(); ++j) {
      if (raised_cosine_plateau(eig.values(j), ev, hw, support) > 0.0) in_h.push_back(j);
      if (std::abs(eig.values(j) - ev) < edge) in_sharp.push_back(j);
    }
    rep.smooth_bound = 0.5 * std::pow(model.lambda, 91.0 / 50.0) * rep.gamma_e;
    auto variant = [&](const std::vector<Eigen::Index>& cols, bool weighted) {
      if (cols.empty()) return std::numeric_limits<double>::quiet_NaN();
      CMat s(eig.vectors.rows(), static_cast<Eigen::Index>(cols.size()));
      for (std::size_t a = 0; a < cols.size(); ++a) s.col(static_cast<Eigen::Index>(a)) = eig.vectors.col(cols[a]);
      const CMat c = s.adjoint() * comm * s;
      std::optional<CVec> dv;
      if (ev == 0.0) {
        CVec v = s.adjoint() * omega;
        if (weighted)
          for (std::size_t a = 0; a < cols.size(); ++a)
            v(static_cast<Eigen::Index>(a)) *= raised_cosine_plateau(eig.values(cols[a]), ev, hw, support);
        if (v.norm() > 0.0 && cols.size() > 1) dv = v;
      }
      return deflated_min(c, dv);
    };
    rep.smooth_min_eig = variant(in_h, true);
    rep.sharp_min_eig = variant(in_sharp, false);
    rep.smooth_margin = rep.smooth_min_eig - rep.smooth_bound;
    rep.sharp_margin = rep.sharp_min_eig - rep.smooth_bound;
  }
  return rep;
}

VirialDefect virial_defect(const CoupledModel& model, const ConjugatePair& pair, const CVec& psi, double e_guess) {
  if (std::abs(psi.norm() - 1.0) > 1e-10) throw DomainError("virial_defect: psi must be normalized");
  VirialDefect v;
  v.defined = psi.dot(pair.comm_LA * psi).real();
  const CVec res = model.L * psi - e_guess * psi;
  const CVec apsi = pair.A0 * psi + pair.b * psi;
  v.literal = 2.0 * res.dot(apsi).real();
  v.gap = v.defined - v.literal;
  v.eigen_residual = res.norm();
  return v;
}

}  // namespace llab
