#include "llab/liouvillian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "llab/errors.hpp"

namespace llab {

SpMat kron(const SpMat& a, const SpMat& b) {
  std::vector<Triplet> trip;
  trip.reserve(static_cast<std::size_t>(a.nonZeros()) * static_cast<std::size_t>(b.nonZeros()));
  for (int ka = 0; ka < a.outerSize(); ++ka)
    for (SpMat::InnerIterator ia(a, ka); ia; ++ia)
      for (int kb = 0; kb < b.outerSize(); ++kb)
        for (SpMat::InnerIterator ib(b, kb); ib; ++ib)
          trip.emplace_back(static_cast<int>(ia.row() * b.rows() + ib.row()),
                            static_cast<int>(ia.col() * b.cols() + ib.col()), ia.value() * ib.value());
  SpMat out(a.rows() * b.rows(), a.cols() * b.cols());
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

SpMat diagonal_matrix(const RVec& d) {
  SpMat out(d.size(), d.size());
  out.reserve(Eigen::VectorXi::Constant(d.size(), 1));
  for (Eigen::Index i = 0; i < d.size(); ++i) out.insert(i, i) = d(i);
  out.makeCompressed();
  return out;
}

CVec coupling_samples(const CVec& g) { return std::sqrt(kAngularMeasure) * g; }

SpMat interaction_from(const ParticleSystem& ps, const CVec& g1, const CVec& g2, const FockModel& fock,
                       Exec exec) {
  const DoubledCoupling d = doubled_operators(ps);
  const SpMat phi1 = field_operator(coupling_samples(g1), fock, exec);
  const SpMat phi2 = field_operator(coupling_samples(g2), fock, exec);
  const SpMat left = d.left.sparseView(0.0, 0.0);
  const SpMat right = d.right.sparseView(0.0, 0.0);
  SpMat out = kron(left, phi1) - kron(right, phi2);
  out.prune(cplx(0.0));
  return out;
}

SpMat interaction(const ParticleSystem& ps, const GluedSamples& glued, const FockModel& fock, Exec exec) {
  return interaction_from(ps, glued.g1, glued.g2, fock, exec);
}

SpMat i_tilde(const ParticleSystem& ps, const GluedSamples& glued, const FockModel& fock, Exec exec) {
  return interaction_from(ps, glued.dg1, glued.dg2, fock, exec);
}

CVec CoupledModel::omega_beta0() const {
  const GibbsVector g = gibbs_vector(ps);
  CVec v = CVec::Zero(static_cast<Eigen::Index>(dim));
  for (Eigen::Index p = 0; p < g.omega.size(); ++p)
    v(static_cast<Eigen::Index>(index(static_cast<int>(p), 0))) = g.omega(p);
  return v;
}

CVec CoupledModel::particle_vacuum_state(int i, int j) const {
  CVec v = CVec::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index(pair_index(i, j, ps.size()), 0))) = 1.0;
  return v;
}

CoupledModel assemble(const ModelSpec& spec, double lambda) {
  validate(spec.ps);
  validate(spec.ff);
  const int n = spec.ps.size();
  const std::size_t fdim = fock_dimension(spec.n_u, spec.n_max);
  const std::size_t np = static_cast<std::size_t>(n) * n;
  if (fdim > spec.dim_cap || fdim * np > spec.dim_cap) {
    std::ostringstream os;
    os << "assemble: model dimension " << (fdim > spec.dim_cap ? fdim : fdim * np) << " (N^2=" << np
       << ", n_u=" << spec.n_u << ", n_max=" << spec.n_max << ") exceeds cap " << spec.dim_cap;
    throw DimensionCapError(os.str());
  }
  CoupledModel m;
  m.ps = spec.ps;
  m.ff = spec.ff;
  m.fock = std::make_shared<const FockModel>(ModeGrid::uniform(spec.u_max, spec.n_u), spec.n_max,
                                             spec.dim_cap);
  m.glued = glue(spec.ff, spec.ps.beta, m.fock->grid());
  m.lp = particle_liouvillian(spec.ps);
  m.dim = np * fdim;

  const RVec lf = second_quantize(m.fock->grid().nodes, *m.fock);
  const RVec nf = second_quantize(RVec(RVec::Ones(spec.n_u)), *m.fock);
  m.L0.resize(static_cast<Eigen::Index>(m.dim));
  m.number.resize(static_cast<Eigen::Index>(m.dim));
  for (std::size_t p = 0; p < np; ++p)
    for (std::size_t s = 0; s < fdim; ++s) {
      const auto k = static_cast<Eigen::Index>(p * fdim + s);
      m.L0(k) = m.lp.diagonal(static_cast<Eigen::Index>(p)) + lf(static_cast<Eigen::Index>(s));
      m.number(k) = nf(static_cast<Eigen::Index>(s));
    }
  m.I = interaction(m.ps, m.glued, *m.fock);
  m.I_tilde = i_tilde(m.ps, m.glued, *m.fock);
  return with_lambda(m, lambda);
}

CoupledModel with_lambda(const CoupledModel& base, double lambda) {
  CoupledModel m = base;
  m.lambda = lambda;
  m.L = diagonal_matrix(m.L0) + lambda * m.I;
  m.L.prune(cplx(0.0));
  return m;
}

RVec enumerate_l0_spectrum(const ParticleSystem& ps, const FockModel& fock) {
  const int n = ps.size();
  std::vector<double> vals;
  vals.reserve(static_cast<std::size_t>(n) * n * fock.dim());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (std::size_t s = 0; s < fock.dim(); ++s) {
        const std::uint16_t* occ = fock.occupation(s);
        double e = ps.energies(i) - ps.energies(j);
        for (int k = 0; k < fock.modes(); ++k) e += occ[k] * fock.grid().nodes(k);
        vals.push_back(e);
      }
  std::sort(vals.begin(), vals.end());
  return Eigen::Map<RVec>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

}  // namespace llab
