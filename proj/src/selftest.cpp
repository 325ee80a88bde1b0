#include <cmath>
#include <sstream>

#include "llab/cli.hpp"
#include "llab/commutator.hpp"
#include "llab/errors.hpp"
#include "llab/fgr.hpp"
#include "llab/functional_calculus.hpp"
#include "llab/linalg.hpp"
#include "llab/localization.hpp"
#include "llab/random_systems.hpp"
#include "llab/relative_bounds.hpp"
#include "llab/spectra.hpp"

namespace llab {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

ParticleSystem two_level() {
  ParticleSystem ps;
  ps.energies = RVec::LinSpaced(2, 0.0, 1.0);
  ps.G = CMat::Zero(2, 2);
  ps.G(0, 1) = ps.G(1, 0) = 1.0;
  ps.beta = 1.0;
  return ps;
}

template <class F>
SelftestCheck guarded(const std::string& name, F&& body) {
  SelftestCheck c;
  c.name = name;
  try {
    body(c);
  } catch (const std::exception& ex) {
    c.ok = false;
    c.detail = std::string("exception: ") + ex.what();
  }
  return c;
}

}  // namespace

std::vector<SelftestCheck> run_selftest(std::uint64_t seed) {
  std::vector<SelftestCheck> out;
  FormFactor ff;
  ff.p = 0.5;

  out.push_back(guarded("gibbs_zero_mode", [&](SelftestCheck& c) {
    Rng rng(seed);
    double worst = 0.0;
    for (int t = 0; t < 40; ++t) {
      const RandomSystem s = random_system(rng);
      const FgrOperator op = gamma_operator(s.ps, s.ff, 0.0);
      const CVec om = gibbs_vector(s.ps).omega;
      worst = std::max(worst, (op.gamma * om).norm() / std::max(spectral_norm(op.gamma), 1e-300));
    }
    c.ok = worst <= 1e-10;
    c.detail = "max relative residual " + num(worst);
  }));

  out.push_back(guarded("gap_identity", [&](SelftestCheck& c) {
    const FgrReport r = fgr_condition(two_level(), ff);
    double gmin = 0.0;
    for (const auto& en : r.entries)
      if (en.e == 0.0) gmin = en.gamma_min;
    const double rel = std::abs(gmin - r.gap) / r.gap;
    c.ok = rel <= 1e-10;
    c.detail = "relative deviation " + num(rel);
  }));

  out.push_back(guarded("model_hermiticity", [&](SelftestCheck& c) {
    ModelSpec spec;
    spec.ps = two_level();
    spec.ff = ff;
    const CoupledModel m = assemble(spec, 0.05);
    const double d = std::max({hermiticity_defect(m.L), hermiticity_defect(m.I), hermiticity_defect(m.I_tilde)});
    const double z = (m.L0.cwiseProduct(m.omega_beta0())).norm();
    c.ok = d <= 1e-12 && z <= 1e-14;
    c.detail = "hermiticity " + num(d) + ", |L0 Omega| " + num(z);
  }));

  out.push_back(guarded("conjugate_operator", [&](SelftestCheck& c) {
    ModelSpec spec;
    spec.ps = two_level();
    spec.ff = ff;
    const CoupledModel m = assemble(spec, 0.1);
    const ConjugatePair p = build_conjugate_pair(m, 0.0, 0.3, 0.3);
    const SpMat a = p.A0 + p.b;
    const double anti = SpMat(a + SpMat(a.adjoint())).norm();
    const double herm = hermiticity_defect(p.comm_LA);
    c.ok = anti <= 1e-12 && herm <= 1e-12;
    c.detail = "anti-Hermiticity " + num(anti) + ", commutator Hermiticity " + num(herm);
  }));

  out.push_back(guarded("mourre_two_level", [&](SelftestCheck& c) {
    ModelSpec spec;
    spec.ps = two_level();
    spec.ff = ff;
    spec.u_max = 3.1;
    const CoupledModel m = assemble(spec, 0.05);
    const MourreReport r = mourre_check(m, 1.0, MourreParameters::automatic(0.05), {std::nullopt, false});
    c.ok = r.min_eig >= 0.5 * r.bound;
    c.detail = "min_eig " + num(r.min_eig) + ", bound " + num(r.bound);
  }));

  out.push_back(guarded("feshbach_isospectrality", [&](SelftestCheck& c) {
    Rng rng(seed + 1);
    int ok = 0;
    for (int t = 0; t < 10; ++t) {
      const int n = 6 + t;
      std::vector<Eigen::Index> p;
      for (int i = 0; i < n; i += 2) p.push_back(i);
      ok += check_isospectrality(random_hermitian(rng, n), p).ok;
    }
    c.ok = ok == 10;
    c.detail = std::to_string(ok) + "/10";
  }));

  out.push_back(guarded("ims_identity", [&](SelftestCheck& c) {
    ModelSpec spec;
    spec.ps = two_level();
    spec.ff = ff;
    spec.n_u = 4;
    spec.n_max = 8;
    const CoupledModel m = assemble(spec, 0.05);
    const ConjugatePair p = build_conjugate_pair(m, 1.0, 0.3, 0.3);
    const ImsDecomposition d = ims_decompose(p.B, m.number, 4.0);
    c.ok = d.residual <= 1e-12 * d.b_norm;
    c.detail = "relative residual " + num(d.residual / d.b_norm);
  }));

  out.push_back(guarded("helffer_sjostrand", [&](SelftestCheck& c) {
    Rng rng(seed + 2);
    const CMat a = random_hermitian(rng, 5);
    const HsCheck h = hs_checked(PolynomialBump(0.0, 2.0), a, 0, 1e-6);
    c.ok = h.discrepancy <= 1e-6;
    c.detail = "discrepancy " + num(h.discrepancy);
  }));

  out.push_back(guarded("kms_and_stationarity", [&](SelftestCheck& c) {
    ModelSpec spec;
    spec.ps = two_level();
    spec.ff = ff;
    spec.n_max = 1;
    const CoupledModel m = assemble(spec, 0.05);
    const SpectralData sd = diagonalize(m);
    const KmsVector k = kms_vector(m);
    EvolveOptions eo;
    eo.T = 20.0;
    eo.dt = 0.1;
    const TimeSeries ts = evolve(m, sd, k.vector, level_observable(m, 0), eo);
    double spread = 0.0;
    for (double v : ts.values) spread = std::max(spread, std::abs(v - ts.values.front()));
    c.ok = k.residual <= 1e-9 && spread <= 1e-12;
    c.detail = "residual " + num(k.residual) + ", series spread " + num(spread);
  }));

  out.push_back(guarded("relative_bounds", [&](SelftestCheck& c) {
    ModelSpec spec;
    spec.ps = two_level();
    spec.ff = ff;
    const CoupledModel m = assemble(spec, 0.05);
    const RelativeBoundReport r = check_relative_bounds(m, 20, seed + 3);
    c.ok = r.ok;
    c.detail = "worst ratios " + num(r.number_worst) + ", " + num(r.field_energy_worst) + ", " +
               num(r.interaction_worst);
  }));

  return out;
}

}  // namespace llab
