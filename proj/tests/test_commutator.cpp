#include <doctest.h>

#include "helpers.hpp"
#include "llab/commutator.hpp"
#include "llab/errors.hpp"
#include "llab/linalg.hpp"
#include "llab/spectra.hpp"

using namespace llab;
using Approx = doctest::Approx;

namespace {

double anti_defect(const SpMat& a) { return CMat(a + SpMat(a.adjoint())).cwiseAbs().maxCoeff(); }

MourreParameters manual(double lambda, double theta, double eps) {
  MourreParameters p;
  p.lambda = lambda;
  p.theta = theta;
  p.eps = eps;
  p.sigma = 1.0;
  return p;
}

}  // namespace

TEST_SUITE("commutator") {
  TEST_CASE("automatic parameters and the smallness gate") {
    const MourreParameters p = MourreParameters::automatic(0.02);
    CHECK(p.eps == Approx(std::pow(0.02, 0.44)));
    CHECK(p.sigma == Approx(std::pow(0.02, -0.55)));
    CHECK(p.theta == Approx(std::pow(0.02, 0.26)));
    const MourreParameters tiny = MourreParameters::automatic(1e-8);
    CHECK(tiny.gate_ok());
    const MourreParameters big = MourreParameters::automatic(0.1);
    CHECK_FALSE(big.gate_ok());
    CHECK(big.gate_status().find("FAIL") != std::string::npos);
    CHECK_THROWS_AS(MourreParameters::automatic(0.0), DomainError);
  }

  TEST_CASE("structure of the conjugate perturbation") {
    const CoupledModel m = assemble(test::two_level_spec(8, 2), 0.1);
    RVec q;
    const SpMat b = conjugate_b(m, 0.0, 0.3, 0.3, &q);
    CHECK(b.norm() > 0.0);
    CHECK(anti_defect(b) <= 1e-13);
    const CVec qc = q.cast<cplx>(), qbar = (RVec::Ones(q.size()) - q).cast<cplx>();
    CHECK(CMat(qc.asDiagonal() * b * qc.asDiagonal()).norm() == 0.0);
    CHECK(CMat(qbar.asDiagonal() * b * qbar.asDiagonal()).norm() == 0.0);
    CHECK((q.array() * (1.0 - q.array())).abs().maxCoeff() == 0.0);

    const CoupledModel free = with_lambda(m, 0.0);
    CHECK(conjugate_b(free, 0.0, 0.3, 0.3).norm() == 0.0);
    CHECK_THROWS_AS(conjugate_b(m, 0.0, 0.3, 0.0), DomainError);
    CHECK_THROWS_AS(conjugate_b(m, 0.5, 0.3, 0.3), DomainError);
  }

  TEST_CASE("conjugate pair is anti-hermitian, commutators hermitian") {
    const CoupledModel m = assemble(test::two_level_spec(8, 2), 0.05);
    for (double e : {0.0, 1.0}) {
      const ConjugatePair p = build_conjugate_pair(m, e, 0.3, 0.3);
      CHECK(anti_defect(p.A0 + p.b) <= 1e-12);
      CHECK(hermiticity_defect(p.comm_LA) <= 1e-12);
      CHECK(hermiticity_defect(p.B) <= 1e-12);
      const SpMat lb = m.L * p.b - p.b * m.L;
      CHECK(hermiticity_defect(lb) <= 1e-12);
    }
  }

  TEST_CASE("defined commutator at zero coupling is the number operator") {
    const CoupledModel m = assemble(test::two_level_spec(8, 2), 0.0);
    const ConjugatePair p = build_conjugate_pair(m, 1.0, 0.3, 0.3);
    const CommutatorComparison c = defined_commutator(m, p);
    CHECK(CMat(c.defined - diagonal_matrix(m.number)).norm() == 0.0);
    CHECK(hermiticity_defect(c.defined) <= 1e-12);
  }

  TEST_CASE("defined and literal commutators agree on smooth vectors as the grid is refined") {
    std::vector<double> n_us, defects;
    for (int n_u : {16, 32, 64}) {
      const CoupledModel m = assemble(test::two_level_spec(n_u, 1, 8.0), 0.05);
      const ConjugatePair p = build_conjugate_pair(m, 1.0, 0.3, 0.3);
      n_us.push_back(n_u);
      defects.push_back(defined_commutator(m, p).smooth_defect);
    }
    CHECK(loglog_slope(n_us, defects) <= -1.0);
  }

  TEST_CASE("mourre estimate at zero coupling") {
    const CoupledModel m = assemble(test::two_level_spec(8, 2), 0.0);
    MourreOptions o;
    o.smooth_variant = false;
    const MourreReport r = mourre_check(m, 1.0, manual(0.0, 0.3, 0.3), o);
    CHECK(r.bound == 0.0);
    CHECK(r.min_eig >= 0.0);
    CHECK(r.margin >= 0.0);
    // compressed B is (9/10) N on the window
    const ConjugatePair p = build_conjugate_pair(m, 1.0, 0.3, 0.3);
    CHECK(CMat(p.B - 0.9 * diagonal_matrix(m.number)).norm() <= 1e-15);
  }

  TEST_CASE("mourre margins on the two-level model") {
    const RunConfig cfg = parse_config_file(test::config_path("two_level.json"));
    const CoupledModel m = assemble(cfg.model_spec(), 0.05);
    const MourreReport r1 = mourre_check(m, 1.0, MourreParameters::automatic(0.05));
    CHECK(r1.bound > 0.0);
    CHECK(r1.margin >= 0.0);
    CHECK(r1.has_variants);
    const MourreReport r0 = mourre_check(m, 0.0, MourreParameters::automatic(0.05));
    CHECK(r0.margin >= 0.0);
    MourreOptions wide;
    wide.half_width = 1.5;
    CHECK_THROWS_AS(mourre_check(m, 1.0, MourreParameters::automatic(0.05), wide), DomainError);
  }

  TEST_CASE("virial diagnostics") {
    const CoupledModel free = assemble(test::two_level_spec(8, 2), 0.0);
    const ConjugatePair pf = build_conjugate_pair(free, 1.0, 0.3, 0.3);
    const VirialDefect v0 = virial_defect(free, pf, free.omega_beta0(), 0.0);
    CHECK(std::abs(v0.defined) == 0.0);

    CVec one = CVec::Zero(static_cast<Eigen::Index>(free.dim));
    std::size_t photon = 0;
    for (std::size_t i = 0; i < free.fock_dim(); ++i)
      if (free.fock->total(i) == 1) {
        photon = i;
        break;
      }
    const auto idx = free.index(pair_index(0, 1, 2), photon);
    one(static_cast<Eigen::Index>(idx)) = 1.0;
    CHECK(virial_defect(free, pf, one, free.L0(static_cast<Eigen::Index>(idx))).defined == Approx(1.0));

    const CoupledModel m = with_lambda(free, 0.05);
    const ConjugatePair p = build_conjugate_pair(m, 0.0, 0.3, 0.3);
    const KmsVector k = kms_vector(m);
    const VirialDefect v = virial_defect(m, p, k.vector, 0.0);
    CHECK(std::abs(v.literal) <= 1e-8);
    CHECK(v.eigen_residual <= 1e-9);
    CHECK_THROWS_AS(virial_defect(m, p, 2.0 * k.vector, 0.0), DomainError);
  }
}
