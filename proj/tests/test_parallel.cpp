#include <doctest.h>

#include "helpers.hpp"
#include "llab/functional_calculus.hpp"
#include "llab/liouvillian.hpp"
#include "llab/random_systems.hpp"
#include "llab/spectra.hpp"

using namespace llab;

// The serial path is the reference; the threaded kernels must reproduce it bit for bit.
TEST_SUITE("parallel") {
  TEST_CASE("interaction assembly") {
    const CoupledModel m = assemble(test::two_level_spec(10, 2), 0.0);
    const SpMat s = interaction(m.ps, m.glued, *m.fock, Exec::serial);
    const SpMat p = interaction(m.ps, m.glued, *m.fock, Exec::parallel);
    CHECK(CMat(s - p).cwiseAbs().maxCoeff() == 0.0);
    const SpMat ts = i_tilde(m.ps, m.glued, *m.fock, Exec::serial);
    const SpMat tp = i_tilde(m.ps, m.glued, *m.fock, Exec::parallel);
    CHECK(CMat(ts - tp).cwiseAbs().maxCoeff() == 0.0);
    const SpMat fs = field_operator(m.glued.g1, *m.fock, Exec::serial);
    const SpMat fp = field_operator(m.glued.g1, *m.fock, Exec::parallel);
    CHECK(CMat(fs - fp).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("spectral function") {
    const CoupledModel m = assemble(test::two_level_spec(60, 1, 8.0), 0.05);
    const CVec psi = unperturbed_eigenvector(m, 1.0);
    std::vector<double> x;
    for (int i = 0; i < 21; ++i) x.push_back(0.9 + 0.01 * i);
    CHECK(spectral_function(m, psi, x, 0.02, Exec::serial) == spectral_function(m, psi, x, 0.02, Exec::parallel));
  }

  TEST_CASE("time series and kms scan") {
    const CoupledModel m = assemble(test::two_level_spec(6, 2), 0.1);
    const SpectralData sd = diagonalize(m);
    const CMat a = level_observable(m, 0);
    const CVec psi = m.particle_vacuum_state(0, 0);
    EvolveOptions o;
    o.T = 20.0;
    o.exec = Exec::serial;
    const TimeSeries s = evolve(m, sd, psi, a, o);
    o.exec = Exec::parallel;
    const TimeSeries p = evolve(m, sd, psi, a, o);
    CHECK(s.values == p.values);
    CHECK(s.running_mean == p.running_mean);

    const std::vector<double> lam{0.01, 0.1};
    const auto ks = kms_scan(test::two_level_spec(8, 1), lam, Exec::serial);
    const auto kp = kms_scan(test::two_level_spec(8, 1), lam, Exec::parallel);
    for (std::size_t i = 0; i < lam.size(); ++i) CHECK(ks[i].distance == kp[i].distance);
  }

  TEST_CASE("helffer-sjostrand quadrature") {
    Rng rng(17);
    const CMat a = random_hermitian(rng, 7);
    HsOptions o;
    o.exec = Exec::serial;
    const CMat s = hs_functional_calculus(PolynomialBump(0.0, 2.0), a, 0, o);
    o.exec = Exec::parallel;
    const CMat p = hs_functional_calculus(PolynomialBump(0.0, 2.0), a, 0, o);
    CHECK((s - p).cwiseAbs().maxCoeff() == 0.0);
  }
}
