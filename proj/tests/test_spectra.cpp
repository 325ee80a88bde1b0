#include <doctest.h>

#include <algorithm>
#include <map>

#include "helpers.hpp"
#include "llab/errors.hpp"
#include "llab/fgr.hpp"
#include "llab/linalg.hpp"
#include "llab/spectra.hpp"

using namespace llab;
using Approx = doctest::Approx;

namespace {

// Cesaro limit by direct grouping of a dense eigendecomposition.
double direct_cesaro(const CoupledModel& m, const CVec& psi, const CMat& a) {
  const HermitianEigen eig = hermitian_eigen(m.dense_L());
  const double tol = 1e-9 * std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  double total = 0.0;
  Eigen::Index k = 0;
  while (k < eig.values.size()) {
    Eigen::Index j = k;
    while (j + 1 < eig.values.size() && eig.values(j + 1) - eig.values(k) <= tol) ++j;
    const CMat v = eig.vectors.middleCols(k, j - k + 1);
    const CVec c = v.adjoint() * psi;
    total += c.dot(v.adjoint() * a * v * c).real();
    k = j + 1;
  }
  return total;
}

ModelSpec kms_spec(double beta) {
  ModelSpec s = test::two_level_spec(12, 1, 3.0, beta);
  return s;
}

}  // namespace

TEST_SUITE("spectra") {
  TEST_CASE("eigenvector delocalization across the coupling grid") {
    const RunConfig cfg = parse_config_file(test::config_path("two_level.json"));
    const SpectralScan scan = eigen_scan(cfg.model_spec(), {0.0, 0.02, 0.05, 0.1}, 1.0, 0.5, 1.5);
    REQUIRE(scan.points.size() == 4);
    CHECK(scan.points[0].max_overlap == Approx(1.0).epsilon(1e-12));
    for (std::size_t k = 1; k < scan.points.size(); ++k) {
      CHECK(scan.points[k].max_overlap < scan.points[k - 1].max_overlap);
      CHECK(std::abs(scan.points[k].zero_value) <= 1e-9);
      CHECK(scan.points[k].zero_residual <= 1e-9);
    }
    CHECK_THROWS_AS(eigen_scan(cfg.model_spec(), {0.1}, 1.0, 1.5, 0.5), DomainError);
  }

  TEST_CASE("spectral function at zero coupling is the smoothing Lorentzian") {
    const CoupledModel m = assemble(test::two_level_spec(40, 1, 8.0), 0.0);
    const CVec psi = unperturbed_eigenvector(m, 1.0);
    std::vector<double> x;
    for (int i = 0; i <= 80; ++i) x.push_back(1.0 - 0.1 + 0.2 * i / 80.0);
    const double eta = 0.02;
    const auto s = spectral_function(m, psi, x, eta);
    const LorentzianFit fit = fit_lorentzian(x, s);
    CHECK(fit.center == Approx(1.0).epsilon(1e-9));
    CHECK(fit.hwhm == Approx(eta).epsilon(1e-9));
  }

  TEST_CASE("spectral function: arrow path matches the general solver") {
    const CoupledModel m1 = assemble(test::two_level_spec(16, 1), 0.1);
    const CVec psi = unperturbed_eigenvector(m1, 1.0);
    std::vector<double> x{0.8, 0.95, 1.0, 1.05, 1.2};
    const auto s1 = spectral_function(m1, psi, x, 0.05);
    const CMat l = m1.dense_L();
    for (std::size_t i = 0; i < x.size(); ++i) {
      const CMat r = l - cplx(x[i], 0.05) * CMat::Identity(l.rows(), l.cols());
      const CVec sol = r.partialPivLu().solve(psi);
      CHECK(s1[i] == Approx(psi.dot(sol).imag()).epsilon(1e-10));
    }
  }

  TEST_CASE("lorentzian fit rejects bad profiles") {
    std::vector<double> x{0, 1, 2, 3, 4, 5, 6}, flat(7, 1.0);
    CHECK_THROWS_AS(fit_lorentzian(x, flat), NumericalError);
    CHECK_THROWS_AS(fit_lorentzian({0, 1}, {1, 2}), DomainError);
  }

  TEST_CASE("resonance width scales with the square of the coupling") {
    const RunConfig cfg = parse_config_file(test::config_path("two_level.json"));
    ModelSpec s = cfg.model_spec();
    s.n_max = 1;
    s.n_u = 4000;
    s.u_max = 8.0;
    ResonanceOptions o;
    o.eta = 0.01;
    const ResonanceReport r = resonance_width(s, 1.0, {0.01, 0.02, 0.05, 0.1}, o);
    CHECK(r.slope == Approx(2.0).epsilon(0.15));
    CHECK(r.prefactor_ratio > 1.0 / 3.0);
    CHECK(r.prefactor_ratio < 3.0);

    ModelSpec coarse = s;
    coarse.n_u = 40;
    CHECK_THROWS_AS(resonance_width(coarse, 1.0, {0.05}, o), DomainError);
  }

  TEST_CASE("kms vector: zero coupling and linear response") {
    const CoupledModel free = assemble(kms_spec(1.0), 0.0);
    const KmsVector k0 = kms_vector(free);
    CHECK(k0.distance <= 1e-12);
    const std::vector<double> lam{1e-3, 3e-3, 1e-2, 3e-2, 1e-1};
    const auto scan = kms_scan(kms_spec(1.0), lam);
    std::vector<double> d;
    for (const auto& k : scan) {
      CHECK(k.vector.norm() == Approx(1.0).epsilon(1e-12));
      CHECK(k.residual <= 1e-9);
      d.push_back(k.distance);
    }
    CHECK(loglog_slope(lam, d) == Approx(1.0).epsilon(0.15));
  }

  TEST_CASE("kms vector: the truncated kernel is degenerate") {
    const CoupledModel m = assemble(kms_spec(1.0), 0.05);
    const KmsVector k = kms_vector(m);
    CHECK(k.kernel_dim >= 1);
    if (k.kernel_dim > 1) CHECK_THROWS_AS(kms_vector(m, true), NumericalError);
  }

  TEST_CASE("kms vector: distance grows with inverse temperature") {
    std::vector<double> d;
    for (double beta : {1.0, 2.0, 4.0}) d.push_back(kms_vector(assemble(kms_spec(beta), 0.01)).distance);
    CHECK(d[1] > d[0]);
    CHECK(d[2] > d[1]);
  }

  TEST_CASE("stationary and trivial evolutions") {
    const CoupledModel m = assemble(test::two_level_spec(8, 2), 0.1);
    const SpectralData sd = diagonalize(m);
    const CMat a = level_observable(m, 1);
    EvolveOptions o;
    o.T = 50.0;
    o.dt = 0.1;
    const KmsVector k = kms_vector(m, sd);
    const TimeSeries ts = evolve(m, sd, k.vector, a, o);
    const auto [lo, hi] = std::minmax_element(ts.values.begin(), ts.values.end());
    CHECK(*hi - *lo <= 1e-12);
    CHECK(ts.values.front() == Approx(ts.target).epsilon(1e-12));

    const CMat id = CMat::Identity(a.rows(), a.cols());
    const TimeSeries one = evolve(m, sd, m.particle_vacuum_state(0, 0), id, o);
    for (double v : one.values) CHECK(v == Approx(1.0).epsilon(1e-12));
    for (double n : one.norms) CHECK(std::abs(n - 1.0) <= 1e-12);
  }

  TEST_CASE("cesaro limit matches direct evaluation") {
    const CoupledModel m = assemble(test::two_level_spec(8, 2), 0.1);
    const SpectralData sd = diagonalize(m);
    const CMat a = level_observable(m, 0);
    CVec psi = m.particle_vacuum_state(0, 0) + m.omega_beta0();
    psi.normalize();
    EvolveOptions o;
    o.T = 20.0;
    const TimeSeries ts = evolve(m, sd, psi, a, o);
    CHECK(std::abs(ts.cesaro_limit - direct_cesaro(m, psi, a)) <= 1e-8);
    CHECK(std::abs(ts.mean_at_horizon) <= ts.observable_norm);
  }

  TEST_CASE("closed-form running mean against trapezoid integration") {
    const CoupledModel m = assemble(test::two_level_spec(6, 1), 0.1);
    const SpectralData sd = diagonalize(m);
    const CMat a = level_observable(m, 0);
    const CVec psi = m.particle_vacuum_state(1, 1);
    EvolveOptions o;
    o.T = 10.0;
    o.dt = 0.001;
    o.max_samples = 20001;
    const TimeSeries ts = evolve(m, sd, psi, a, o);
    double integral = 0.0;
    for (std::size_t i = 1; i < ts.times.size(); ++i)
      integral += 0.5 * (ts.values[i] + ts.values[i - 1]) * (ts.times[i] - ts.times[i - 1]);
    const double t_end = ts.times.back();
    CHECK(ergodic_mean(sd, psi, a, t_end) == Approx(integral / t_end).epsilon(1e-6));
    CHECK(ts.running_mean.back() == Approx(integral / t_end).epsilon(1e-6));
  }

  TEST_CASE("perturbed state: ergodic mean approaches the equilibrium value") {
    const RunConfig cfg = parse_config_file(test::config_path("two_level.json"));
    ModelSpec s = cfg.model_spec();
    s.n_max = 1;
    const CoupledModel m = assemble(s, 0.1);
    const SpectralData sd = diagonalize(m);
    const CMat a = level_observable(m, 0);
    const KmsVector k = kms_vector(m, sd);
    CVec psi = std::sqrt(0.7) * k.vector + std::sqrt(0.3) * m.particle_vacuum_state(0, 0);
    psi.normalize();
    EvolveOptions o;
    o.T = 1e9;
    const TimeSeries ts = evolve(m, sd, psi, a, o);
    const double early = std::abs(ergodic_mean(sd, psi, a, ts.heisenberg_time / 20.0) - ts.target);
    const double late = std::abs(ergodic_mean(sd, psi, a, ts.heisenberg_time / 2.0) - ts.target);
    CHECK(late * 5.0 <= early);
  }

  TEST_CASE("evolve preconditions") {
    const CoupledModel m = assemble(test::two_level_spec(6, 1), 0.1);
    const SpectralData sd = diagonalize(m);
    const CMat a = level_observable(m, 0);
    const CVec psi = m.particle_vacuum_state(0, 0);
    EvolveOptions o;
    o.dt = 10.0;
    CHECK_THROWS_AS(evolve(m, sd, psi, a, o), DomainError);
    CMat skew = a;
    skew(0, 1) = 1.0;
    CHECK_THROWS_AS(evolve(m, sd, psi, skew, {}), DomainError);
    CHECK_THROWS_AS(evolve(m, sd, 2.0 * psi, a, {}), DomainError);
    CHECK_THROWS_AS(level_observable(m, 2), DomainError);
  }
}
