#include <doctest.h>

#include "helpers.hpp"
#include "llab/errors.hpp"
#include "llab/fgr.hpp"
#include "llab/linalg.hpp"
#include "llab/random_systems.hpp"

using namespace llab;
using Approx = doctest::Approx;

namespace {

const FgrEntry& entry_at(const FgrReport& r, double e) {
  for (const auto& en : r.entries)
    if (std::abs(en.e - e) < 1e-12) return en;
  throw std::runtime_error("no entry");
}

CVec diagonal_vector(const CVec& c) {
  const auto n = c.size();
  CVec phi = CVec::Zero(n * n);
  for (Eigen::Index i = 0; i < n; ++i) phi(pair_index(static_cast<int>(i), static_cast<int>(i), static_cast<int>(n))) = c(i);
  return phi;
}

}  // namespace

TEST_SUITE("fgr") {
  TEST_CASE("coupling function") {
    ParticleSystem ps = test::two_level();
    const FormFactor ff = test::canonical_g();
    Rng rng(1);
    for (double u : {-2.0, -0.3, 0.4, 1.7}) {
      const CMat m = coupling_m(ps, ff, u);
      CHECK(min_eigenvalue(m.adjoint() * m) >= -1e-14);
    }
    ps.G.setZero();
    CHECK(coupling_m(ps, ff, 0.7).norm() == 0.0);
    CHECK_THROWS_AS(coupling_m(ps, ff, 0.0), NumericalError);

    ps = test::two_level(50.0);
    const double u = 1.3;
    const CMat m = coupling_m(ps, ff, u);
    const CMat lead = u * ff.value(u) * doubled_operators(ps).left;
    CHECK((m - lead).norm() <= 1e-12 * lead.norm());
  }

  TEST_CASE("gibbs vector is a zero mode of the zero level shift") {
    Rng rng(2);
    for (int t = 0; t < 50; ++t) {
      const RandomSystem rs = random_system(rng, 2, 5);
      const FgrOperator op = gamma_operator(rs.ps, rs.ff, 0.0);
      const CVec omega = gibbs_vector(rs.ps).omega;
      CHECK((op.gamma * omega).norm() <= 1e-10 * spectral_norm(op.gamma));
      CHECK(min_eigenvalue(op.gamma) >= -1e-12 * spectral_norm(op.gamma));
      CHECK((op.gamma_p - op.gamma_p.adjoint()).norm() == 0.0);
    }
  }

  TEST_CASE("two-level gap identity") {
    const ParticleSystem ps = test::two_level();
    const FormFactor ff = test::canonical_g();
    const double e = std::exp(1.0);
    const double g0 = e / (e - 1.0) * kAngularMeasure * std::exp(-2.0);
    const double gap = 2.0 * g0 * (1.0 + std::exp(-1.0));
    const GapLowerBound b = gap_lower_bound(ps, ff, 0.0);
    CHECK(b.g0 == Approx(g0).epsilon(1e-13));
    CHECK(b.gap == Approx(gap).epsilon(1e-13));
    const FgrOperator op = gamma_operator(ps, ff, 0.0);
    const CMat block = principal_submatrix(op.gamma_p, op.range);
    const HermitianEigen eig = hermitian_eigen(block);
    CHECK(std::abs(eig.values(0)) <= 1e-14);
    CHECK(eig.values(1) == Approx(gap).epsilon(1e-10));
    // quadratic-form oracle on the nonzero eigenvector
    CVec c(2);
    c << eig.vectors(0, 1), eig.vectors(1, 1);
    CHECK(zero_mode_quadratic_form(ps, ff, c) == Approx(gap).epsilon(1e-10));
    const FgrReport r = fgr_condition(ps, ff);
    CHECK(r.all_positive);
    CHECK(entry_at(r, 0.0).gamma_min == Approx(gap).epsilon(1e-10));
    CHECK(entry_at(r, 1.0).positive);
    CHECK(entry_at(r, -1.0).positive);
  }

  TEST_CASE("quadratic-form oracle agrees with the spectral sum") {
    Rng rng(3);
    for (int t = 0; t < 50; ++t) {
      const RandomSystem rs = random_system(rng, 2, 5);
      const CVec c = random_unit_vector(rng, rs.ps.size());
      const FgrOperator op = gamma_operator(rs.ps, rs.ff, 0.0);
      const CVec phi = diagonal_vector(c);
      const double spectral = phi.dot(op.gamma_p * phi).real();
      const double oracle = zero_mode_quadratic_form(rs.ps, rs.ff, c);
      CHECK(std::abs(spectral - oracle) <= 1e-10 * std::max(std::abs(oracle), 1e-300));
    }
  }

  TEST_CASE("diagonal coupling violates the condition") {
    ParticleSystem ps = test::two_level();
    ps.G << 1.0, 0.0, 0.0, -1.0;
    const FgrReport r = fgr_condition(ps, test::canonical_g());
    CHECK(std::abs(entry_at(r, 0.0).gamma_min) <= 1e-14);
    CHECK_FALSE(entry_at(r, 0.0).positive);
    CHECK_FALSE(r.all_positive);
    ps.G.setZero();
    const FgrReport z = fgr_condition(ps, test::canonical_g());
    for (const auto& en : z.entries) {
      CHECK(en.gamma_min == 0.0);
      CHECK_FALSE(en.positive);
    }
  }

  TEST_CASE("decoupled level gives a second zero mode") {
    ParticleSystem ps;
    ps.energies = RVec(3);
    ps.energies << 0.0, 0.7, 1.6;
    ps.G = CMat::Zero(3, 3);
    ps.G(0, 1) = ps.G(1, 0) = 0.8;
    ps.beta = 1.0;
    const FormFactor ff = test::canonical_g();
    const FgrReport r = fgr_condition(ps, ff);
    CHECK(std::abs(entry_at(r, 0.0).gamma_min) <= 1e-14);
    CVec c = CVec::Zero(3);
    c(2) = 1.0;
    CHECK(zero_mode_quadratic_form(ps, ff, c) == 0.0);
  }

  TEST_CASE("overlap constants") {
    ParticleSystem ps;
    ps.energies = RVec(3);
    ps.energies << 0.0, 0.45, 1.3;
    Rng rng(4);
    ps.G = random_hermitian(rng, 3);
    ps.beta = 1.5;
    const FormFactor ff = test::canonical_g();
    // e = E_2 - E_0 is nondegenerate: m0 = 2, n0 = 0
    const GapLowerBound b = gap_lower_bound(ps, ff, 1.3);
    double expected = 0.0;
    for (int n = 0; n < 3; ++n)
      if (n != 0) expected += std::norm(ps.G(n, 0));
    for (int m = 0; m < 3; ++m)
      if (m != 2) expected += std::norm(ps.G(m, 2));
    CHECK(b.delta0 == Approx(expected).epsilon(1e-13));

    const GapLowerBound z = gap_lower_bound(ps, ff, 0.0);
    CHECK(z.delta0 == 0.0);
    CHECK(z.part1_bound == 0.0);
    CHECK_THROWS_AS(gap_lower_bound(ps, ff, 0.2), DomainError);
  }

  TEST_CASE("bundled models satisfy the bounds") {
    for (const char* name : {"two_level.json", "three_level.json"}) {
      const RunConfig cfg = parse_config_file(test::config_path(name));
      const FgrReport r = fgr_condition(cfg.particle, cfg.form_factor);
      CHECK(r.all_positive);
      CHECK(r.gibbs_residual <= 1e-10);
      for (const auto& en : r.entries) CHECK(en.bound_ok);
    }
  }

  TEST_CASE("lorentzian regularization converges to the spectral sum") {
    const ParticleSystem ps = test::two_level();
    const FormFactor ff = test::canonical_g();
    ParticleSystem zero = ps;
    zero.G.setZero();
    CHECK(lorentzian_gamma(zero, ff, 1.0, 0.01).value.norm() == 0.0);

    for (double e : {0.0, 1.0}) {
      const FgrOperator op = gamma_operator(ps, ff, e);
      const CMat target = principal_submatrix(op.gamma_p, op.range);
      std::vector<double> eps{1e-1, 1e-2, 1e-3}, dist;
      for (double x : eps) dist.push_back(spectral_norm(lorentzian_gamma(ps, ff, e, x).value - target));
      CHECK(dist[1] < dist[0]);
      CHECK(dist[2] < dist[1]);
      CHECK(loglog_slope(eps, dist) >= 0.25);
      if (e == 1.0) CHECK(dist[2] <= 0.02 * spectral_norm(target));
    }
    CHECK_THROWS_AS(lorentzian_gamma(ps, ff, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(lorentzian_gamma(ps, ff, 0.5, 0.1), DomainError);
  }

  TEST_CASE("serial and parallel reports agree") {
    const RunConfig cfg = parse_config_file(test::config_path("three_level.json"));
    const FgrReport a = fgr_condition(cfg.particle, cfg.form_factor, Exec::serial);
    const FgrReport b = fgr_condition(cfg.particle, cfg.form_factor, Exec::parallel);
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t k = 0; k < a.entries.size(); ++k) {
      CHECK(a.entries[k].gamma_min == b.entries[k].gamma_min);
      CHECK(a.entries[k].bound == b.entries[k].bound);
    }
    CHECK(a.gap == b.gap);
  }
}
