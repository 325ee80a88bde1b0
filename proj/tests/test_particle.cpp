#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "helpers.hpp"
#include "llab/errors.hpp"
#include "llab/linalg.hpp"
#include "llab/random_systems.hpp"

using namespace llab;
using Approx = doctest::Approx;

TEST_SUITE("particle") {
  TEST_CASE("gibbs vector of the two-level system") {
    const GibbsVector g = gibbs_vector(test::two_level());
    CHECK(g.Z == Approx(1.0 + std::exp(-1.0)).epsilon(1e-15));
    CHECK(g.Z == Approx(1.367879).epsilon(1e-6));
    const double s = std::sqrt(g.Z);
    CHECK(std::abs(g.omega(pair_index(0, 0, 2)) - 1.0 / s) < 1e-15);
    CHECK(std::abs(g.omega(pair_index(1, 1, 2)) - std::exp(-0.5) / s) < 1e-15);
    CHECK(std::abs(g.omega(pair_index(0, 1, 2))) == 0.0);
    CHECK(g.omega.norm() == Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("degenerate levels give equal weights") {
    ParticleSystem ps = test::two_level(3.7);
    ps.energies << 0.0, 0.0;
    const GibbsVector g = gibbs_vector(ps);
    CHECK(std::abs(g.omega(0) - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(g.omega(3) - 1.0 / std::sqrt(2.0)) < 1e-15);
  }

  TEST_CASE("gibbs vector against 50-digit summation") {
    using big = boost::multiprecision::cpp_bin_float_50;
    ParticleSystem ps;
    ps.energies = RVec(3);
    ps.energies << 0.0, 1.0, 2.0;
    ps.G = CMat::Identity(3, 3);
    ps.beta = 2.0;
    const GibbsVector g = gibbs_vector(ps);
    big z = 0;
    for (int i = 0; i < 3; ++i) z += exp(big(-2 * i));
    CHECK(std::abs(g.Z - z.convert_to<double>()) < 1e-15 * g.Z);
    for (int i = 0; i < 3; ++i) {
      const big c = exp(big(-i)) / sqrt(z);
      CHECK(std::abs(g.omega(pair_index(i, i, 3)).real() - c.convert_to<double>()) < 1e-15);
    }
  }

  TEST_CASE("shifted energies do not overflow") {
    ParticleSystem ps = test::two_level(10.0);
    ps.energies << 500.0, 501.0;
    const GibbsVector g = gibbs_vector(ps);
    CHECK(g.shift == 500.0);
    CHECK(std::isfinite(g.Z));
    CHECK(g.omega.norm() == Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("liouvillian spectrum") {
    const LiouvilleParticleSpectrum lp = particle_liouvillian(test::two_level());
    CHECK(lp.diagonal(0) == 0.0);
    CHECK(lp.diagonal(1) == -1.0);
    CHECK(lp.diagonal(2) == 1.0);
    CHECK(lp.diagonal(3) == 0.0);
    REQUIRE(lp.values.size() == 3);
    CHECK(lp.values[0] == -1.0);
    CHECK(lp.values[1] == 0.0);
    CHECK(lp.values[2] == 1.0);
    CHECK(lp.multiplicity(1) == 2);

    ParticleSystem deg = test::two_level();
    deg.energies << 0.0, 0.0;
    const auto ld = particle_liouvillian(deg);
    CHECK(ld.diagonal.cwiseAbs().maxCoeff() == 0.0);
    CHECK(ld.values.size() == 1);

    ParticleSystem three;
    three.energies = RVec(3);
    three.energies << 0.0, 1.0, 3.0;
    three.G = CMat::Identity(3, 3);
    const auto l3 = particle_liouvillian(three);
    const std::vector<double> expected{-3, -2, -1, 0, 1, 2, 3};
    REQUIRE(l3.values.size() == expected.size());
    for (std::size_t k = 0; k < expected.size(); ++k) CHECK(l3.values[k] == Approx(expected[k]));
  }

  TEST_CASE("projectors resolve the identity and the spectrum is symmetric") {
    Rng rng(11);
    for (int t = 0; t < 20; ++t) {
      const RandomSystem rs = random_system(rng, 2, 5);
      const auto lp = particle_liouvillian(rs.ps);
      const int n2 = rs.ps.size() * rs.ps.size();
      CMat sum = CMat::Zero(n2, n2);
      for (std::size_t k = 0; k < lp.values.size(); ++k) {
        const CMat p = lp.projector(k);
        sum += p;
        CHECK((p * p - p).norm() == 0.0);
        for (std::size_t j = k + 1; j < lp.values.size(); ++j) CHECK((p * lp.projector(j)).norm() == 0.0);
        const auto mirror = lp.find(-lp.values[k]);
        REQUIRE(mirror);
        CHECK(lp.multiplicity(*mirror) == lp.multiplicity(k));
      }
      CHECK((sum - CMat::Identity(n2, n2)).norm() == 0.0);
      const GibbsVector g = gibbs_vector(rs.ps);
      CHECK(std::abs(g.omega.norm() - 1.0) < 1e-12);
      CHECK((lp.diagonal.cast<cplx>().asDiagonal() * g.omega).norm() == 0.0);
    }
  }

  TEST_CASE("doubled coupling operators") {
    ParticleSystem ps = test::two_level();
    DoubledCoupling d = doubled_operators(ps);
    CHECK((d.right - kron(SpMat(CMat::Identity(2, 2).sparseView()), SpMat(ps.G.sparseView())).toDense()).norm() ==
          0.0);

    ps.G = CMat::Zero(2, 2);
    ps.G(0, 1) = cplx(0, 1);
    ps.G(1, 0) = cplx(0, -1);
    d = doubled_operators(ps);
    const CMat expected = kron(SpMat(CMat::Identity(2, 2).sparseView()), SpMat((-ps.G).sparseView())).toDense();
    CHECK((d.right - expected).norm() == 0.0);
    CHECK(hermiticity_defect(d.right) == 0.0);

    Rng rng(3);
    ps = ParticleSystem{};
    ps.energies = RVec(3);
    ps.energies << 0.0, 0.4, 1.1;
    ps.G = random_hermitian(rng, 3);
    d = doubled_operators(ps);
    CHECK((d.left * d.right - d.right * d.left).norm() <= 1e-14);
    CHECK(hermiticity_defect(d.left) <= 1e-15);
  }

  TEST_CASE("equal energies and real coupling: left and right act alike on the gibbs vector") {
    ParticleSystem ps = test::two_level();
    ps.energies << 0.0, 0.0;
    ps.G << 0.3, 1.2, 1.2, -0.7;
    const DoubledCoupling d = doubled_operators(ps);
    const GibbsVector g = gibbs_vector(ps);
    CHECK((d.left * g.omega - d.right * g.omega).norm() <= 1e-15);
  }

  TEST_CASE("conjugation is an antiunitary involution fixing the gibbs vector") {
    Rng rng(5);
    const CVec v = random_unit_vector(rng, 9);
    CHECK((conjugation(conjugation(v, 3), 3) - v).norm() == 0.0);
    CHECK(conjugation(v, 3).norm() == Approx(1.0));
    ParticleSystem ps;
    ps.energies = RVec(3);
    ps.energies << 0.0, 0.5, 2.0;
    ps.G = CMat::Identity(3, 3);
    const GibbsVector g = gibbs_vector(ps);
    CHECK((conjugation(g.omega, 3) - g.omega).norm() == 0.0);
  }

  TEST_CASE("validation") {
    ParticleSystem ps = test::two_level();
    ps.beta = 0.0;
    CHECK_THROWS_AS(validate(ps), DomainError);
    ps = test::two_level();
    ps.energies << 1.0, 0.0;
    CHECK_THROWS_AS(validate(ps), DomainError);
    ps = test::two_level();
    ps.G(0, 1) = 2.0;
    CHECK_THROWS_AS(validate(ps), DomainError);
    ps = test::two_level();
    ps.energies = RVec::Zero(1);
    ps.G = CMat::Zero(1, 1);
    CHECK_THROWS_AS(validate(ps), DomainError);
  }
}
