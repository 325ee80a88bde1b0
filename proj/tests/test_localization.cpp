#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "helpers.hpp"
#include "llab/commutator.hpp"
#include "llab/errors.hpp"
#include "llab/functional_calculus.hpp"
#include "llab/linalg.hpp"
#include "llab/localization.hpp"
#include "llab/random_systems.hpp"

using namespace llab;
using Approx = doctest::Approx;

namespace {

// f(x) = 1 at x = 1, vanishing at 0 and 2, compactly supported.
class UnitBump : public SmoothFunction {
 public:
  double derivative(int k, double x) const override { return inner_.derivative(k, x); }
  double lo() const override { return inner_.lo(); }
  double hi() const override { return inner_.hi(); }

 private:
  PolynomialBump inner_{1.0, 0.9};
};

}  // namespace

TEST_SUITE("localization") {
  TEST_CASE("feshbach map of a block-diagonal matrix") {
    CMat b = CMat::Zero(4, 4);
    b(0, 0) = 1.0;
    b(1, 1) = 2.0;
    b(0, 1) = b(1, 0) = 0.5;
    b(2, 2) = 5.0;
    b(3, 3) = 7.0;
    const CMat e = feshbach_map(b, std::vector<Eigen::Index>{0, 1}, cplx(0.3, 0.0));
    CHECK((e - b.topLeftCorner(2, 2)).norm() == 0.0);
    CHECK_THROWS_AS(feshbach_map(b, std::vector<Eigen::Index>{0, 1}, cplx(5.0, 0.0)), DomainError);
  }

  TEST_CASE("scalar Schur identity") {
    CMat b(2, 2);
    b << 0.3, cplx(0.4, 0.2), cplx(0.4, -0.2), 1.7;
    Eigen::SelfAdjointEigenSolver<CMat> es(b);
    for (int k = 0; k < 2; ++k) {
      const double z = es.eigenvalues()(k);
      const CMat e = feshbach_map(b, std::vector<Eigen::Index>{0}, cplx(z, 0.0));
      CHECK(std::abs(e(0, 0) - z) <= 1e-13);
      CHECK(z == Approx(0.3 - std::norm(b(0, 1)) / (1.7 - z)));
    }
  }

  TEST_CASE("orthonormal-basis form agrees with the index form") {
    Rng rng(2);
    const CMat b = random_hermitian(rng, 7);
    CMat basis = CMat::Zero(7, 3);
    basis(1, 0) = basis(4, 1) = basis(6, 2) = 1.0;
    const cplx z(0.1, 0.05);
    CHECK((feshbach_map(b, basis, z) - feshbach_map(b, std::vector<Eigen::Index>{1, 4, 6}, z)).norm() <= 1e-12);
  }

  TEST_CASE("isospectrality on a 20 x 20 matrix with an 8 / 12 split") {
    Rng rng(20);
    const CMat b = random_hermitian(rng, 20);
    std::vector<Eigen::Index> p{0, 2, 5, 7, 9, 12, 15, 18};
    const IsospectralityReport r = check_isospectrality(b, p);
    CHECK(r.counts_equal);
    CHECK(r.max_root_error <= 1e-8 * r.scale);
    CHECK(r.max_min_singular <= 1e-8 * r.scale);
    CHECK(r.ok);
  }

  TEST_CASE("isospectrality needs a hermitian input") {
    CMat b = CMat::Identity(4, 4);
    b(0, 1) = 1.0;
    CHECK_THROWS_AS(check_isospectrality(b, {0, 1}), DomainError);
  }

  TEST_CASE("IMS partition") {
    for (double x : {0.0, 0.1, 0.5, 0.77, 0.99, 1.0, 3.0}) {
      const double c1 = ims_chi1(x), c2 = ims_chi2(x);
      CHECK(c1 * c1 + c2 * c2 == Approx(1.0).epsilon(1e-15));
    }
    CHECK(ims_chi1(0.0) == 1.0);
    CHECK(ims_chi1(1.0) == Approx(0.0).epsilon(1e-16));
    CHECK(ims_chi1(2.5) == Approx(0.0).epsilon(1e-16));
  }

  TEST_CASE("IMS identity is exact") {
    Rng rng(4);
    const CMat dense = random_hermitian(rng, 30);
    RVec number(30);
    for (int i = 0; i < 30; ++i) number(i) = i % 7;
    const ImsDecomposition d = ims_decompose(SpMat(dense.sparseView()), number, 4.0);
    CHECK(d.residual <= 1e-12 * d.b_norm);

    const CoupledModel m = assemble(test::two_level_spec(4, 6), 0.1);
    const ConjugatePair p = build_conjugate_pair(m, 1.0, 0.3, 0.3);
    const ImsDecomposition dm = ims_decompose(p.B, m.number, 4.0);
    CHECK(dm.residual <= 1e-12 * dm.b_norm);

    const ImsDecomposition diag = ims_decompose(diagonal_matrix(m.number), m.number, 3.0);
    CHECK(diag.double_comm_norm == 0.0);
    CHECK_THROWS_AS(ims_decompose(p.B, m.number, 0.0), DomainError);
  }

  TEST_CASE("helffer-sjostrand calculus") {
    Rng rng(6);
    const CMat a = random_hermitian(rng, 6);
    const CMat z = hs_functional_calculus(ZeroFunction(), a);
    CHECK(z.norm() == 0.0);

    CMat d = CMat::Zero(3, 3);
    d(1, 1) = 1.0;
    d(2, 2) = 2.0;
    const CMat f = hs_functional_calculus(UnitBump(), d);
    CMat expected = CMat::Zero(3, 3);
    expected(1, 1) = 1.0;
    CHECK(spectral_norm(f - expected) <= 1e-6);

    const HsCheck h = hs_checked(PolynomialBump(0.2, 1.5), a);
    CHECK(h.discrepancy <= 1e-6);
  }

  TEST_CASE("helffer-sjostrand derivative identity") {
    Rng rng(8);
    const CMat a = random_hermitian(rng, 5);
    const PolynomialBump f(0.1, 1.8);
    const CMat fp = hs_functional_calculus(f, a, 1);
    const double t = 1e-4;
    const CMat id = CMat::Identity(5, 5);
    const CMat fd = (spectral_calculus(f, a + t * id) - spectral_calculus(f, a - t * id)) / (2 * t);
    CHECK(spectral_norm(fp - fd) <= 1e-4);
    CHECK(spectral_norm(fp - spectral_calculus(f, a, 1)) <= 1e-6);
  }

  TEST_CASE("helffer-sjostrand reports a missed tolerance") {
    Rng rng(10);
    const CMat a = random_hermitian(rng, 4);
    HsOptions coarse;
    coarse.nodes_x = 4;
    coarse.nodes_y = 4;
    coarse.min_x_panels = 1;
    coarse.y_min = 0.5;
    CHECK_THROWS_AS(hs_checked(PolynomialBump(0.0, 2.0), a, 0, 1e-12, coarse), NumericalError);
    HsOptions bad;
    bad.nodes_x = 5;
    CHECK_THROWS_AS(hs_functional_calculus(PolynomialBump(0.0, 2.0), a, 0, bad), DomainError);
  }
}
