#pragma once

#include "llab/types.hpp"

namespace llab {

// Real function with compact support [lo, hi] and enough derivatives for an
// almost-analytic extension.
class SmoothFunction {
 public:
  virtual ~SmoothFunction() = default;
  // k-th derivative, k >= 0.
  virtual double derivative(int k, double x) const = 0;
  virtual double lo() const = 0;
  virtual double hi() const = 0;
  double operator()(double x) const { return derivative(0, x); }
};

// (1 - s^2)^4 with s = (x - center) / radius; C^3 on the real line.
class PolynomialBump : public SmoothFunction {
 public:
  PolynomialBump(double center, double radius);
  double derivative(int k, double x) const override;
  double lo() const override { return center_ - radius_; }
  double hi() const override { return center_ + radius_; }

 private:
  double center_, radius_;
  double coeff_[9];  // polynomial in s, ascending powers
};

class ZeroFunction : public SmoothFunction {
 public:
  double derivative(int, double) const override { return 0.0; }
  double lo() const override { return -1.0; }
  double hi() const override { return 1.0; }
};

struct HsOptions {
  int order = 2;          // order of the almost-analytic extension
  double y_max = 1.0;     // height of the rectangle; cutoff is 1 below y_max / 2
  double y_min = 1e-2;    // first geometric panel edge
  int nodes_x = 8;        // Gauss-Legendre nodes per panel
  int nodes_y = 6;
  int min_x_panels = 4;
  Exec exec = Exec::parallel;
};

// f^(p)(A) = p! * (-1/2pi) * int (d_x + i d_y) f~(z) (z - A)^(-p-1) dx dy.
// Only the upper half-plane is integrated; the lower half contributes the adjoint.
CMat hs_functional_calculus(const SmoothFunction& f, const CMat& a, int p = 0, const HsOptions& opts = {});

// f^(p)(A) by eigendecomposition.
CMat spectral_calculus(const SmoothFunction& f, const CMat& a, int p = 0);

struct HsCheck {
  CMat hs;
  CMat spectral;
  double discrepancy = 0.0;  // spectral norm of the difference
};

// Runs both paths; NumericalError if the discrepancy exceeds tol.
HsCheck hs_checked(const SmoothFunction& f, const CMat& a, int p = 0, double tol = 1e-6, const HsOptions& opts = {});

}  // namespace llab
