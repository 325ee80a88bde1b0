#pragma once

#include <vector>

#include "llab/field.hpp"
#include "llab/particle.hpp"
#include "llab/types.hpp"

namespace llab {

// m(u) = G_l g1(u) - G_r g2(u) on the doubled particle space, u != 0.
// The angular factor 4 pi is not included here.
CMat coupling_m(const ParticleSystem& ps, const FormFactor& ff, double u);

struct FgrOperator {
  double e = 0.0;
  CMat gamma;                     // full level-shift operator, N^2 x N^2
  CMat gamma_p;                   // P(L_p = e) gamma P(L_p = e)
  std::vector<Eigen::Index> range;  // basis indices spanning Ran P(L_p = e)
};

// Spectral sum: sum over e_j != e of 4 pi m*(e - e_j) P_j m(e - e_j).
FgrOperator gamma_operator(const ParticleSystem& ps, const FormFactor& ff, double e);

// Minimum of gamma_p on its range; for e = 0 on the complement of the particle Gibbs vector.
double fgr_gamma_min(const ParticleSystem& ps, const FgrOperator& op);

struct GapLowerBound {
  double delta0 = 0.0;
  double part1_bound = 0.0;
  double g0 = 0.0;
  double Z = 0.0;  // shifted partition function, consistent with g0
  double gap = 0.0;
};

GapLowerBound gap_lower_bound(const ParticleSystem& ps, const FormFactor& ff, double e);

// Independent closed form of <phi, Gamma(0) phi> for phi = sum_i c_i phi_i (x) phi_i,
// written per level pair as a sum of nonnegative terms (no spectral sum over L_p).
double zero_mode_quadratic_form(const ParticleSystem& ps, const FormFactor& ff, const CVec& c);

struct FgrEntry {
  double e = 0.0;
  int multiplicity = 0;
  double gamma_min = 0.0;
  double bound = 0.0;  // part-1 bound for e != 0, spectral gap bound for e = 0
  bool positive = false;
  bool bound_ok = false;
  double delta0 = 0.0;
};

struct FgrReport {
  std::vector<FgrEntry> entries;
  double g0 = 0.0;
  double Z = 0.0;
  double gap = 0.0;
  double gibbs_residual = 0.0;  // |Gamma(0) Omega| / |Gamma(0)|
  bool all_positive = false;
};

inline constexpr double kFgrPositivityThreshold = 1e-10;

FgrReport fgr_condition(const ParticleSystem& ps, const FormFactor& ff, Exec exec = Exec::parallel);

struct LorentzianResult {
  CMat value;                 // (eps/pi) M(eps) compressed to Ran P(L_p = e)
  double error_estimate = 0.0;
  bool converged = true;
};

// Adaptive quadrature of 4 pi int m*(u) P(L_p != e) ((L_p - e + u)^2 + eps^2)^{-1} m(u) du.
LorentzianResult lorentzian_gamma(const ParticleSystem& ps, const FormFactor& ff, double e, double epsilon);

}  // namespace llab
