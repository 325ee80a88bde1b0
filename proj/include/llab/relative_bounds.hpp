#pragma once

#include <cstdint>
#include <vector>

#include "llab/liouvillian.hpp"

namespace llab {

// Quadrature value of 4 pi int (1 + 1/w) |g(w)|^2 w^2 dw on the positive grid nodes.
double relative_bound_constant(const FormFactor& ff, const ModeGrid& grid);

struct RelativeBoundReport {
  int states = 0;
  // |a(f) psi| <= |f| |N^(1/2) psi|
  int number_violations = 0;
  double number_worst = 0.0;  // max lhs / rhs
  // |a(f) psi| <= | |u|^(-1/2) f | |Lambda^(1/2) psi|, Lambda = dGamma(|u|)
  int field_energy_violations = 0;
  double field_energy_worst = 0.0;
  // |<psi, lambda I psi>| <= c |N^(1/2) psi|^2 + (16 lambda^2 / c) |G|^2 K_g
  int interaction_violations = 0;
  double interaction_worst = 0.0;
  // sup |I psi|^2 / (|G| (|N^(1/2) psi|^2 + |psi|^2)) over the sampled states
  double interaction_constant = 0.0;
  double kg = 0.0;
  bool ok = false;
};

// Random states mix uniform draws with draws damped geometrically in the
// photon number, so low sectors are probed as well.
RelativeBoundReport check_relative_bounds(const CoupledModel& model, int states, std::uint64_t seed,
                                          const std::vector<double>& c_values = {0.1, 1.0});

}  // namespace llab
