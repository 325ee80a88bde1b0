#include "llab/relative_bounds.hpp"

#include <cmath>

#include "llab/linalg.hpp"
#include "llab/random_systems.hpp"

namespace llab {

double relative_bound_constant(const FormFactor& ff, const ModeGrid& grid) {
  double acc = 0.0;
  for (int j = 0; j < grid.n_u; ++j) {
    const double u = grid.nodes(j);
    if (u <= 0.0) continue;
    const double g = ff.value(u);
    acc += grid.weights(j) * u * u * (1.0 + 1.0 / u) * g * g;
  }
  return kAngularMeasure * acc;
}

namespace {

CVec damped_state(Rng& rng, const RVec& number, double rho) {
  CVec v = random_unit_vector(rng, number.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) *= std::pow(rho, number(i));
  return v / v.norm();
}

double weighted_norm_sq(const CVec& v, const RVec& w) { return (v.cwiseAbs2().array() * w.array()).sum(); }

}  // namespace

RelativeBoundReport check_relative_bounds(const CoupledModel& model, int states, std::uint64_t seed,
                                          const std::vector<double>& c_values) {
  RelativeBoundReport r;
  r.states = states;
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const FockModel& fock = *model.fock;
  const ModeGrid& grid = fock.grid();

  const RVec nf = second_quantize(RVec(RVec::Ones(grid.n_u)), fock);
  const RVec lam = second_quantize(RVec(grid.nodes.cwiseAbs()), fock);
  const CVec f1 = coupling_samples(model.glued.g1), f2 = coupling_samples(model.glued.g2);
  std::vector<std::pair<SpMat, std::pair<double, double>>> ops;
  for (const CVec* f : {&f1, &f2}) {
    double norm = 0.0, weighted = 0.0;
    for (int j = 0; j < grid.n_u; ++j) {
      const double a2 = grid.weights(j) * std::norm((*f)(j));
      norm += a2;
      weighted += a2 / std::abs(grid.nodes(j));
    }
    ops.push_back({annihilation(*f, fock), {std::sqrt(norm), std::sqrt(weighted)}});
  }

  r.kg = relative_bound_constant(model.ff, grid);
  const double gnorm = spectral_norm(model.ps.G);
  const double slack = 1e-12;
  for (int s = 0; s < states; ++s) {
    const double rho = s % 2 == 0 ? 1.0 : unit(rng);
    const CVec psi_f = damped_state(rng, nf, rho);
    const double n_half = std::sqrt(weighted_norm_sq(psi_f, nf));
    const double l_half = std::sqrt(weighted_norm_sq(psi_f, lam));
    for (const auto& [a, norms] : ops) {
      const double lhs = (a * psi_f).norm();
      const double rhs1 = norms.first * n_half, rhs2 = norms.second * l_half;
      if (lhs > rhs1 * (1.0 + slack) + slack) ++r.number_violations;
      if (lhs > rhs2 * (1.0 + slack) + slack) ++r.field_energy_violations;
      if (rhs1 > 0.0) r.number_worst = std::max(r.number_worst, lhs / rhs1);
      if (rhs2 > 0.0) r.field_energy_worst = std::max(r.field_energy_worst, lhs / rhs2);
    }

    const CVec psi = damped_state(rng, model.number, rho);
    const double nq = weighted_norm_sq(psi, model.number);
    const CVec ipsi = model.I * psi;
    const double form = std::abs(model.lambda * psi.dot(ipsi).real());
    for (double c : c_values) {
      const double rhs = c * nq + 16.0 * model.lambda * model.lambda / c * gnorm * gnorm * r.kg;
      if (form > rhs * (1.0 + slack) + slack) ++r.interaction_violations;
      if (rhs > 0.0) r.interaction_worst = std::max(r.interaction_worst, form / rhs);
    }
    if (gnorm > 0.0) r.interaction_constant = std::max(r.interaction_constant, ipsi.squaredNorm() / (gnorm * (nq + 1.0)));
  }
  r.ok = r.number_violations == 0 && r.field_energy_violations == 0 && r.interaction_violations == 0;
  return r;
}

}  // namespace llab
