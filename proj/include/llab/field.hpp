#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "llab/types.hpp"

namespace llab {

// Radial form factor g(w) = amplitude * w^p * exp(-w).
struct FormFactor {
  double p = 0.5;          // infrared exponent
  double q = 3.0;          // ultraviolet exponent (recorded; the exponential tail dominates)
  double amplitude = 1.0;
  std::string profile = "power_exp";

  double value(double omega) const;
  double derivative(double omega) const;
};

// Throws DomainError on an unknown profile, p <= 0, q <= 5/2 or amplitude <= 0.
void validate(const FormFactor& ff);

// 1 / (exp(beta * omega) - 1), via expm1.
double planck_density(double beta, double omega);

// Uniform midpoint grid on [-u_max, u_max]; n_u even so that u = 0 is never a node.
struct ModeGrid {
  double u_max = 0.0;
  int n_u = 0;
  RVec nodes;
  RVec weights;

  static ModeGrid uniform(double u_max, int n_u);
  double spacing() const { return 2.0 * u_max / n_u; }
  int size() const { return n_u; }
};

// Glued one-particle functions evaluated pointwise.
cplx glued_g1(const FormFactor& ff, double beta, double u);
cplx glued_g2(const FormFactor& ff, double beta, double u);
cplx glued_dg1(const FormFactor& ff, double beta, double u);
cplx glued_dg2(const FormFactor& ff, double beta, double u);

struct GluedSamples {
  CVec g1, g2, dg1, dg2;
  CVec ug1;  // u * d/du g1
  double beta = 1.0;
};

GluedSamples glue(const FormFactor& ff, double beta, const ModeGrid& grid);

// Discrete inner products on the glued space. The isotropic angular integral
// contributes the factor 4 pi.
cplx quadrature_inner(const CVec& f, const CVec& h, const ModeGrid& grid);
double glued_norm_sq(const CVec& f, const ModeGrid& grid);

// Occupation-number basis {n : sum n_j <= n_max}, lexicographic, vacuum first.
class FockModel {
 public:
  FockModel(ModeGrid grid, int n_max, std::size_t dim_cap);

  const ModeGrid& grid() const { return grid_; }
  int n_max() const { return n_max_; }
  int modes() const { return grid_.n_u; }
  std::size_t dim() const { return dim_; }

  const std::uint16_t* occupation(std::size_t index) const {
    return occ_.data() + index * static_cast<std::size_t>(grid_.n_u);
  }
  int total(std::size_t index) const { return totals_[index]; }
  // Lexicographic rank of an occupation tuple (must satisfy the cap).
  std::size_t rank(const std::uint16_t* occ) const;

 private:
  ModeGrid grid_;
  int n_max_;
  std::size_t dim_;
  std::vector<std::uint16_t> occ_;
  std::vector<int> totals_;
  // tail_count_[m][s]: tuples of length m with sum <= s.
  std::vector<std::vector<std::size_t>> tail_count_;
};

// Number of occupation tuples; saturates at SIZE_MAX instead of overflowing.
std::size_t fock_dimension(int n_u, int n_max);

// a(f) = sum_j sqrt(w_j) conj(f_j) a_j.
SpMat annihilation(const CVec& f, const FockModel& fock, Exec exec = Exec::parallel);
SpMat creation(const CVec& f, const FockModel& fock, Exec exec = Exec::parallel);
// a*(f) + a(f)
SpMat field_operator(const CVec& f, const FockModel& fock, Exec exec = Exec::parallel);

// dGamma of a one-particle multiplier (diagonal in the occupation basis).
RVec second_quantize(const RVec& multiplier, const FockModel& fock);
// dGamma of a one-particle matrix M: sum_jk M_jk a*_j a_k.
// With require_anti, M must be anti-Hermitian.
SpMat second_quantize(const CMat& one_particle, const FockModel& fock, bool require_anti = false);

// Central differences with zero boundary rows, antisymmetrized.
RMat derivative_matrix(const ModeGrid& grid);

}  // namespace llab
