#pragma once

#include <optional>
#include <vector>

#include "llab/types.hpp"

namespace llab {

// N-level system with diagonal Hamiltonian, coupling matrix G and inverse
// temperature. Energies are given in the eigenbasis of H_p.
struct ParticleSystem {
  RVec energies;
  CMat G;
  double beta = 1.0;

  int size() const { return static_cast<int>(energies.size()); }
};

// Throws DomainError unless N >= 2, energies ascending, G Hermitian, beta > 0.
void validate(const ParticleSystem& ps);

// Degeneracy tolerance used for grouping eigenvalues of L_p.
double energy_tolerance(const ParticleSystem& ps);

// Index of phi_i (x) phi_j in the doubled space.
inline int pair_index(int i, int j, int n) { return i * n + j; }

// Spectral data of L_p = H_p (x) 1 - 1 (x) H_p.
struct LiouvilleParticleSpectrum {
  RVec diagonal;                        // E_i - E_j at pair_index(i, j)
  std::vector<double> values;           // distinct eigenvalues, ascending
  std::vector<std::vector<int>> members;  // basis indices for each value
  double tol = 0.0;

  int multiplicity(std::size_t k) const { return static_cast<int>(members[k].size()); }
  // Index into `values` of the group containing e, if any.
  std::optional<std::size_t> find(double e) const;
  // Diagonal 0/1 mask of P(L_p = values[k]).
  RVec mask(std::size_t k) const;
  CMat projector(std::size_t k) const;
};

LiouvilleParticleSpectrum particle_liouvillian(const ParticleSystem& ps);

struct GibbsVector {
  CVec omega;           // unit vector on the doubled space
  double Z = 0.0;       // partition function of the shifted energies
  double shift = 0.0;   // E_0, subtracted before exponentiation
};

GibbsVector gibbs_vector(const ParticleSystem& ps);

struct DoubledCoupling {
  CMat left;   // G (x) 1
  CMat right;  // 1 (x) conj(G)
};

DoubledCoupling doubled_operators(const ParticleSystem& ps);

// Antiunitary flip phi_i (x) phi_j -> phi_j (x) phi_i with complex conjugation.
CVec conjugation(const CVec& v, int n);

}  // namespace llab
