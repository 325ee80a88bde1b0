#pragma once

#include <memory>

#include "llab/field.hpp"
#include "llab/particle.hpp"
#include "llab/types.hpp"

namespace llab {

inline constexpr std::size_t kDefaultDimensionCap = 20000;

// Kronecker product of sparse matrices (left factor is the slow index).
SpMat kron(const SpMat& a, const SpMat& b);
SpMat diagonal_matrix(const RVec& d);

// Field samples as they enter the interaction: sqrt(4 pi) g, so that the
// discrete mode carries the isotropic angular weight.
CVec coupling_samples(const CVec& g);

// G_l (x) phi(f1) - G_r (x) phi(f2) with phi(f) = a*(f) + a(f), f_i = sqrt(4 pi) g_i.
SpMat interaction_from(const ParticleSystem& ps, const CVec& g1, const CVec& g2, const FockModel& fock,
                       Exec exec = Exec::parallel);
SpMat interaction(const ParticleSystem& ps, const GluedSamples& glued, const FockModel& fock,
                  Exec exec = Exec::parallel);
SpMat i_tilde(const ParticleSystem& ps, const GluedSamples& glued, const FockModel& fock,
              Exec exec = Exec::parallel);

struct ModelSpec {
  ParticleSystem ps;
  FormFactor ff;
  double u_max = 3.0;
  int n_u = 12;
  int n_max = 2;
  std::size_t dim_cap = kDefaultDimensionCap;
};

// Operators on (doubled particle space) (x) (truncated Fock space).
struct CoupledModel {
  ParticleSystem ps;
  FormFactor ff;
  std::shared_ptr<const FockModel> fock;
  GluedSamples glued;
  LiouvilleParticleSpectrum lp;
  double lambda = 0.0;

  std::size_t dim = 0;
  RVec L0;       // diagonal of L_p (x) 1 + 1 (x) L_f
  RVec number;   // diagonal of the photon number operator
  SpMat I;
  SpMat I_tilde;
  SpMat L;

  std::size_t fock_dim() const { return fock->dim(); }
  std::size_t index(int particle, std::size_t fock_index) const {
    return static_cast<std::size_t>(particle) * fock->dim() + fock_index;
  }
  int particle_of(std::size_t idx) const { return static_cast<int>(idx / fock->dim()); }
  std::size_t fock_of(std::size_t idx) const { return idx % fock->dim(); }

  // Omega_{beta,0} = particle Gibbs vector (x) vacuum.
  CVec omega_beta0() const;
  // phi_i (x) phi_j (x) vacuum.
  CVec particle_vacuum_state(int i, int j) const;
  CMat dense_L() const { return CMat(L); }
};

CoupledModel assemble(const ModelSpec& spec, double lambda);
// Same model at a different coupling; shares the Fock basis.
CoupledModel with_lambda(const CoupledModel& base, double lambda);

// Spectrum of L_0 by direct enumeration of e + sum_j n_j u_j, ascending.
RVec enumerate_l0_spectrum(const ParticleSystem& ps, const FockModel& fock);

}  // namespace llab
