#pragma once

#include <optional>
#include <string>

#include "llab/liouvillian.hpp"
#include "llab/types.hpp"

namespace llab {

// Coupling-dependent regularization parameters: eps = lambda^(hat_eps/100),
// sigma = lambda^(-hat_sigma/100), theta = lambda^(hat_theta/100).
struct MourreParameters {
  double lambda = 0.0;
  int hat_eps = 44;
  int hat_sigma = 55;
  int hat_theta = 26;
  double eps = 0.0;
  double sigma = 0.0;
  double theta = 0.0;
  double gate_s = 0.5;

  static MourreParameters automatic(double lambda, int hat_eps = 44, int hat_sigma = 55, int hat_theta = 26,
                                    double gate_s = 0.5);
  // Smallness gate: theta, eps, eps/theta, theta lambda^2 / eps^3 all < gate_s.
  bool gate_ok() const;
  std::string gate_status() const;
};

struct ConjugatePair {
  double e = 0.0;
  double theta = 0.0;
  double eps = 0.0;
  SpMat A0;       // 1 (x) dGamma(-D)
  SpMat b;        // theta lambda (Qbar R^2 I Q - Q I R^2 Qbar)
  RVec q;         // diagonal of Q = P(L_p = e) (x) P_vacuum
  RVec r_eps;     // diagonal of ((L_0 - e)^2 + eps^2)^(-1/2)
  SpMat comm_LA;  // N + lambda I_tilde + [L, b]
  SpMat B;        // comm_LA - N / 10
};

SpMat conjugate_b(const CoupledModel& model, double e, double theta, double eps, RVec* q_out = nullptr,
                  RVec* r_out = nullptr);
ConjugatePair build_conjugate_pair(const CoupledModel& model, double e, double theta, double eps);

struct CommutatorComparison {
  SpMat defined;
  SpMat literal;            // L (A0 + b) - (A0 + b) L
  double operator_defect;   // spectral norm of the difference
  double smooth_defect;     // |difference * psi| for psi = normalized I Omega_{beta,0}
};

CommutatorComparison defined_commutator(const CoupledModel& model, const ConjugatePair& pair);

struct MourreOptions {
  std::optional<double> half_width;  // window half-width; default half the minimal L_p spacing
  bool smooth_variant = true;        // also compute the h(L) and E_Delta(L) variants
};

struct MourreReport {
  double e = 0.0;
  double lambda = 0.0;
  double theta = 0.0;
  double eps = 0.0;
  double sigma = 0.0;
  bool gate_ok = false;
  std::string gate_status;
  double gamma_e = 0.0;
  double bound = 0.0;  // (theta lambda^2 / eps) gamma_e
  double min_eig = 0.0;
  double margin = 0.0;
  std::size_t window_dim = 0;
  // Smooth-cutoff and interacting-projector variants of the commutator estimate.
  bool has_variants = false;
  double smooth_bound = 0.0;  // lambda^(91/50) gamma_e / 2
  double smooth_min_eig = 0.0;
  double smooth_margin = 0.0;
  double sharp_min_eig = 0.0;
  double sharp_margin = 0.0;
};

double minimal_lp_spacing(const LiouvilleParticleSpectrum& lp);

// Raised-cosine plateau: 1 on |x - c| <= plateau, 0 beyond support.
double raised_cosine_plateau(double x, double center, double plateau, double support);

MourreReport mourre_check(const CoupledModel& model, double e, const MourreParameters& params,
                          const MourreOptions& opts = {});

struct VirialDefect {
  double defined = 0.0;  // <psi, [L,A] psi> with the defined commutator
  double literal = 0.0;  // 2 Re <(L - e) psi, A psi>
  double gap = 0.0;      // defined - literal
  double eigen_residual = 0.0;
};

VirialDefect virial_defect(const CoupledModel& model, const ConjugatePair& pair, const CVec& psi, double e_guess);

}  // namespace llab
