#pragma once

#include <optional>
#include <vector>

#include "llab/liouvillian.hpp"
#include "llab/types.hpp"

namespace llab {

// ---- eigenvalue scans -------------------------------------------------------

struct ScanPoint {
  double lambda = 0.0;
  std::vector<double> eigenvalues;  // eigenvalues of L inside the window
  double max_overlap = 0.0;         // max_k |<psi_e^0, v_k>|^2
  double zero_value = 0.0;          // eigenvalue of smallest magnitude
  double zero_gap = 0.0;            // magnitude of the next one
  double zero_residual = 0.0;       // |L v_0| for that eigenvector
};

struct SpectralScan {
  double e = 0.0;
  double window_lo = 0.0, window_hi = 0.0;
  std::vector<ScanPoint> points;
};

// Unperturbed eigenvector phi_i (x) phi_j (x) vacuum with E_i - E_j = e.
CVec unperturbed_eigenvector(const CoupledModel& model, double e);

SpectralScan eigen_scan(const ModelSpec& spec, const std::vector<double>& lambda_grid, double e, double window_lo,
                        double window_hi, Exec exec = Exec::parallel);

// ---- resonance widths -------------------------------------------------------

// S(x) = Im <psi, (L - x - i eta)^(-1) psi> on the given grid.
std::vector<double> spectral_function(const CoupledModel& model, const CVec& psi, const std::vector<double>& x,
                                      double eta, Exec exec = Exec::parallel);

struct LorentzianFit {
  double center = 0.0;
  double hwhm = 0.0;
  double residual = 0.0;  // rms relative deviation on the fitted points
  std::size_t points = 0;
};

// Least squares of 1/S = a x^2 + b x + c on the half-maximum region.
LorentzianFit fit_lorentzian(const std::vector<double>& x, const std::vector<double>& s);

struct ResonanceOptions {
  double eta = 0.01;
  int x_points = 81;
  std::optional<double> x_half_width;  // default from the golden-rule estimate
  Exec exec = Exec::parallel;
};

struct ResonancePoint {
  double lambda = 0.0;
  LorentzianFit fit;
  double width = 0.0;  // hwhm - eta
  std::vector<double> x, s;
};

struct ResonanceReport {
  double e = 0.0;
  double eta = 0.0;
  double gamma_e = 0.0;
  double mean_spacing = 0.0;  // of L_0 near e
  std::vector<ResonancePoint> points;
  double slope = 0.0;       // of log(width) against log(lambda)
  double prefactor = 0.0;   // mean of width / lambda^2
  double prefactor_ratio = 0.0;  // prefactor / (pi gamma_e)
};

ResonanceReport resonance_width(const ModelSpec& spec, double e, const std::vector<double>& lambda_grid,
                                const ResonanceOptions& opts = {});

// ---- KMS vector -------------------------------------------------------------

struct KmsVector {
  double lambda = 0.0;
  double beta = 0.0;
  CVec vector;
  double distance = 0.0;  // |Omega_{beta,lambda} - Omega_{beta,0}|
  double residual = 0.0;  // |L Omega_{beta,lambda}|
  double gap = 0.0;       // smallest nonzero eigenvalue magnitude
  int kernel_dim = 0;     // number of eigenvalues with |mu| <= 1e-9 |L|
};

// Normalized projection of Omega_{beta,0} onto ker L, so the phase is fixed by
// <Omega_{beta,0}, .> > 0. With require_simple a kernel of dimension > 1 is a
// NumericalError; otherwise the projection selects the zero mode.
KmsVector kms_vector(const CoupledModel& model, bool require_simple = false);
std::vector<KmsVector> kms_scan(const ModelSpec& spec, const std::vector<double>& lambda_grid,
                                Exec exec = Exec::parallel);

// ---- dynamics ---------------------------------------------------------------

struct SpectralData {
  RVec values;
  CMat vectors;
};

SpectralData diagonalize(const CoupledModel& model);
// Same selection as kms_vector, reusing an existing eigendecomposition.
KmsVector kms_vector(const CoupledModel& model, const SpectralData& spectral, bool require_simple = false);

struct TimeSeries {
  std::vector<double> times;
  std::vector<double> values;        // <psi_t, A psi_t>
  std::vector<double> running_mean;  // (1/t) int_0^t
  std::vector<double> norms;         // |psi_t|
  double target = 0.0;               // <Omega_{beta,lambda}, A Omega_{beta,lambda}>
  double cesaro_limit = 0.0;         // sum over distinct eigenvalues
  double heisenberg_time = 0.0;      // 2 pi / minimal level spacing
  double horizon = 0.0;              // min(T, heisenberg_time / 2)
  double mean_at_horizon = 0.0;
  double observable_norm = 0.0;
  double cesaro_residual = 0.0;      // |mean_at_horizon - cesaro_limit|
  double target_residual = 0.0;      // |mean_at_horizon - target|
};

struct EvolveOptions {
  double T = 100.0;
  double dt = 0.1;
  std::size_t max_samples = 4001;
  Exec exec = Exec::parallel;
};

TimeSeries evolve(const CoupledModel& model, const SpectralData& spectral, const CVec& psi, const CMat& observable,
                  const EvolveOptions& opts = {});

// Running mean (1/T) int_0^T <psi_t, A psi_t> dt in closed form.
double ergodic_mean(const SpectralData& spectral, const CVec& psi, const CMat& observable, double T);

// Projector onto particle level k in the left factor, lifted to the model space.
CMat level_observable(const CoupledModel& model, int level);

}  // namespace llab
