#pragma once

#include <vector>

#include "llab/types.hpp"

namespace llab {

// Schur complement E_z = B11 - B12 (B22 - z)^(-1) B21 for the coordinate split
// (p_idx, complement). Throws DomainError if z is within 1e-10 (relative) of
// the spectrum of B22.
CMat feshbach_map(const CMat& b, const std::vector<Eigen::Index>& p_idx, cplx z);
// Same with Ran Q1 spanned by the orthonormal columns of p_basis.
CMat feshbach_map(const CMat& b, const CMat& p_basis, cplx z);

struct IsospectralityReport {
  std::vector<double> eigen_outside;  // eigenvalues of B away from sigma(B22)
  std::vector<double> roots;          // zeros of det(E_z - z), with multiplicity
  std::vector<double> poles;          // sigma(B22)
  double scale = 1.0;
  double max_root_error = 0.0;        // max |root - eigenvalue| after matching
  double max_min_singular = 0.0;      // max over eigen_outside of s_min(E_z - z)
  bool counts_equal = false;
  bool ok = false;
};

// Hermitian B only. Roots are located by bisection on the number of
// eigenvalues of E_z above z, which is monotone between consecutive poles.
IsospectralityReport check_isospectrality(const CMat& b, const std::vector<Eigen::Index>& p_idx,
                                          double tol = 1e-8);

// Smooth partition of unity on [0, inf): chi1 = 0 on [1, inf), chi1^2 + chi2^2 = 1.
double ims_chi1(double x);
double ims_chi2(double x);

struct ImsDecomposition {
  SpMat local1;  // chi1 B chi1
  SpMat local2;  // chi2 B chi2
  SpMat double_comm1;  // [chi1, [chi1, B]]
  SpMat double_comm2;
  double residual = 0.0;          // Frobenius norm of B - sum_i (chi_i B chi_i + [chi_i,[chi_i,B]]/2)
  double b_norm = 0.0;            // operator norm of B (Hermitian part)
  double double_comm_norm = 0.0;  // operator norm of sum_i [chi_i,[chi_i,B]]
};

// chi_i = chi_i(N / sigma) with N given by its diagonal.
ImsDecomposition ims_decompose(const SpMat& b, const RVec& number, double sigma);

}  // namespace llab
