#pragma once

#include <vector>

#include "llab/types.hpp"

namespace llab {

struct HermitianEigen {
  RVec values;   // ascending
  CMat vectors;  // columns
};

// Dense Hermitian eigendecomposition; NumericalError on failure.
HermitianEigen hermitian_eigen(const CMat& a);
double min_eigenvalue(const CMat& a);
double spectral_norm(const CMat& a);
double hermiticity_defect(const CMat& a);
double hermiticity_defect(const SpMat& a);

// Orthonormal basis (columns) of the orthogonal complement of v in C^n.
CMat orthogonal_complement(const CVec& v);

// Principal submatrix on the given basis indices.
CMat principal_submatrix(const SpMat& a, const std::vector<Eigen::Index>& idx);
CMat principal_submatrix(const CMat& a, const std::vector<Eigen::Index>& idx);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace llab

namespace llab {

// Largest |eigenvalue| of a sparse Hermitian matrix: dense for small
// dimensions, Lanczos with full reorthogonalization otherwise.
double hermitian_norm(const SpMat& a);

}  // namespace llab
