#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace llab {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<cplx>;
using Triplet = Eigen::Triplet<cplx>;

inline constexpr double kPi = 3.14159265358979323846;
// Solid angle of S^2; isotropic couplings pick it up once per |g|^2.
inline constexpr double kAngularMeasure = 4.0 * kPi;

// Execution policy for the data-parallel kernels. The serial path is the
// reference; the parallel path must reproduce it bit for bit.
enum class Exec { serial, parallel };

}  // namespace llab
