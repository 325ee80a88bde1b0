#pragma once

#include <random>

#include "llab/field.hpp"
#include "llab/particle.hpp"
#include "llab/types.hpp"

namespace llab {

using Rng = std::mt19937_64;

CMat random_hermitian(Rng& rng, int n, double scale = 1.0);
CVec random_unit_vector(Rng& rng, Eigen::Index n);

struct RandomSystem {
  ParticleSystem ps;
  FormFactor ff;
};

// N in [n_lo, n_hi], E_0 = 0 and the rest uniform in [0, 3], complex Gaussian
// Hermitian G, beta uniform in [0.5, 5], p drawn from {0.5, 1, 2.5}.
RandomSystem random_system(Rng& rng, int n_lo = 2, int n_hi = 5);

}  // namespace llab
