#include "llab/random_systems.hpp"

#include <algorithm>

namespace llab {

CMat random_hermitian(Rng& rng, int n, double scale) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMat a(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = cplx(gauss(rng), gauss(rng));
  return scale * 0.5 * (a + a.adjoint());
}

CVec random_unit_vector(Rng& rng, Eigen::Index n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CVec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = cplx(gauss(rng), gauss(rng));
  return v / v.norm();
}

RandomSystem random_system(Rng& rng, int n_lo, int n_hi) {
  std::uniform_int_distribution<int> size(n_lo, n_hi);
  std::uniform_real_distribution<double> energy(0.0, 3.0), beta(0.5, 5.0);
  std::uniform_int_distribution<int> pick(0, 2);
  RandomSystem s;
  const int n = size(rng);
  std::vector<double> e(static_cast<std::size_t>(n), 0.0);
  for (int i = 1; i < n; ++i) e[static_cast<std::size_t>(i)] = energy(rng);
  std::sort(e.begin(), e.end());
  s.ps.energies = Eigen::Map<RVec>(e.data(), n);
  s.ps.G = random_hermitian(rng, n);
  s.ps.beta = beta(rng);
  const double ps[3] = {0.5, 1.0, 2.5};
  s.ff.p = ps[pick(rng)];
  return s;
}

}  // namespace llab
