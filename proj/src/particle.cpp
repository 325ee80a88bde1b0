#include "llab/particle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "llab/errors.hpp"

namespace llab {

void validate(const ParticleSystem& ps) {
  const int n = ps.size();
  if (n < 2) throw DomainError("particle: at least two levels are required");
  if (ps.G.rows() != n || ps.G.cols() != n) {
    std::ostringstream os;
    os << "particle: G must be " << n << "x" << n;
    throw DomainError(os.str());
  }
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(ps.energies(i))) throw DomainError("particle: non-finite energy");
    if (i > 0 && ps.energies(i) < ps.energies(i - 1))
      throw DomainError("particle: energies must be sorted ascending");
  }
  if (!ps.G.allFinite()) throw DomainError("particle: non-finite entry in G");
  const double herm = (ps.G - ps.G.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-12) throw DomainError("particle: G is not Hermitian");
  if (!(ps.beta > 0.0) || !std::isfinite(ps.beta))
    throw DomainError("particle: beta must be positive and finite");
}

double energy_tolerance(const ParticleSystem& ps) {
  const double spread = ps.energies.maxCoeff() - ps.energies.minCoeff();
  return 1e-9 * std::max(1.0, spread);
}

std::optional<std::size_t> LiouvilleParticleSpectrum::find(double e) const {
  for (std::size_t k = 0; k < values.size(); ++k)
    if (std::abs(values[k] - e) <= tol) return k;
  return std::nullopt;
}

RVec LiouvilleParticleSpectrum::mask(std::size_t k) const {
  RVec m = RVec::Zero(diagonal.size());
  for (int idx : members[k]) m(idx) = 1.0;
  return m;
}

CMat LiouvilleParticleSpectrum::projector(std::size_t k) const {
  return mask(k).cast<cplx>().asDiagonal();
}

LiouvilleParticleSpectrum particle_liouvillian(const ParticleSystem& ps) {
  validate(ps);
  const int n = ps.size();
  LiouvilleParticleSpectrum s;
  s.tol = energy_tolerance(ps);
  s.diagonal.resize(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s.diagonal(pair_index(i, j, n)) = ps.energies(i) - ps.energies(j);

  std::vector<int> order(n * n);
  for (int k = 0; k < n * n; ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return s.diagonal(a) < s.diagonal(b); });
  // Chain grouping: consecutive sorted values within tol share a group.
  for (int idx : order) {
    const double v = s.diagonal(idx);
    if (s.values.empty() || v - s.diagonal(s.members.back().back()) > s.tol) {
      s.values.push_back(v);
      s.members.push_back({idx});
    } else {
      s.members.back().push_back(idx);
    }
  }
  // Representative value: the mean of the group, then snap near-zero to zero.
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    double acc = 0.0;
    for (int idx : s.members[k]) acc += s.diagonal(idx);
    s.values[k] = acc / static_cast<double>(s.members[k].size());
    if (std::abs(s.values[k]) <= s.tol) s.values[k] = 0.0;
  }
  return s;
}

GibbsVector gibbs_vector(const ParticleSystem& ps) {
  validate(ps);
  const int n = ps.size();
  GibbsVector g;
  g.shift = ps.energies(0);
  RVec w(n);
  for (int i = 0; i < n; ++i) w(i) = std::exp(-ps.beta * (ps.energies(i) - g.shift));
  g.Z = w.sum();
  g.omega = CVec::Zero(n * n);
  for (int i = 0; i < n; ++i) g.omega(pair_index(i, i, n)) = std::sqrt(w(i) / g.Z);
  return g;
}

DoubledCoupling doubled_operators(const ParticleSystem& ps) {
  validate(ps);
  const int n = ps.size();
  const CMat id = CMat::Identity(n, n);
  DoubledCoupling d;
  d.left = Eigen::kroneckerProduct(ps.G, id);
  d.right = Eigen::kroneckerProduct(id, CMat(ps.G.conjugate()));
  return d;
}

CVec conjugation(const CVec& v, int n) {
  CVec out(v.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(pair_index(j, i, n)) = std::conj(v(pair_index(i, j, n)));
  return out;
}

}  // namespace llab
