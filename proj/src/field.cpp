#include "llab/field.hpp"

#include <omp.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "llab/errors.hpp"

namespace llab {

double FormFactor::value(double omega) const {
  if (omega <= 0.0) return 0.0;
  return amplitude * std::pow(omega, p) * std::exp(-omega);
}

double FormFactor::derivative(double omega) const {
  if (omega <= 0.0) return 0.0;
  return amplitude * (p * std::pow(omega, p - 1.0) - std::pow(omega, p)) * std::exp(-omega);
}

void validate(const FormFactor& ff) {
  if (ff.profile != "power_exp") throw DomainError("form factor: unknown profile '" + ff.profile + "'");
  if (!(ff.p > 0.0) || !std::isfinite(ff.p))
    throw DomainError("form factor: infrared exponent p must be > 0");
  if (!(ff.q > 2.5) || !std::isfinite(ff.q))
    throw DomainError("form factor: ultraviolet exponent q must be > 5/2");
  if (!(ff.amplitude > 0.0) || !std::isfinite(ff.amplitude))
    throw DomainError("form factor: amplitude must be > 0");
}

double planck_density(double beta, double omega) {
  if (!(omega > 0.0)) throw DomainError("planck_density: omega must be > 0");
  if (!(beta > 0.0)) throw DomainError("planck_density: beta must be > 0");
  return 1.0 / std::expm1(beta * omega);
}

ModeGrid ModeGrid::uniform(double u_max, int n_u) {
  if (!(u_max > 0.0) || !std::isfinite(u_max)) throw DomainError("grid: u_max must be > 0");
  if (n_u < 2 || n_u % 2 != 0) throw DomainError("grid: n_u must be an even positive integer");
  ModeGrid g;
  g.u_max = u_max;
  g.n_u = n_u;
  g.nodes.resize(n_u);
  g.weights.resize(n_u);
  const double h = 2.0 * u_max / n_u;
  for (int j = 0; j < n_u / 2; ++j) {
    const double u = -u_max + (j + 0.5) * h;
    g.nodes(j) = u;
    g.nodes(n_u - 1 - j) = -u;
  }
  g.weights.setConstant(h);
  return g;
}

namespace {

// sqrt(1 + mu(w)) for w > 0, stable for large beta*w.
double emission_factor(double beta, double w) { return std::sqrt(-1.0 / std::expm1(-beta * w)); }

double absorption_factor(double beta, double w) { return std::sqrt(planck_density(beta, w)); }

}  // namespace

cplx glued_g1(const FormFactor& ff, double beta, double u) {
  if (u > 0.0) return emission_factor(beta, u) * u * ff.value(u);
  if (u < 0.0) {
    const double w = -u;
    return absorption_factor(beta, w) * u * std::conj(cplx(ff.value(w)));
  }
  return 0.0;
}

cplx glued_g2(const FormFactor& ff, double beta, double u) { return -glued_g1(ff, beta, -u); }

cplx glued_dg1(const FormFactor& ff, double beta, double u) {
  if (u > 0.0) {
    const double mu = planck_density(beta, u);
    const double s = emission_factor(beta, u);
    const double ds = -0.5 * beta * mu * s;
    return ds * u * ff.value(u) + s * (ff.value(u) + u * ff.derivative(u));
  }
  if (u < 0.0) {
    const double w = -u;
    const double mu = planck_density(beta, w);
    const double t = std::sqrt(mu);
    const double dt = 0.5 * beta * t * (1.0 + mu);
    return dt * u * ff.value(w) + t * (ff.value(w) - u * ff.derivative(w));
  }
  return 0.0;
}

cplx glued_dg2(const FormFactor& ff, double beta, double u) { return glued_dg1(ff, beta, -u); }

GluedSamples glue(const FormFactor& ff, double beta, const ModeGrid& grid) {
  validate(ff);
  if (!(beta > 0.0)) throw DomainError("glue: beta must be > 0");
  const int n = grid.n_u;
  GluedSamples s;
  s.beta = beta;
  s.g1.resize(n);
  s.g2.resize(n);
  s.dg1.resize(n);
  s.dg2.resize(n);
  s.ug1.resize(n);
  for (int j = 0; j < n; ++j) {
    const double u = grid.nodes(j);
    s.g1(j) = glued_g1(ff, beta, u);
    s.dg1(j) = glued_dg1(ff, beta, u);
    s.ug1(j) = u * s.dg1(j);
  }
  for (int j = 0; j < n; ++j) {
    s.g2(j) = -s.g1(n - 1 - j);
    s.dg2(j) = s.dg1(n - 1 - j);
  }
  return s;
}

cplx quadrature_inner(const CVec& f, const CVec& h, const ModeGrid& grid) {
  if (f.size() != grid.n_u || h.size() != grid.n_u) throw DomainError("quadrature_inner: size mismatch");
  cplx acc = 0.0;
  for (int j = 0; j < grid.n_u; ++j) acc += grid.weights(j) * std::conj(f(j)) * h(j);
  return acc;
}

double glued_norm_sq(const CVec& f, const ModeGrid& grid) {
  return kAngularMeasure * quadrature_inner(f, f, grid).real();
}

std::size_t fock_dimension(int n_u, int n_max) {
  // C(n_u + n_max, n_max), saturating.
  double acc = 1.0;
  for (int k = 1; k <= n_max; ++k) acc = acc * static_cast<double>(n_u + k) / k;
  if (acc >= static_cast<double>(std::numeric_limits<std::size_t>::max()) / 2)
    return std::numeric_limits<std::size_t>::max();
  return static_cast<std::size_t>(std::llround(acc));
}

FockModel::FockModel(ModeGrid grid, int n_max, std::size_t dim_cap) : grid_(std::move(grid)), n_max_(n_max) {
  if (n_max < 1) throw DomainError("fock: photon cap n_max must be >= 1");
  if (n_max > 65535) throw DomainError("fock: photon cap too large");
  const int m = grid_.n_u;
  dim_ = fock_dimension(m, n_max);
  if (dim_ > dim_cap) {
    std::ostringstream os;
    os << "fock: dimension " << dim_ << " (n_u=" << m << ", n_max=" << n_max << ") exceeds cap " << dim_cap;
    throw DimensionCapError(os.str());
  }
  tail_count_.assign(m + 1, std::vector<std::size_t>(n_max + 1, 1));
  for (int len = 1; len <= m; ++len)
    for (int s = 0; s <= n_max; ++s) {
      // Tuples of length len with sum <= s: first entry t, rest sum <= s - t.
      std::size_t acc = 0;
      for (int t = 0; t <= s; ++t) acc += tail_count_[len - 1][s - t];
      tail_count_[len][s] = acc;
    }

  occ_.assign(dim_ * static_cast<std::size_t>(m), 0);
  totals_.assign(dim_, 0);
  std::vector<std::uint16_t> cur(m, 0);
  std::size_t next = 0;
  // Depth-first enumeration in lexicographic order.
  auto emit = [&](auto&& self, int pos, int budget) -> void {
    if (pos == m) {
      std::copy(cur.begin(), cur.end(), occ_.begin() + next * m);
      totals_[next] = n_max_ - budget;
      ++next;
      return;
    }
    for (int v = 0; v <= budget; ++v) {
      cur[pos] = static_cast<std::uint16_t>(v);
      self(self, pos + 1, budget - v);
    }
    cur[pos] = 0;
  };
  emit(emit, 0, n_max_);
  if (next != dim_) throw NumericalError("fock: basis enumeration size mismatch");
}

std::size_t FockModel::rank(const std::uint16_t* occ) const {
  const int m = grid_.n_u;
  std::size_t r = 0;
  int budget = n_max_;
  for (int k = 0; k < m; ++k) {
    for (int t = 0; t < occ[k]; ++t) r += tail_count_[m - k - 1][budget - t];
    budget -= occ[k];
  }
  return r;
}

namespace {

// Two-pass sparse assembly: count entries per column, then fill at fixed
// offsets. Output order is independent of the thread schedule.
template <class CountFn, class FillFn>
SpMat assemble_columns(std::size_t dim, CountFn count, FillFn fill, Exec exec) {
  std::vector<std::size_t> offset(dim + 1, 0);
  const long long n = static_cast<long long>(dim);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (long long c = 0; c < n; ++c) offset[c + 1] = count(static_cast<std::size_t>(c));
  for (std::size_t c = 0; c < dim; ++c) offset[c + 1] += offset[c];
  std::vector<Triplet> trip(offset[dim]);
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (long long c = 0; c < n; ++c) fill(static_cast<std::size_t>(c), trip.data() + offset[c]);
  SpMat out(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

}  // namespace

SpMat annihilation(const CVec& f, const FockModel& fock, Exec exec) {
  const int m = fock.modes();
  if (f.size() != m) throw DomainError("annihilation: sample count differs from n_u");
  const RVec& w = fock.grid().weights;
  auto count = [&](std::size_t c) {
    const std::uint16_t* occ = fock.occupation(c);
    std::size_t k = 0;
    for (int j = 0; j < m; ++j) k += occ[j] > 0 ? 1 : 0;
    return k;
  };
  auto fill = [&](std::size_t c, Triplet* out) {
    std::vector<std::uint16_t> tmp(fock.occupation(c), fock.occupation(c) + m);
    for (int j = 0; j < m; ++j) {
      if (tmp[j] == 0) continue;
      const double nj = tmp[j];
      --tmp[j];
      const std::size_t row = fock.rank(tmp.data());
      ++tmp[j];
      *out++ = Triplet(static_cast<int>(row), static_cast<int>(c),
                       std::sqrt(w(j)) * std::conj(f(j)) * std::sqrt(nj));
    }
  };
  return assemble_columns(fock.dim(), count, fill, exec);
}

SpMat creation(const CVec& f, const FockModel& fock, Exec exec) {
  return SpMat(annihilation(f, fock, exec).adjoint());
}

SpMat field_operator(const CVec& f, const FockModel& fock, Exec exec) {
  const SpMat a = annihilation(f, fock, exec);
  return SpMat(a + SpMat(a.adjoint()));
}

RVec second_quantize(const RVec& multiplier, const FockModel& fock) {
  const int m = fock.modes();
  if (multiplier.size() != m) throw DomainError("second_quantize: multiplier length differs from n_u");
  RVec d(fock.dim());
  for (std::size_t s = 0; s < fock.dim(); ++s) {
    const std::uint16_t* occ = fock.occupation(s);
    double acc = 0.0;
    for (int j = 0; j < m; ++j) acc += occ[j] * multiplier(j);
    d(static_cast<Eigen::Index>(s)) = acc;
  }
  return d;
}

SpMat second_quantize(const CMat& one_particle, const FockModel& fock, bool require_anti) {
  const int m = fock.modes();
  if (one_particle.rows() != m || one_particle.cols() != m)
    throw DomainError("second_quantize: one-particle matrix must be n_u x n_u");
  if (require_anti) {
    const double scale = std::max(1.0, one_particle.cwiseAbs().maxCoeff());
    if ((one_particle + one_particle.adjoint()).cwiseAbs().maxCoeff() > 1e-13 * scale)
      throw DomainError("second_quantize: matrix is not anti-Hermitian");
  }
  // Nonzeros of M by column k: a*_j a_k moves one photon from k to j.
  std::vector<std::vector<std::pair<int, cplx>>> col(m);
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j)
      if (one_particle(j, k) != cplx(0.0)) col[k].emplace_back(j, one_particle(j, k));

  auto count = [&](std::size_t c) {
    const std::uint16_t* occ = fock.occupation(c);
    std::size_t k = 0;
    for (int q = 0; q < m; ++q)
      if (occ[q] > 0) k += col[q].size();
    return k;
  };
  auto fill = [&](std::size_t c, Triplet* out) {
    std::vector<std::uint16_t> tmp(fock.occupation(c), fock.occupation(c) + m);
    for (int k = 0; k < m; ++k) {
      if (tmp[k] == 0) continue;
      const double nk = tmp[k];
      for (const auto& [j, v] : col[k]) {
        double amp;
        if (j == k) {
          amp = nk;
        } else {
          amp = std::sqrt(nk) * std::sqrt(tmp[j] + 1.0);
        }
        --tmp[k];
        ++tmp[j];
        const std::size_t row = fock.rank(tmp.data());
        --tmp[j];
        ++tmp[k];
        *out++ = Triplet(static_cast<int>(row), static_cast<int>(c), v * amp);
      }
    }
  };
  return assemble_columns(fock.dim(), count, fill, Exec::parallel);
}

RMat derivative_matrix(const ModeGrid& grid) {
  const int n = grid.n_u;
  const double h = grid.spacing();
  RMat d = RMat::Zero(n, n);
  for (int j = 1; j + 1 < n; ++j) {
    d(j, j + 1) = 1.0 / (2.0 * h);
    d(j, j - 1) = -1.0 / (2.0 * h);
  }
  return 0.5 * (d - d.transpose());
}

}  // namespace llab
