// Serial reference versus OpenMP kernels.
#include <benchmark/benchmark.h>

#include "llab/functional_calculus.hpp"
#include "llab/liouvillian.hpp"
#include "llab/random_systems.hpp"
#include "llab/spectra.hpp"

namespace {

llab::ModelSpec bench_spec(int n_u, int n_max) {
  llab::ModelSpec s;
  s.ps.energies = llab::RVec::LinSpaced(2, 0.0, 1.0);
  s.ps.G = llab::CMat::Zero(2, 2);
  s.ps.G(0, 1) = s.ps.G(1, 0) = 1.0;
  s.ps.beta = 1.0;
  s.n_u = n_u;
  s.n_max = n_max;
  return s;
}

llab::Exec policy(const benchmark::State& st) { return st.range(0) ? llab::Exec::parallel : llab::Exec::serial; }

void BM_InteractionAssembly(benchmark::State& st) {
  const llab::ModelSpec s = bench_spec(24, 3);
  const llab::CoupledModel m = llab::assemble(s, 0.0);
  for (auto _ : st) benchmark::DoNotOptimize(llab::interaction(m.ps, m.glued, *m.fock, policy(st)));
}

void BM_SpectralFunction(benchmark::State& st) {
  llab::ModelSpec s = bench_spec(800, 1);
  s.u_max = 8.0;
  const llab::CoupledModel m = llab::assemble(s, 0.05);
  const llab::CVec psi = llab::unperturbed_eigenvector(m, 1.0);
  std::vector<double> x;
  for (int i = 0; i < 16; ++i) x.push_back(0.9 + 0.2 * i / 15.0);
  for (auto _ : st) benchmark::DoNotOptimize(llab::spectral_function(m, psi, x, 0.05, policy(st)));
}

void BM_HelfferSjostrand(benchmark::State& st) {
  llab::Rng rng(7);
  const llab::CMat a = llab::random_hermitian(rng, 6);
  llab::HsOptions o;
  o.exec = policy(st);
  for (auto _ : st) benchmark::DoNotOptimize(llab::hs_functional_calculus(llab::PolynomialBump(0.0, 2.0), a, 0, o));
}

void BM_TimeSeries(benchmark::State& st) {
  llab::ModelSpec s = bench_spec(60, 1);
  const llab::CoupledModel m = llab::assemble(s, 0.1);
  const llab::SpectralData sd = llab::diagonalize(m);
  const llab::CVec psi = m.particle_vacuum_state(0, 0);
  const llab::CMat a = llab::level_observable(m, 0);
  llab::EvolveOptions o;
  o.T = 100.0;
  o.dt = 0.1;
  o.exec = policy(st);
  for (auto _ : st) benchmark::DoNotOptimize(llab::evolve(m, sd, psi, a, o));
}

}  // namespace

BENCHMARK(BM_InteractionAssembly)->Arg(0)->Arg(1)->ArgName("parallel");
BENCHMARK(BM_SpectralFunction)->Arg(0)->Arg(1)->ArgName("parallel");
BENCHMARK(BM_HelfferSjostrand)->Arg(0)->Arg(1)->ArgName("parallel");
BENCHMARK(BM_TimeSeries)->Arg(0)->Arg(1)->ArgName("parallel");

BENCHMARK_MAIN();
