// Benchmark: OpenMP production kernels against the serial reference path.
// Build with -DCMAKE_BUILD_TYPE=Release; run ./nlc_bench.

#include <benchmark/benchmark.h>

#include <random>

#include "nlc/operators.hpp"
#include "nlc/parallel.hpp"
#include "nlc/projection.hpp"
#include "nlc/ref.hpp"

namespace {

using namespace nlc;

double uniform_pm(std::mt19937_64& rng) {
  return 2.0 * double(rng() >> 11) * 0x1.0p-53 - 1.0;
}

GridSpec bench_grid(int n) {
  const int dims[2] = {n, n};
  const double len[2] = {2.0 * M_PI, 2.0 * M_PI};
  return make_grid(dims, len, BcMode::Periodic);
}

DirectorField bench_director(const GridSpec& g) {
  DirectorField d(g, {0, 0, 1});
  std::mt19937_64 rng(12345);
  for (int c = 0; c < 3; ++c)
    for (int j = 0; j < g.dims[1]; ++j)
      for (int i = 0; i < g.dims[0]; ++i) d.at(c, i, j) = uniform_pm(rng);
  apply_director_bc(d);
  return d;
}

MacVectorField bench_velocity(const GridSpec& g) {
  MacVectorField u(g);
  std::mt19937_64 rng(54321);
  for (int a = 0; a < g.ndim; ++a) {
    const auto& n = u.comp(a).extents();
    for (int j = 0; j < n[1]; ++j)
      for (int i = 0; i < n[0]; ++i) u.comp(a).at(i, j) = uniform_pm(rng);
  }
  apply_velocity_bc(u);
  return u;
}

void BM_laplacian_omp(benchmark::State& state) {
  const GridSpec g = bench_grid(int(state.range(0)));
  const DirectorField d = bench_director(g);
  for (auto _ : state) {
    auto out = ops::laplacian(d);
    benchmark::DoNotOptimize(out);
  }
}

void BM_laplacian_serial_ref(benchmark::State& state) {
  const GridSpec g = bench_grid(int(state.range(0)));
  const DirectorField d = bench_director(g);
  for (auto _ : state) {
    auto out = ref::laplacian(d);
    benchmark::DoNotOptimize(out);
  }
}

void BM_elastic_force_omp(benchmark::State& state) {
  const GridSpec g = bench_grid(int(state.range(0)));
  const DirectorField d = bench_director(g);
  for (auto _ : state) {
    auto out = ops::elastic_force_direct(d);
    benchmark::DoNotOptimize(out);
  }
}

void BM_elastic_force_serial_ref(benchmark::State& state) {
  const GridSpec g = bench_grid(int(state.range(0)));
  const DirectorField d = bench_director(g);
  for (auto _ : state) {
    auto out = ref::elastic_force_direct(d);
    benchmark::DoNotOptimize(out);
  }
}

void BM_advect_mac_omp(benchmark::State& state) {
  const GridSpec g = bench_grid(int(state.range(0)));
  const MacVectorField u = bench_velocity(g);
  for (auto _ : state) {
    auto out = ops::advect(u, u, AdvectionForm::Skew);
    benchmark::DoNotOptimize(out);
  }
}

void BM_advect_mac_serial_ref(benchmark::State& state) {
  const GridSpec g = bench_grid(int(state.range(0)));
  const MacVectorField u = bench_velocity(g);
  for (auto _ : state) {
    auto out = ref::advect(u, u, AdvectionForm::Skew);
    benchmark::DoNotOptimize(out);
  }
}

void BM_poisson_omp(benchmark::State& state) {
  const GridSpec g = bench_grid(int(state.range(0)));
  ScalarField rhs(g);
  std::mt19937_64 rng(777);
  for (int j = 0; j < g.dims[1]; ++j)
    for (int i = 0; i < g.dims[0]; ++i) rhs.at(i, j) = uniform_pm(rng);
  const double mean = field_mean(rhs);
  for (int j = 0; j < g.dims[1]; ++j)
    for (int i = 0; i < g.dims[0]; ++i) rhs.at(i, j) -= mean;
  apply_scalar_bc(rhs);
  PoissonSolveConfig cfg;
  cfg.tol = 1e-8;
  for (auto _ : state) {
    auto out = solve_poisson(rhs, cfg);
    benchmark::DoNotOptimize(out);
  }
}

BENCHMARK(BM_laplacian_omp)->Arg(128)->Arg(256);
BENCHMARK(BM_laplacian_serial_ref)->Arg(128)->Arg(256);
BENCHMARK(BM_elastic_force_omp)->Arg(128)->Arg(256);
BENCHMARK(BM_elastic_force_serial_ref)->Arg(128)->Arg(256);
BENCHMARK(BM_advect_mac_omp)->Arg(128)->Arg(256);
BENCHMARK(BM_advect_mac_serial_ref)->Arg(128)->Arg(256);
BENCHMARK(BM_poisson_omp)->Arg(64)->Arg(128);

}  // namespace

BENCHMARK_MAIN();
