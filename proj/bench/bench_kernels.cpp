// Microbenchmarks comparing the serial reference kernels against the
// OpenMP-parallel ones on the shapes the experiment suites actually use.

#include <benchmark/benchmark.h>

#include "spw/frames.hpp"
#include "spw/kernels.hpp"
#include "spw/models.hpp"
#include "spw/partition.hpp"
#include "spw/rng.hpp"
#include "spw/semigroup.hpp"

using namespace spw;

namespace {

CMat random_matrix(int rows, int cols, uint64_t seed) {
  RandomStream rng(seed);
  CMat m(rows, cols);
  for (auto& v : m.a) v = rng.next_complex_normal();
  return m;
}

void bm_matvec(benchmark::State& state, Exec ex) {
  const int n = static_cast<int>(state.range(0));
  const CMat a = random_matrix(n, n, 1);
  RandomStream rng(2);
  const CVec x = rng.next_complex_vector(n);
  CVec y;
  for (auto _ : state) {
    matvec(a, x, y, ex);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n) * n);
}

void bm_mixed_modulus(benchmark::State& state, Exec ex) {
  const SpectralModel m = sphere_model(3);
  const GroupCache cache = build_group_cache(m);
  RandomStream rng(3);
  const SpectralVector f(rng.next_complex_vector(m.dim));
  for (auto _ : state) {
    const double v = mixed_modulus(m, cache, 2, 0.5, f, ModulusGrid{17}, ex);
    benchmark::DoNotOptimize(v);
  }
}

void bm_frame_analysis(benchmark::State& state, Exec ex) {
  const SpectralModel m = circle_model(8);
  const PartitionOfUnity pou = build_partition(required_j_max(m.max_sqrt_eigenvalue()));
  const FrameSystem sys = build_frame_system(m, pou, 0.1, 2.0, 1.0);
  RandomStream rng(4);
  const SpectralVector f(rng.next_complex_vector(m.dim));
  for (auto _ : state) {
    const std::vector<CVec> c = analysis(sys, f, ex);
    benchmark::DoNotOptimize(c.data());
  }
}

void bm_steklov(benchmark::State& state, Exec ex) {
  const SpectralModel m = circle_model(16);
  const GroupCache cache = build_group_cache(m);
  RandomStream rng(5);
  const SpectralVector f(rng.next_complex_vector(m.dim));
  for (auto _ : state) {
    const SpectralVector g = hardy_steklov(m, cache, 2, 0.3, f, 8, ex);
    benchmark::DoNotOptimize(g.c.data());
  }
}

}  // namespace

BENCHMARK_CAPTURE(bm_matvec, serial, Exec::serial)->Arg(256)->Arg(1024);
BENCHMARK_CAPTURE(bm_matvec, parallel, Exec::parallel)->Arg(256)->Arg(1024);
BENCHMARK_CAPTURE(bm_mixed_modulus, serial, Exec::serial);
BENCHMARK_CAPTURE(bm_mixed_modulus, parallel, Exec::parallel);
BENCHMARK_CAPTURE(bm_frame_analysis, serial, Exec::serial);
BENCHMARK_CAPTURE(bm_frame_analysis, parallel, Exec::parallel);
BENCHMARK_CAPTURE(bm_steklov, serial, Exec::serial);
BENCHMARK_CAPTURE(bm_steklov, parallel, Exec::parallel);

BENCHMARK_MAIN();
