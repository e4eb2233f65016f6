#include <benchmark/benchmark.h>

#include "tiletuner/kernels.hpp"

using namespace tiletuner;

namespace {

// Tile factors shift these timings noticeably even at desk scale; the
// benchmarks double as a quick sanity probe of that effect.

void BM_lu_factor(benchmark::State& state) {
  const int n = 256;
  const Matrix a = gen_spd(n, 1);
  const int by = static_cast<int>(state.range(0));
  const int bx = static_cast<int>(state.range(1));
  for (auto _ : state) {
    Matrix work = a;
    lu_factor_inplace(work, by, bx);
    benchmark::DoNotOptimize(work.data.data());
  }
}
BENCHMARK(BM_lu_factor)
    ->Args({1, 1})
    ->Args({16, 16})
    ->Args({64, 32})
    ->Args({256, 256})
    ->Unit(benchmark::kMillisecond);

void BM_cholesky_factor(benchmark::State& state) {
  const int n = 256;
  const Matrix a = gen_spd(n, 2);
  const int by = static_cast<int>(state.range(0));
  const int bx = static_cast<int>(state.range(1));
  for (auto _ : state) {
    Matrix work = a;
    cholesky_factor_inplace(work, by, bx);
    benchmark::DoNotOptimize(work.data.data());
  }
}
BENCHMARK(BM_cholesky_factor)
    ->Args({1, 1})
    ->Args({16, 16})
    ->Args({64, 32})
    ->Args({256, 256})
    ->Unit(benchmark::kMillisecond);

void BM_mm3_small(benchmark::State& state) {
  const Mm3Inputs in = gen_3mm_inputs(find_size(Kernel::mm3, "small"), 1);
  // factors 1, 2, 10 divide every small-size output extent (80, 100, 120)
  const int f = static_cast<int>(state.range(0));
  const Configuration config{{f, f, f, f, f, f}};
  for (auto _ : state) {
    Matrix g = mm3_tiled(in.a, in.b, in.c, in.d, config);
    benchmark::DoNotOptimize(g.data.data());
  }
}
BENCHMARK(BM_mm3_small)->Arg(1)->Arg(2)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_lu_reference(benchmark::State& state) {
  const Matrix a = gen_spd(256, 1);
  for (auto _ : state) {
    LuFactors f = lu_reference(a);
    benchmark::DoNotOptimize(f.u.data.data());
  }
}
BENCHMARK(BM_lu_reference)->Unit(benchmark::kMillisecond);

}  // namespace
