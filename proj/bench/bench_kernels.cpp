// Serial reference vs OpenMP kernels. Run with --benchmark_filter to pick.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "linflow/equiv.hpp"
#include "linflow/kernels.hpp"
#include "linflow/linalg.hpp"
#include "linflow/special.hpp"

using namespace linflow;
using kernels::cplx;

namespace {

std::vector<cplx> random_vec(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<cplx> v(n);
  for (auto& x : v) x = {nd(rng), nd(rng)};
  return v;
}

void BM_MatmulSerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_vec(n * n, 1), b = random_vec(n * n, 2);
  std::vector<cplx> c(n * n);
  for (auto _ : state) {
    kernels::matmul_serial(a, b, c, n, n, n);
    benchmark::DoNotOptimize(c.data());
  }
  state.SetItemsProcessed(state.iterations() * n * n * n);
}

void BM_MatmulParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_vec(n * n, 1), b = random_vec(n * n, 2);
  std::vector<cplx> c(n * n);
  for (auto _ : state) {
    kernels::matmul_parallel(a, b, c, n, n, n);
    benchmark::DoNotOptimize(c.data());
  }
  state.SetItemsProcessed(state.iterations() * n * n * n);
}

void BM_NuSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(lower_bound_nu_serial(static_cast<std::size_t>(state.range(0))));
}

void BM_NuParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(lower_bound_nu_parallel(static_cast<std::size_t>(state.range(0))));
}

// A batch of smooth verdicts on constructed equivalent pairs.
struct Batch {
  std::vector<Mat> a, b;
  explicit Batch(std::size_t count) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> nd;
    for (std::size_t k = 0; k < count; ++k) {
      const std::size_t n = 2 + k % 5;
      Mat m(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = nd(rng);
      a.push_back(m);
      b.push_back(m * Scalar(0.5));
    }
  }
};

void run_batch(benchmark::State& state, void (*each)(std::size_t, const std::function<void(std::size_t)>&)) {
  const Batch batch(static_cast<std::size_t>(state.range(0)));
  std::vector<char> eq(batch.a.size());
  for (auto _ : state) {
    each(batch.a.size(), [&](std::size_t i) {
      eq[i] = smooth_verdict(batch.a[i], batch.b[i], Tolerance{}).equivalent;
    });
    benchmark::DoNotOptimize(eq.data());
  }
  state.SetItemsProcessed(state.iterations() * batch.a.size());
}

void BM_BatchSerial(benchmark::State& state) { run_batch(state, kernels::for_each_serial); }
void BM_BatchParallel(benchmark::State& state) { run_batch(state, kernels::for_each_parallel); }

}  // namespace

BENCHMARK(BM_MatmulSerial)->Arg(32)->Arg(128)->Arg(256);
BENCHMARK(BM_MatmulParallel)->Arg(32)->Arg(128)->Arg(256);
BENCHMARK(BM_NuSerial)->Arg(2)->Arg(6);
BENCHMARK(BM_NuParallel)->Arg(2)->Arg(6);
BENCHMARK(BM_BatchSerial)->Arg(64);
BENCHMARK(BM_BatchParallel)->Arg(64);

BENCHMARK_MAIN();
