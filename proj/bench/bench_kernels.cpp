// Parallel kernels against their serial references.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "vrlab/kernels.hpp"
#include "vrlab/operators.hpp"

namespace {

using namespace vrlab;

struct RhsFixture {
  CMatrix h;
  kernels::BandedOperator banded;
  CMatrix rho;
  CMatrix out;

  explicit RhsFixture(int s) {
    const ModelSpec spec = build_w_model(s, 1, 1.0, 1.5);
    h = spec.h0.matrix() - 0.7 * spec.h1.front().matrix();
    banded = kernels::BandedOperator::from_dense(h);
    rho = gaussian_w_state(s).matrix();
    out.resize(h.rows(), h.cols());
  }
};

void BM_rhs_banded_parallel(benchmark::State& state) {
  RhsFixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    kernels::von_neumann_rhs(f.banded, f.rho, f.out);
    benchmark::DoNotOptimize(f.out.data());
  }
}

void BM_rhs_dense_serial(benchmark::State& state) {
  RhsFixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    kernels::serial::von_neumann_rhs(f.h, f.rho, f.out);
    benchmark::DoNotOptimize(f.out.data());
  }
}

std::vector<double> angles(std::size_t n) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.14159, 3.14159);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

void BM_angle_sums_parallel(benchmark::State& state) {
  const auto theta = angles(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::angle_sums(theta));
}

void BM_angle_sums_serial(benchmark::State& state) {
  const auto theta = angles(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::serial::angle_sums(theta));
}

}  // namespace

BENCHMARK(BM_rhs_banded_parallel)->Arg(50)->Arg(150)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_rhs_dense_serial)->Arg(50)->Arg(150)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_angle_sums_parallel)->Arg(100000)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_angle_sums_serial)->Arg(100000)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
