// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "rmhd/kernels.hpp"

namespace k = rmhd::kernels;

namespace {

std::vector<double> reals(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

std::vector<k::cplx> modes(std::size_t n, unsigned seed) {
  const auto re = reals(n, seed), im = reals(n, seed + 1);
  std::vector<k::cplx> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = {re[i], im[i]};
  return v;
}

template <bool Omp>
void BM_multiply(benchmark::State& st) {
  const auto n = std::size_t(st.range(0));
  const auto a = reals(n, 1), b = reals(n, 2);
  std::vector<double> out(n);
  for (auto _ : st) {
    if constexpr (Omp) k::omp::multiply(a, b, out); else k::serial::multiply(a, b, out);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetBytesProcessed(int64_t(st.iterations()) * int64_t(3 * n * sizeof(double)));
}

template <bool Omp>
void BM_axpy(benchmark::State& st) {
  const auto n = std::size_t(st.range(0));
  const auto x = reals(n, 3);
  auto y = reals(n, 4);
  for (auto _ : st) {
    if constexpr (Omp) k::omp::axpy(1e-9, x, y); else k::serial::axpy(1e-9, x, y);
    benchmark::DoNotOptimize(y.data());
  }
}

template <bool Omp>
void BM_rotate_pairs(benchmark::State& st) {
  const auto n = std::size_t(st.range(0));
  auto phi = modes(n, 5), m = modes(n, 7);
  const auto om = reals(n, 9);
  for (auto _ : st) {
    if constexpr (Omp) k::omp::rotate_pairs(phi, m, om, 1.7, 0.01);
    else k::serial::rotate_pairs(phi, m, om, 1.7, 0.01);
    benchmark::DoNotOptimize(phi.data());
  }
}

template <bool Omp>
void BM_weighted_energy(benchmark::State& st) {
  const auto n = std::size_t(st.range(0));
  const auto c = modes(n, 11);
  const auto w = reals(n, 13);
  for (auto _ : st) {
    double e = Omp ? k::omp::weighted_energy(c, w) : k::serial::weighted_energy(c, w);
    benchmark::DoNotOptimize(e);
  }
}

}  // namespace

// 48*48*16 and 96*96*32 real grids
#define SIZES ->Arg(36864)->Arg(294912)
BENCHMARK(BM_multiply<false>) SIZES;
BENCHMARK(BM_multiply<true>) SIZES;
BENCHMARK(BM_axpy<false>) SIZES;
BENCHMARK(BM_axpy<true>) SIZES;
BENCHMARK(BM_rotate_pairs<false>) SIZES;
BENCHMARK(BM_rotate_pairs<true>) SIZES;
BENCHMARK(BM_weighted_energy<false>) SIZES;
BENCHMARK(BM_weighted_energy<true>) SIZES;

BENCHMARK_MAIN();
