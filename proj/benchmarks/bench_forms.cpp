#include <benchmark/benchmark.h>

#include <random>

#include "formbound/homotopy.hpp"
#include "formbound/kform.hpp"
#include "formbound/pullback.hpp"
#include "formbound/random_forms.hpp"

using namespace formbound;

namespace {

KForm sample_form(int n, int k, int degree) {
  std::mt19937_64 rng(1);
  RandomFormOptions opt;
  opt.max_degree = degree;
  return random_form(n, k, opt, rng);
}

}  // namespace

static void BM_ExteriorDerivative(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const KForm w = sample_form(n, 2, 4);
  for (auto _ : state) benchmark::DoNotOptimize(exterior_derivative(w));
}
BENCHMARK(BM_ExteriorDerivative)->DenseRange(3, 6);

static void BM_Wedge(benchmark::State& state) {
  const KForm a = sample_form(5, 2, 3), b = sample_form(5, 2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(wedge(a, b));
}
BENCHMARK(BM_Wedge);

static void BM_HomotopyS(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const KForm w = sample_form(n, 2, 4);
  for (auto _ : state) benchmark::DoNotOptimize(homotopy_S(w));
}
BENCHMARK(BM_HomotopyS)->DenseRange(3, 6);

static void BM_PoincareResidual(benchmark::State& state) {
  const KForm w = sample_form(4, 2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(poincare_residual(w));
}
BENCHMARK(BM_PoincareResidual);

static void BM_PullbackExact(benchmark::State& state) {
  std::mt19937_64 rng(2);
  const int n = static_cast<int>(state.range(0));
  const LipschitzMap phi = random_affine_map(n, 2.0, rng);
  const KForm w = sample_form(n, 2, 3);
  for (auto _ : state) benchmark::DoNotOptimize(pullback(phi, w));
}
BENCHMARK(BM_PullbackExact)->DenseRange(2, 4);
