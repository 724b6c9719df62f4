#include <benchmark/benchmark.h>

#include <random>

#include "formbound/form_io.hpp"
#include "formbound/il_operator.hpp"
#include "formbound/pharmonic.hpp"
#include "formbound/quadrature.hpp"
#include "formbound/random_forms.hpp"

using namespace formbound;

static void BM_LpNormExact(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const KForm w = random_form(3, 2, {}, rng);
  const Domain ball = Domain::ball(3, 1);
  for (auto _ : state) benchmark::DoNotOptimize(lp_norm(w, ball, 4, {}, NormPath::exact));
}
BENCHMARK(BM_LpNormExact);

static void BM_LpNormMonteCarlo(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const KForm w = random_form(3, 2, {}, rng);
  QuadratureConfig cfg;
  cfg.sample_count = static_cast<std::size_t>(state.range(0));
  const Domain ball = Domain::ball(3, 1);
  for (auto _ : state) benchmark::DoNotOptimize(lp_norm(w, ball, 3, cfg, NormPath::monte_carlo));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LpNormMonteCarlo)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

static void BM_TApply(benchmark::State& state) {
  const Domain disk = Domain::ball(2, 1);
  const Mollifier phi = Mollifier::for_domain(disk);
  const auto suite = smooth_form_suite(2);
  const double x[] = {0.21, -0.33};
  for (auto _ : state) benchmark::DoNotOptimize(T_apply(suite.front().form, phi, disk, x, {}));
}
BENCHMARK(BM_TApply)->Unit(benchmark::kMicrosecond);

static void BM_DiscretizeT(benchmark::State& state) {
  const Domain disk = Domain::ball(2, 1);
  const Mollifier phi = Mollifier::for_domain(disk);
  const int grid = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(discretize_T(2, 1, 2, 2, grid, phi, disk, {}));
}
BENCHMARK(BM_DiscretizeT)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_PHarmonic(benchmark::State& state) {
  const double p = static_cast<double>(state.range(0));
  const KForm omega = parse_form("n = 2\nk = 2\n1,2 : 1 + x1^2 + 3 * x2\n");
  const Domain disk = Domain::ball(2, 1);
  PHarmonicOptions opt;
  opt.force_iterative = true;
  for (auto _ : state) benchmark::DoNotOptimize(p_harmonic_representative(omega, disk, p, 3, {}, opt));
}
BENCHMARK(BM_PHarmonic)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
