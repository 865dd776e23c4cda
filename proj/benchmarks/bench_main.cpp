#include <benchmark/benchmark.h>

#include "advinterp/adversarial.hpp"
#include "advinterp/bench.hpp"
#include "advinterp/estimators.hpp"
#include "advinterp/theory.hpp"

using namespace advinterp;

namespace {

Dataset case_data(std::size_t n) {
  SeededRng rng(1, n);
  return bench::generate_case(bench::SyntheticCase(1), n, rng);
}

void BM_LocalPolyPredict(benchmark::State& state) {
  const auto data = case_data(static_cast<std::size_t>(state.range(0)));
  LocalPolyConfig cfg;
  cfg.bandwidth = 0.6;
  const auto est = fit_local_polynomial(data, cfg);
  double x = -1.9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(est.predict(x));
    x = x > 1.9 ? -1.9 : x + 0.013;
  }
}
BENCHMARK(BM_LocalPolyPredict)->Arg(80)->Arg(300)->Arg(3000);

void BM_AdversarialLossPoint(benchmark::State& state) {
  const auto data = case_data(80);
  LocalPolyConfig cfg;
  cfg.bandwidth = 0.6;
  const auto est = fit_local_polynomial(data, cfg);
  AttackSpec spec;
  spec.r = 0.05;
  spec.resolution = static_cast<std::size_t>(state.range(0));
  const auto domain = bench::SyntheticCase::domain();
  SeededRng rng(2, 0);
  const double x = 0.4;
  for (auto _ : state) {
    benchmark::DoNotOptimize(adversarial_loss_point(est, PointView(&x, 1), 0.0, spec, domain, rng));
  }
}
BENCHMARK(BM_AdversarialLossPoint)->Arg(21)->Arg(101);

void BM_MonteCarloCost(benchmark::State& state) {
  theory::RateParams p;
  p.n = static_cast<double>(state.range(0));
  p.r = 1e-2 / p.n;
  const SeededRng rng(3, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(theory::mc_interpolation_cost(p, 4, 10'000, rng));
  }
}
BENCHMARK(BM_MonteCarloCost)->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_SoftMomentClosedForm(benchmark::State& state) {
  double delta = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(theory::soft_threshold_second_moment(delta, 1.0));
    delta = delta > 4.0 ? 0.0 : delta + 0.01;
  }
}
BENCHMARK(BM_SoftMomentClosedForm);

}  // namespace

BENCHMARK_MAIN();
