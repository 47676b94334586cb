#include <benchmark/benchmark.h>

#include "debias/estimators.hpp"
#include "debias/models.hpp"

using namespace debias;

namespace {

template <class M>
void step(benchmark::State& state, const M& model) {
  RandomSource rng(1);
  auto x = model.initial_state();
  for (auto _ : state) {
    model.advance(x, model.sample_innovation(rng));
    benchmark::DoNotOptimize(x);
  }
}

void BM_GarchStep(benchmark::State& state) { step(state, GarchModel{GarchParams{}}); }
void BM_QueueStep(benchmark::State& state) { step(state, gig1_pareto_queue()); }
void BM_Ar1Step(benchmark::State& state) { step(state, Ar1Model(0.5)); }

void BM_GaussianStep(benchmark::State& state) {
  RandomSource rng(2);
  const GaussianModel model(GaussianChainParams::from_covariance(
      random_correlation_matrix(state.range(0), rng),
      [](const Eigen::VectorXd& x) { return x[0]; }));
  step(state, model);
}

void BM_Ulr(benchmark::State& state) {
  const GarchModel model{GarchParams{}};
  const auto levels = LevelDistribution::oblivious(ThetaFn::exponential(0.5));
  const auto k = static_cast<std::uint64_t>(state.range(0));
  const EstimatorConfig cfg{k, k / 10, k / 10, q_experimental(levels), levels, 3};
  std::uint64_t rep = 0;
  std::uint64_t calls = 0;
  for (auto _ : state) {
    const auto run = ulr(model, cfg, rep++);
    calls += run.g_calls;
    benchmark::DoNotOptimize(run.value);
  }
  state.counters["g_calls/s"] = benchmark::Counter(static_cast<double>(calls),
                                                   benchmark::Counter::kIsRate);
}

}  // namespace

BENCHMARK(BM_GarchStep);
BENCHMARK(BM_QueueStep);
BENCHMARK(BM_Ar1Step);
BENCHMARK(BM_GaussianStep)->Arg(5)->Arg(50);
BENCHMARK(BM_Ulr)->Arg(200)->Arg(3200);

BENCHMARK_MAIN();
