#include "svmreg/baselines.hpp"
#include "svmreg/inference.hpp"
#include "svmreg/model.hpp"
#include "svmreg/optimizer.hpp"
#include "svmreg/simulate.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace svmreg;

Dataset sample(Eigen::Index n, Eigen::Index d) {
  Rng rng = make_stream({2024, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(d)});
  return gen_model_data(n, d, Theta(1.0, Eigen::VectorXd::Ones(d)), rng);
}

void BM_LogLikelihoodAndGradient(benchmark::State& state) {
  const Dataset data = sample(state.range(0), state.range(1));
  const Theta theta(0.5, Eigen::VectorXd::Constant(data.dim(), 0.5));
  Eigen::VectorXd grad;
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_likelihood_and_gradient(data, theta, grad));
  }
  state.SetItemsProcessed(state.iterations() * data.size());
}
BENCHMARK(BM_LogLikelihoodAndGradient)->Args({1000, 5})->Args({10000, 5})->Args({10000, 50});

void BM_FitMle(benchmark::State& state) {
  const Dataset data = sample(state.range(0), state.range(1));
  OptOptions opts;
  for (auto _ : state) benchmark::DoNotOptimize(fit_mle(data, opts));
}
BENCHMARK(BM_FitMle)->Args({500, 5})->Args({5000, 5})->Unit(benchmark::kMillisecond);

void BM_Infer(benchmark::State& state) {
  const Dataset data = sample(state.range(0), 5);
  const Theta theta(1.0, Eigen::VectorXd::Ones(5));
  for (auto _ : state) benchmark::DoNotOptimize(infer(data, theta));
}
BENCHMARK(BM_Infer)->Arg(1000)->Arg(10000);

void BM_FitLogistic(benchmark::State& state) {
  const Dataset data = sample(state.range(0), 5);
  for (auto _ : state) benchmark::DoNotOptimize(fit_logistic(data));
}
BENCHMARK(BM_FitLogistic)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
