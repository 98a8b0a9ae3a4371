#include <benchmark/benchmark.h>

#include "fp/expr.hpp"
#include "fp/jet.hpp"

using namespace fp;

namespace {

std::vector<Jet> seeds_for(int n, int order) {
  std::vector<double> x(static_cast<std::size_t>(n), 0.3);
  std::vector<double> y(static_cast<std::size_t>(n), 1.1);
  return jet_lift(EvalPoint(x, y), order);
}

void BM_JetMultiply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int order = static_cast<int>(state.range(1));
  const auto seeds = seeds_for(n, order);
  Jet a = exp(0.3 * seeds[0]) * seeds[static_cast<std::size_t>(n)];
  Jet b = sin(seeds[1]) + seeds[static_cast<std::size_t>(n + 1)];
  for (auto _ : state) {
    benchmark::DoNotOptimize(a * b);
  }
}
BENCHMARK(BM_JetMultiply)->Args({2, 4})->Args({3, 4})->Args({2, 2});

void BM_JetExp(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto seeds = seeds_for(n, 4);
  const Jet u = 0.2 * seeds[0] + 0.4 * seeds[static_cast<std::size_t>(n)];
  for (auto _ : state) {
    benchmark::DoNotOptimize(exp(u));
  }
}
BENCHMARK(BM_JetExp)->Arg(2)->Arg(3);

void BM_JetDerivative(benchmark::State& state) {
  const auto seeds = seeds_for(2, 4);
  const Jet u = exp(seeds[0]) * sin(seeds[2]) + seeds[3] * seeds[3];
  for (auto _ : state) {
    benchmark::DoNotOptimize(u.derivative(2));
  }
}
BENCHMARK(BM_JetDerivative);

void BM_ExpressionEvaluate(benchmark::State& state) {
  const ExprPtr expr =
      parse_expression("cos(x1*y1/sqrt(y1^2 + y2^2))*exp(x1) + y2^2/(1 + x2^2)", 2);
  const EvalPoint p({0.3, -0.2}, {1.1, 0.8});
  for (auto _ : state) {
    benchmark::DoNotOptimize(evaluate(expr, p, 4));
  }
}
BENCHMARK(BM_ExpressionEvaluate);

}  // namespace

BENCHMARK_MAIN();
