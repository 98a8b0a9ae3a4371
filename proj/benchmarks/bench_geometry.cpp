#include <benchmark/benchmark.h>

#include "fp/frame_document.hpp"
#include "fp/identities.hpp"
#include "fp/torsion_curvature.hpp"

using namespace fp;

namespace {

Frame twisted_frame() {
  FrameDocument doc = parse_frame_document(
      "n = 2\n"
      "frame = [[\"cos(x1*y1/sqrt(y1^2 + y2^2))\", "
      "\"-sin(x1*y1/sqrt(y1^2 + y2^2))*exp(-x1)\"],\n"
      "         [\"sin(x1*y1/sqrt(y1^2 + y2^2))\", "
      "\"cos(x1*y1/sqrt(y1^2 + y2^2))*exp(-x1)\"]]\n");
  return Frame(doc);
}

const EvalPoint kPoint({0.3, -0.2}, {1.1, 0.8});

void BM_MetricPipeline(benchmark::State& state) {
  const Frame frame = twisted_frame();
  for (auto _ : state) {
    GeometryContext ctx(frame, kPoint, 4);
    benchmark::DoNotOptimize(ctx.metric().at(0, 0).value());
  }
}
BENCHMARK(BM_MetricPipeline);

void BM_BarthelConnection(benchmark::State& state) {
  const Frame frame = twisted_frame();
  for (auto _ : state) {
    GeometryContext ctx(frame, kPoint, 4);
    benchmark::DoNotOptimize(ctx.barthel().at(0, 0).value());
  }
}
BENCHMARK(BM_BarthelConnection);

void BM_ConnectionTriples(benchmark::State& state) {
  const Frame frame = twisted_frame();
  for (auto _ : state) {
    GeometryContext ctx(frame, kPoint, 4);
    for (ConnectionKind kind : kAllConnectionKinds) {
      benchmark::DoNotOptimize(ctx.connection(kind).F.at(0, 0, 0).value());
    }
  }
}
BENCHMARK(BM_ConnectionTriples);

void BM_CurvatureSet(benchmark::State& state) {
  const Frame frame = twisted_frame();
  GeometryContext ctx(frame, kPoint, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(curvatures(ctx, ConnectionKind::CartanMiron));
  }
}
BENCHMARK(BM_CurvatureSet);

void BM_IdentityCanonicalFlat(benchmark::State& state) {
  const Frame frame = twisted_frame();
  for (auto _ : state) {
    FrameSampler sampler(frame, {kPoint});
    benchmark::DoNotOptimize(identity_check(sampler, "canonical-flat"));
  }
}
BENCHMARK(BM_IdentityCanonicalFlat);

}  // namespace

BENCHMARK_MAIN();
