#include <benchmark/benchmark.h>

#include "locnoise/attacks.hpp"
#include "locnoise/harness.hpp"
#include "locnoise/metrics.hpp"
#include "locnoise/network.hpp"

namespace {

using namespace locnoise;

Shape bench_shape(const benchmark::State& state) {
  const auto side = static_cast<std::size_t>(state.range(0));
  return Shape{side, side, 3};
}

void BM_Forward(benchmark::State& state) {
  const Shape shape = bench_shape(state);
  const Network net = seeded_random_network(shape, 9, 1);
  const Tensor x = synthetic_images(shape, 1, 1).front().pixels;
  for (auto _ : state) benchmark::DoNotOptimize(forward(net, x));
}
BENCHMARK(BM_Forward)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

void BM_InputGradient(benchmark::State& state) {
  const Shape shape = bench_shape(state);
  const Network net = seeded_random_network(shape, 9, 1);
  const Tensor x = synthetic_images(shape, 1, 1).front().pixels;
  for (auto _ : state) benchmark::DoNotOptimize(input_gradient(net, x, 0));
}
BENCHMARK(BM_InputGradient)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

// One masked PGD update, forward and backward included.
void BM_PgdStep(benchmark::State& state) {
  const Shape shape{32, 32, 3};
  const Network net = seeded_random_network(shape, 9, 1);
  const Tensor x = synthetic_images(shape, 1, 1).front().pixels;
  const Mask mask = build_mask(32, 32, 0.25);
  AttackConfig cfg = AttackConfig::defaults_for(Method::kPgd);
  const Tensor noise(shape);
  const std::size_t y = forward(net, x).label;
  for (auto _ : state) benchmark::DoNotOptimize(pgd_step(net, x, mask, noise, y, cfg));
}
BENCHMARK(BM_PgdStep)->Unit(benchmark::kMicrosecond);

void BM_Ssim(benchmark::State& state) {
  const Shape shape = bench_shape(state);
  const auto images = synthetic_images(shape, 2, 2);
  for (auto _ : state) benchmark::DoNotOptimize(ssim(images[0].pixels, images[1].pixels));
}
BENCHMARK(BM_Ssim)->Arg(32)->Arg(299)->Unit(benchmark::kMicrosecond);

void BM_Campaign(benchmark::State& state) {
  ExperimentSpec spec;
  spec.model = RandomModel{1, Shape{32, 32, 3}, 9};
  spec.images = SyntheticImages{1, 10};
  spec.workers = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_experiment(spec));
}
BENCHMARK(BM_Campaign)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
