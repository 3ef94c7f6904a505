// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "sal/kernels.hpp"
#include "sal/rng.hpp"

namespace {

using sal::Map;
namespace k = sal::kernels;

Map random_map(int w, int h) {
  sal::Rng rng(7);
  Map m(w, h);
  for (double& v : m.values()) v = sal::uniform01(rng);
  return m;
}

const Map& input() {
  static const Map m = random_map(1280, 1024);
  return m;
}

template <k::Exec E>
void BM_GaussianBlur(benchmark::State& state) {
  const auto taps = k::gaussian_taps(static_cast<double>(state.range(0)));
  for (auto _ : state) {
    Map out = E == k::Exec::Serial ? k::serial::normalized_convolve(input(), taps, taps)
                                   : k::parallel::normalized_convolve(input(), taps, taps);
    benchmark::DoNotOptimize(out.values().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(input().size()));
}

template <k::Exec E>
void BM_ResizeBilinear(benchmark::State& state) {
  const sal::Dims target{2560, 2048};
  for (auto _ : state) {
    Map out = E == k::Exec::Serial ? k::serial::resize_bilinear(input(), target)
                                   : k::parallel::resize_bilinear(input(), target);
    benchmark::DoNotOptimize(out.values().data());
  }
}

template <k::Exec E>
void BM_DownscaleArea(benchmark::State& state) {
  const sal::Dims target{64, 51};
  for (auto _ : state) {
    Map out = E == k::Exec::Serial ? k::serial::downscale_area(input(), target)
                                   : k::parallel::downscale_area(input(), target);
    benchmark::DoNotOptimize(out.values().data());
  }
}

}  // namespace

BENCHMARK(BM_GaussianBlur<k::Exec::Serial>)->Arg(3)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GaussianBlur<k::Exec::Parallel>)->Arg(3)->Arg(40)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ResizeBilinear<k::Exec::Serial>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ResizeBilinear<k::Exec::Parallel>)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DownscaleArea<k::Exec::Serial>)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DownscaleArea<k::Exec::Parallel>)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
