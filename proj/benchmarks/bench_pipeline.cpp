#include <benchmark/benchmark.h>

#include "walip/evalbench.hpp"
#include "walip/pipeline.hpp"

namespace {

void BM_InitialMapping(benchmark::State& state) {
  walip::SyntheticSpec spec;
  spec.n_words = static_cast<std::size_t>(state.range(0));
  spec.n_images = 500;
  spec.noise_sigma = 0.01;
  const auto inst = walip::gen_synthetic(spec);
  for (auto _ : state) benchmark::DoNotOptimize(walip::initial_mapping(inst.fp_src, inst.fp_tgt, 0.5, 10));
}
BENCHMARK(BM_InitialMapping)->Arg(500)->Arg(2000)->Unit(benchmark::kMillisecond);

void BM_WalipAlign(benchmark::State& state) {
  walip::SyntheticSpec spec;
  spec.n_words = static_cast<std::size_t>(state.range(0));
  spec.dim = 64;
  spec.noise_sigma = 0.02;
  spec.corrupt_frac = 0.2;
  const auto inst = walip::gen_synthetic(spec);
  const walip::PipelineConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(walip::walip_align(inst.src, inst.tgt, inst.init, cfg));
}
BENCHMARK(BM_WalipAlign)->Arg(1000)->Arg(3000)->Unit(benchmark::kMillisecond);

}  // namespace
