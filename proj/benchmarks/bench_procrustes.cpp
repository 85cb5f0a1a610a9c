#include <benchmark/benchmark.h>

#include "walip/evalbench.hpp"
#include "walip/procrustes.hpp"

namespace {

walip::SyntheticInstance instance(std::size_t dim) {
  walip::SyntheticSpec spec;
  spec.n_words = 5000;
  spec.dim = dim;
  spec.n_images = 20;
  spec.init_frac = 1.0;
  spec.corrupt_frac = 0.3;
  spec.noise_sigma = 0.01;
  return walip::gen_synthetic(spec);
}

void rows(const walip::SyntheticInstance& inst, walip::Matrix& x, walip::Matrix& y) {
  x.resize(static_cast<Eigen::Index>(inst.init.size()), static_cast<Eigen::Index>(inst.spec.dim));
  y.resize(x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    const auto& p = inst.init.pairs()[static_cast<std::size_t>(r)];
    x.row(r) = inst.src.matrix().row(static_cast<Eigen::Index>(p.src));
    y.row(r) = inst.tgt.matrix().row(static_cast<Eigen::Index>(p.tgt));
  }
}

void BM_Procrustes(benchmark::State& state) {
  const auto inst = instance(static_cast<std::size_t>(state.range(0)));
  walip::Matrix x, y;
  rows(inst, x, y);
  for (auto _ : state) benchmark::DoNotOptimize(walip::procrustes(x, y));
}
BENCHMARK(BM_Procrustes)->Arg(64)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_RobustProcrustes(benchmark::State& state) {
  const auto inst = instance(static_cast<std::size_t>(state.range(0)));
  walip::Matrix x, y;
  rows(inst, x, y);
  for (auto _ : state) benchmark::DoNotOptimize(walip::robust_procrustes(x, y));
}
BENCHMARK(BM_RobustProcrustes)->Arg(64)->Arg(300)->Unit(benchmark::kMillisecond);

}  // namespace
