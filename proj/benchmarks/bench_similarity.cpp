#include <benchmark/benchmark.h>

#include <random>

#include "walip/evalbench.hpp"
#include "walip/fingerprint.hpp"
#include "walip/parallel.hpp"
#include "walip/similarity.hpp"

namespace {

walip::Matrix gaussian(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  walip::Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = g(rng);
  }
  return m;
}

void BM_Cosine(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  walip::set_thread_count(static_cast<std::size_t>(state.range(1)));
  const auto x = gaussian(n, 300, 1);
  const auto y = gaussian(n, 300, 2);
  for (auto _ : state) benchmark::DoNotOptimize(walip::cosine_matrix(x, y));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
  walip::set_thread_count(1);
}
BENCHMARK(BM_Cosine)->ArgsProduct({{500, 2000}, {1, 4}})->Unit(benchmark::kMillisecond);

void BM_Csls(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  walip::set_thread_count(static_cast<std::size_t>(state.range(1)));
  const auto x = gaussian(n, 300, 3);
  const auto y = gaussian(n, 300, 4);
  for (auto _ : state) benchmark::DoNotOptimize(walip::csls_matrix(x, y, {10}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
  walip::set_thread_count(1);
}
BENCHMARK(BM_Csls)->ArgsProduct({{500, 2000}, {1, 4}})->Unit(benchmark::kMillisecond);

void BM_TopKCandidates(benchmark::State& state) {
  const auto s = walip::cosine_matrix(gaussian(2000, 64, 5), gaussian(2000, 64, 6));
  for (auto _ : state) benchmark::DoNotOptimize(walip::topk_candidates(s, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_TopKCandidates)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_MatchingFilter(benchmark::State& state) {
  const auto s = walip::cosine_matrix(gaussian(2000, 64, 7), gaussian(2000, 64, 8));
  for (auto _ : state) benchmark::DoNotOptimize(walip::matching_filter(s, 0.5));
}
BENCHMARK(BM_MatchingFilter)->Unit(benchmark::kMillisecond);

void BM_VisualWordFilter(benchmark::State& state) {
  walip::SyntheticSpec spec;
  spec.n_words = 5000;
  spec.n_images = static_cast<std::size_t>(state.range(0));
  const auto inst = walip::gen_synthetic(spec);
  for (auto _ : state) benchmark::DoNotOptimize(walip::visual_word_filter(inst.fp_src));
}
BENCHMARK(BM_VisualWordFilter)->Arg(500)->Arg(3000)->Unit(benchmark::kMillisecond);

}  // namespace
