#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "walip/types.hpp"

namespace walip {

/// Fraction of gold source words whose first n predictions contain an
/// accepted translation. Gold words without predictions count as misses.
double recall_at_n(const RankedPredictions& predictions, const GoldLexicon& gold, std::size_t n);

struct HubnessStats {
  std::size_t max_in_degree = 0;
  std::size_t n_hubs = 0;                // targets with in-degree > threshold
  std::vector<std::size_t> in_degree;    // indexed by target
};

/// In-degree statistics of a list of chosen target indices. `n_targets`
/// sizes the histogram (grown to fit the largest index).
HubnessStats hubness(std::span<const std::size_t> targets, std::size_t threshold,
                     std::size_t n_targets = 0);
HubnessStats hubness(const WordMapping& mapping, std::size_t threshold, std::size_t n_targets = 0);

struct SyntheticSpec {
  std::size_t n_words = 500;
  std::size_t dim = 32;
  std::size_t n_images = 200;
  double visual_frac = 0.4;
  double noise_sigma = 0.0;
  double corrupt_frac = 0.0;
  double init_frac = 0.1;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Planted bilingual problem: target row i is normalize(src row perm[i] * R + noise),
/// gold pairs src word perm[i] with tgt word i. Emitted matrices are rounded to
/// binary32 so they survive file round-trips bit for bit.
struct SyntheticInstance {
  SyntheticSpec spec;
  EmbeddingTable src;
  EmbeddingTable tgt;
  LinearMap planted_map;
  GoldLexicon gold;
  FingerprintTable fp_src;
  FingerprintTable fp_tgt;
  WordMapping init;
  std::vector<std::size_t> permutation;     // tgt row -> src row
  std::vector<std::size_t> inverse;         // src row -> tgt row
  std::vector<std::size_t> visual_words;    // src indices, ascending
};

SyntheticInstance gen_synthetic(const SyntheticSpec& spec);

/// Writes src.vec, tgt.vec, src.fp, tgt.fp, gold.txt, init.tsv, spec.json and
/// planted_map.bin into `dir` (created if missing).
void write_synthetic(const SyntheticInstance& inst, const std::filesystem::path& dir);

/// Random orthogonal matrix (QR of a Gaussian matrix, sign-corrected).
Matrix random_orthogonal(std::size_t d, std::uint64_t seed);

/// Source and target clouds sharing a common mean direction, with `n_hubs`
/// target rows placed on that direction so they sit close to every source.
struct HubInstance {
  Matrix src;
  Matrix tgt;
  std::vector<std::size_t> hubs;
};

HubInstance gen_hub_instance(std::uint64_t seed, std::size_t n_src = 200, std::size_t n_tgt = 200,
                             std::size_t dim = 64, std::size_t n_hubs = 5);

}  // namespace walip
