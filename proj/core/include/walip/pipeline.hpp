#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "walip/clip_nn.hpp"
#include "walip/fingerprint.hpp"
#include "walip/types.hpp"

namespace walip {

/// Pivot pairs from fingerprints: visual-word filtering on both sides (skipped
/// for tables that are already sparsified), CSLS between the active rows, then
/// matching at quantile q. Indices refer to the full vocabularies. csls_k is
/// clamped to the smaller active set.
WordMapping initial_mapping(const FingerprintTable& src, const FingerprintTable& tgt, double q,
                            std::size_t csls_k, const FilterParams& params = {});

/// ||A_P - B_P||_F / (||A_P||_F + ||B_P||_F) over the rows paired by
/// `mapping`; lies in [0, 1].
double alignment_loss(const Matrix& mapped_src, const Matrix& tgt, const WordMapping& mapping);

struct PhaseTimings {
  double fit_ms = 0.0;
  double match_ms = 0.0;
  double final_ms = 0.0;
};

struct AlignResult {
  LinearMap map;
  WordMapping mapping;
  std::vector<IterationRecord> history;
  bool collapsed = false;
  std::string message;
  PhaseTimings timings;
};

/// Iterative robust Procrustes refinement starting from `init`.
///
/// Each step fits a map on the current pairs, applies it to a working copy of
/// the source vectors, records the loss, and re-matches with CSLS restricted
/// to the scheduled top-k candidates at the scheduled quantile. The candidate
/// schedule advances whenever the loss changes by less than
/// cfg.convergence_tol; the loop stops early once the schedule is exhausted
/// and the loss has converged, or when a re-match yields fewer pairs than the
/// embedding dimension (collapsed; the last fitted map is kept). The final
/// mapping assigns every source word its CSLS argmax under the learned map.
/// align_steps = 0 performs a single fit on the init pairs.
AlignResult walip_align(const EmbeddingTable& src, const EmbeddingTable& tgt,
                        const WordMapping& init, const PipelineConfig& cfg);

/// Top-n CSLS translations of every source row under `map`.
std::vector<std::vector<RankedTarget>> rank_translations(const Matrix& src, const Matrix& tgt,
                                                         const LinearMap& map, std::size_t n,
                                                         std::size_t csls_k, bool normalize);

RankedPredictions to_predictions(const std::vector<std::vector<RankedTarget>>& ranked,
                                 std::span<const std::string> src_words,
                                 std::span<const std::string> tgt_words);
RankedPredictions to_predictions(const WordMapping& mapping,
                                 std::span<const std::string> src_words,
                                 std::span<const std::string> tgt_words);

}  // namespace walip
