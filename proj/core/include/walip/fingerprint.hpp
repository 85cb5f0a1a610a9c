#pragma once

#include "walip/types.hpp"

namespace walip {

struct FilterParams {
  /// Words whose best image similarity reaches this quantile of all
  /// best-similarities stay active (0.5 = median).
  double max_sim_quantile = 0.5;
  /// Per active row, entries below this quantile of the row are zeroed.
  double sparsify_quantile = 0.9;

  void validate() const;
};

/// fp[i][j] = cos(text row i, image row j), clamped to [-1, 1].
/// Throws InvalidArgument on a dimension mismatch or a zero-norm row.
FingerprintTable build_fingerprints(const EmbeddingTable& text, const EmbeddingTable& images);

/// Keeps words whose row maximum is at least the max_sim_quantile of all row
/// maxima, zeroes each kept row below its sparsify_quantile, and scales kept
/// rows to unit L2 norm. Inactive rows are zeroed. Rows left with no nonzero
/// entry are dropped from the active set.
FingerprintTable visual_word_filter(const FingerprintTable& table, const FilterParams& params = {});

}  // namespace walip
