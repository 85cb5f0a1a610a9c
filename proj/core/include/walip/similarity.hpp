#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "walip/types.hpp"

namespace walip {

enum class ScoreKind { Cosine, Csls };

struct ScoreMatrix {
  Matrix scores;
  ScoreKind kind = ScoreKind::Cosine;

  std::size_t rows() const noexcept { return static_cast<std::size_t>(scores.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(scores.cols()); }
};

struct CslsParams {
  std::size_t k = 10;
};

/// Rows scaled to unit L2 norm. Throws InvalidArgument naming the first
/// zero-norm row.
Matrix normalized_rows(const Matrix& m);

/// scores[i][j] = cos(x_i, y_j). Each row is computed independently, so the
/// result does not depend on the thread count.
ScoreMatrix cosine_matrix(const Matrix& x, const Matrix& y);

/// Mean of the k largest entries of each row of `scores`.
Vector mean_top_k_rows(const Matrix& scores, std::size_t k);

/// CSLS(x_i, y_j) = 2 cos(x_i, y_j) - r_Y(x_i) - r_X(y_j), where r_Y(x_i) is
/// the mean cosine of x_i to its k nearest rows of Y (and symmetrically).
/// Requires 1 <= k <= min(rows(x), rows(y)).
ScoreMatrix csls_matrix(const Matrix& x, const Matrix& y, const CslsParams& params);

/// Keeps, for every row i, the pair (i, argmax_j s_ij) if its score reaches
/// the q-quantile of all entries. Argmax ties go to the lowest j.
WordMapping matching_filter(const ScoreMatrix& scores, double q);

struct Candidate {
  std::size_t src = 0;
  std::size_t tgt = 0;
  double score = 0.0;
};

/// The k best targets of every source row, best first, ties to lowest j.
std::vector<Candidate> topk_candidates(const ScoreMatrix& scores, std::size_t k);

/// Matching restricted to a candidate list: the threshold is the q-quantile
/// of the candidate scores, and each source keeps its best candidate
/// (ties to lowest target) when it reaches the threshold.
WordMapping matching_filter(std::span<const Candidate> candidates, double q);

}  // namespace walip
