#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "walip/types.hpp"

namespace walip {

/// Orthogonal W minimising ||X W - Y||_F over rows x_i, y_i:
/// X^T Y = U S V^T, W = U V^T. Reflections are allowed.
LinearMap procrustes(const Matrix& x, const Matrix& y);

/// procrustes(D X, D Y) with D = diag(sqrt(w)). Weights must be finite and
/// non-negative with at least one positive entry.
LinearMap weighted_procrustes(const Matrix& x, const Matrix& y, std::span<const double> weights);

struct RobustParams {
  double eps = 1e-3;
  std::size_t iters = 5;

  void validate() const;
};

/// One reweighting step of robust_procrustes.
struct RobustStep {
  Vector weights;            // max-normalised, in (0, 1]
  Matrix map;                // W_m
  double objective_prev = 0; // ||D (X W_{m-1} - Y)||_F with this step's weights
  double objective = 0;      // ||D (X W_m - Y)||_F
};

/// Error-weighted robust Procrustes. Starts from plain Procrustes, then M
/// times reweights each pair by 1 / (||y_i - x_i W||^2 + eps), scales the
/// weights so the largest is 1, and refits with weighted Procrustes.
/// When `trace` is given, every step is appended to it.
LinearMap robust_procrustes(const Matrix& x, const Matrix& y, const RobustParams& params = {},
                            std::vector<RobustStep>* trace = nullptr);

struct SupervisedFit {
  LinearMap map;
  std::size_t used_pairs = 0;
  std::size_t skipped = 0;  // source words (or all their translations) not in the vocabularies
};

/// Procrustes on the gold pairs: for each gold source word, the first listed
/// translation present in the target vocabulary. Needs at least dim pairs.
SupervisedFit supervised_fit(const EmbeddingTable& src, const EmbeddingTable& tgt,
                             const GoldLexicon& gold);

}  // namespace walip
