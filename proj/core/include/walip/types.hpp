#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace walip {

/// Row-major dense matrix; one row per word or image.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// True when `word` is a usable token: non-empty, no whitespace or control
/// bytes.
bool is_valid_token(std::string_view word) noexcept;

/// Ordered vocabulary paired with one embedding row per word.
///
/// Invariants (checked on construction): one row per word, words unique and
/// valid tokens, all values finite, dim >= 1.
class EmbeddingTable {
 public:
  EmbeddingTable(std::vector<std::string> words, Matrix matrix);

  const std::vector<std::string>& words() const noexcept { return words_; }
  const Matrix& matrix() const noexcept { return matrix_; }
  std::size_t size() const noexcept { return words_.size(); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.cols()); }

  std::optional<std::size_t> index_of(std::string_view word) const;

 private:
  std::vector<std::string> words_;
  Matrix matrix_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Per-word image-similarity rows plus the set of words that survived
/// visual-word filtering.
class FingerprintTable {
 public:
  /// Unfiltered table: every word active, values must lie in [-1, 1].
  FingerprintTable(std::vector<std::string> words, Matrix fp);
  /// Filtered table; `active` must be sorted, unique and in range.
  FingerprintTable(std::vector<std::string> words, Matrix fp,
                   std::vector<std::size_t> active, bool sparsified);

  const std::vector<std::string>& words() const noexcept { return words_; }
  const Matrix& fp() const noexcept { return fp_; }
  const std::vector<std::size_t>& active() const noexcept { return active_; }
  bool sparsified() const noexcept { return sparsified_; }
  std::size_t size() const noexcept { return words_.size(); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(fp_.cols()); }

  /// Rows of the active words, in `active()` order.
  Matrix active_rows() const;

 private:
  void validate() const;

  std::vector<std::string> words_;
  Matrix fp_;
  std::vector<std::size_t> active_;
  bool sparsified_ = false;
};

struct WordPair {
  std::size_t src = 0;
  std::size_t tgt = 0;
  double score = 0.0;

  friend bool operator==(const WordPair&, const WordPair&) = default;
};

/// Partial map from source indices to target indices. Each source index
/// appears at most once; targets may repeat.
class WordMapping {
 public:
  WordMapping() = default;

  /// Throws InvalidArgument on a repeated source index or non-finite score.
  void add(std::size_t src, std::size_t tgt, double score);

  const std::vector<WordPair>& pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }
  std::optional<std::size_t> target_of(std::size_t src) const;

  /// Throws InvalidArgument if any index is outside [0, n_src) x [0, n_tgt).
  void check_bounds(std::size_t n_src, std::size_t n_tgt) const;

  friend bool operator==(const WordMapping& a, const WordMapping& b) {
    return a.pairs_ == b.pairs_;
  }

 private:
  std::vector<WordPair> pairs_;
  std::unordered_map<std::size_t, std::size_t> by_src_;
};

/// Orthogonal d x d map, applied to row vectors as x * W.
class LinearMap {
 public:
  static constexpr double kDefaultTolerance = 1e-8;

  explicit LinearMap(Matrix w, double tolerance = kDefaultTolerance);
  static LinearMap identity(std::size_t d);

  const Matrix& matrix() const noexcept { return w_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(w_.rows()); }

  /// max |W^T W - I|
  double orthogonality_error() const;

 private:
  Matrix w_;
};

double orthogonality_error(const Matrix& w);

/// Gold dictionary: source word -> acceptable translations. Translations keep
/// first-seen order; equality ignores order.
class GoldLexicon {
 public:
  void add(const std::string& src, const std::string& tgt);

  const std::map<std::string, std::vector<std::string>>& entries() const noexcept {
    return entries_;
  }
  const std::vector<std::string>* translations(const std::string& src) const;
  bool accepts(const std::string& src, const std::string& tgt) const;
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  friend bool operator==(const GoldLexicon& a, const GoldLexicon& b);

 private:
  std::map<std::string, std::vector<std::string>> entries_;
};

/// Ranked translation candidates per source word, best first.
using RankedPredictions = std::map<std::string, std::vector<std::string>>;

enum class QuantileSchedule { Adaptive, Discrete };
enum class ProcrustesKind { Robust, Standard };

struct PipelineConfig {
  std::size_t csls_k = 10;
  std::size_t align_steps = 40;
  double init_quantile = 0.5;
  std::size_t robust_iters = 5;
  double robust_eps = 1e-3;
  std::vector<std::size_t> candidate_schedule{10, 5, 3, 1};
  QuantileSchedule quantile_schedule_mode = QuantileSchedule::Adaptive;
  double convergence_tol = 1e-6;
  bool normalize_embeddings = true;
  std::uint64_t seed = 0;
  ProcrustesKind procrustes = ProcrustesKind::Robust;

  /// Throws ConfigError when a field is out of its domain.
  void validate() const;
};

/// Quantile values cycled per iteration in discrete mode.
inline constexpr double kDiscreteQuantiles[] = {0.1, 0.3, 0.5, 0.7};

struct IterationRecord {
  std::size_t step = 0;
  double loss = 0.0;
  double quantile = 0.0;
  std::size_t candidate_k = 0;
  std::size_t fit_pairs = 0;
  std::size_t pairs = 0;
  std::shared_ptr<const WordMapping> snapshot;
};

}  // namespace walip
