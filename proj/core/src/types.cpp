#include "walip/types.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "walip/error.hpp"

namespace walip {

bool is_valid_token(std::string_view word) noexcept {
  if (word.empty()) return false;
  return std::none_of(word.begin(), word.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return u <= 0x20 || u == 0x7f;
  });
}

EmbeddingTable::EmbeddingTable(std::vector<std::string> words, Matrix matrix)
    : words_(std::move(words)), matrix_(std::move(matrix)) {
  if (matrix_.cols() < 1) throw InvalidArgument("embedding dimension must be >= 1");
  if (static_cast<std::size_t>(matrix_.rows()) != words_.size()) {
    throw InvalidArgument("embedding table has " + std::to_string(words_.size()) +
                          " words but " + std::to_string(matrix_.rows()) + " rows");
  }
  if (!matrix_.allFinite()) throw InvalidArgument("embedding table has non-finite values");
  index_.reserve(words_.size());
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!is_valid_token(words_[i])) {
      throw InvalidArgument("invalid token at row " + std::to_string(i));
    }
    if (!index_.emplace(words_[i], i).second) {
      throw InvalidArgument("duplicate word '" + words_[i] + "' at row " + std::to_string(i));
    }
  }
}

std::optional<std::size_t> EmbeddingTable::index_of(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

FingerprintTable::FingerprintTable(std::vector<std::string> words, Matrix fp)
    : words_(std::move(words)), fp_(std::move(fp)), sparsified_(false) {
  active_.resize(words_.size());
  for (std::size_t i = 0; i < active_.size(); ++i) active_[i] = i;
  validate();
}

FingerprintTable::FingerprintTable(std::vector<std::string> words, Matrix fp,
                                   std::vector<std::size_t> active, bool sparsified)
    : words_(std::move(words)),
      fp_(std::move(fp)),
      active_(std::move(active)),
      sparsified_(sparsified) {
  validate();
}

void FingerprintTable::validate() const {
  if (static_cast<std::size_t>(fp_.rows()) != words_.size()) {
    throw InvalidArgument("fingerprint table: word count does not match row count");
  }
  if (!fp_.allFinite()) throw InvalidArgument("fingerprint table has non-finite values");
  if (!sparsified_ && fp_.size() > 0 &&
      (fp_.maxCoeff() > 1.0 || fp_.minCoeff() < -1.0)) {
    throw InvalidArgument("unsparsified fingerprint values must lie in [-1, 1]");
  }
  for (std::size_t i = 0; i < active_.size(); ++i) {
    if (active_[i] >= words_.size()) {
      throw InvalidArgument("active index out of range: " + std::to_string(active_[i]));
    }
    if (i > 0 && active_[i] <= active_[i - 1]) {
      throw InvalidArgument("active indices must be strictly increasing");
    }
  }
}

Matrix FingerprintTable::active_rows() const {
  Matrix out(static_cast<Eigen::Index>(active_.size()), fp_.cols());
  for (std::size_t r = 0; r < active_.size(); ++r) {
    out.row(static_cast<Eigen::Index>(r)) = fp_.row(static_cast<Eigen::Index>(active_[r]));
  }
  return out;
}

void WordMapping::add(std::size_t src, std::size_t tgt, double score) {
  if (!std::isfinite(score)) throw InvalidArgument("mapping score must be finite");
  if (!by_src_.emplace(src, pairs_.size()).second) {
    throw InvalidArgument("source index " + std::to_string(src) + " mapped twice");
  }
  pairs_.push_back({src, tgt, score});
}

std::optional<std::size_t> WordMapping::target_of(std::size_t src) const {
  auto it = by_src_.find(src);
  if (it == by_src_.end()) return std::nullopt;
  return pairs_[it->second].tgt;
}

void WordMapping::check_bounds(std::size_t n_src, std::size_t n_tgt) const {
  for (const auto& p : pairs_) {
    if (p.src >= n_src || p.tgt >= n_tgt) {
      throw InvalidArgument("mapping pair (" + std::to_string(p.src) + ", " +
                            std::to_string(p.tgt) + ") out of range");
    }
  }
}

double orthogonality_error(const Matrix& w) {
  if (w.rows() != w.cols()) return std::numeric_limits<double>::infinity();
  const Matrix gram = w.transpose() * w;
  return (gram - Matrix::Identity(w.rows(), w.cols())).cwiseAbs().maxCoeff();
}

LinearMap::LinearMap(Matrix w, double tolerance) : w_(std::move(w)) {
  if (w_.rows() == 0 || w_.rows() != w_.cols()) {
    throw InvalidArgument("linear map must be a non-empty square matrix");
  }
  if (!w_.allFinite()) throw InvalidArgument("linear map has non-finite values");
  const double err = walip::orthogonality_error(w_);
  if (err > tolerance) {
    throw InvalidArgument("linear map is not orthogonal (max |W^T W - I| = " +
                          std::to_string(err) + ")");
  }
}

LinearMap LinearMap::identity(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d);
  return LinearMap(Matrix::Identity(n, n));
}

double LinearMap::orthogonality_error() const { return walip::orthogonality_error(w_); }

void GoldLexicon::add(const std::string& src, const std::string& tgt) {
  if (!is_valid_token(src) || !is_valid_token(tgt)) {
    throw InvalidArgument("lexicon entries must be non-empty tokens");
  }
  auto& targets = entries_[src];
  if (std::find(targets.begin(), targets.end(), tgt) == targets.end()) {
    targets.push_back(tgt);
  }
}

const std::vector<std::string>* GoldLexicon::translations(const std::string& src) const {
  auto it = entries_.find(src);
  return it == entries_.end() ? nullptr : &it->second;
}

bool GoldLexicon::accepts(const std::string& src, const std::string& tgt) const {
  const auto* t = translations(src);
  return t != nullptr && std::find(t->begin(), t->end(), tgt) != t->end();
}

bool operator==(const GoldLexicon& a, const GoldLexicon& b) {
  if (a.entries_.size() != b.entries_.size()) return false;
  for (auto ia = a.entries_.begin(), ib = b.entries_.begin(); ia != a.entries_.end();
       ++ia, ++ib) {
    if (ia->first != ib->first) return false;
    std::set<std::string> sa(ia->second.begin(), ia->second.end());
    std::set<std::string> sb(ib->second.begin(), ib->second.end());
    if (sa != sb) return false;
  }
  return true;
}

void PipelineConfig::validate() const {
  if (csls_k < 1) throw ConfigError("csls_k must be a positive integer");
  if (robust_iters < 1) throw ConfigError("robust_iters must be a positive integer");
  if (!(robust_eps > 0.0) || !std::isfinite(robust_eps)) {
    throw ConfigError("robust_eps must be a positive real");
  }
  if (!(init_quantile >= 0.0 && init_quantile <= 1.0)) {
    throw ConfigError("init_quantile must lie in [0, 1]");
  }
  if (!(convergence_tol > 0.0) || !std::isfinite(convergence_tol)) {
    throw ConfigError("convergence_tol must be a positive real");
  }
  if (candidate_schedule.empty()) throw ConfigError("candidate_schedule must not be empty");
  for (std::size_t i = 0; i < candidate_schedule.size(); ++i) {
    if (candidate_schedule[i] < 1) {
      throw ConfigError("candidate_schedule entries must be positive");
    }
    if (i > 0 && candidate_schedule[i] >= candidate_schedule[i - 1]) {
      throw ConfigError("candidate_schedule must be strictly descending");
    }
  }
  if (candidate_schedule.back() != 1) throw ConfigError("candidate_schedule must end with 1");
}

}  // namespace walip
