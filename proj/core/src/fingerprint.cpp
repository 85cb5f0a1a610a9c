#include "walip/fingerprint.hpp"

#include <vector>

#include "walip/error.hpp"
#include "walip/parallel.hpp"
#include "walip/quantile.hpp"
#include "walip/similarity.hpp"

namespace walip {
namespace {

void require_nonzero_rows(const Matrix& m, const char* which) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (!(m.row(i).norm() > 0.0)) {
      throw InvalidArgument(std::string("zero-norm ") + which + " row " + std::to_string(i));
    }
  }
}

}  // namespace

void FilterParams::validate() const {
  if (!(max_sim_quantile > 0.0 && max_sim_quantile < 1.0)) {
    throw InvalidArgument("max_sim_quantile must lie in (0, 1)");
  }
  if (!(sparsify_quantile > 0.0 && sparsify_quantile < 1.0)) {
    throw InvalidArgument("sparsify_quantile must lie in (0, 1)");
  }
}

FingerprintTable build_fingerprints(const EmbeddingTable& text, const EmbeddingTable& images) {
  if (text.dim() != images.dim()) {
    throw InvalidArgument("dimension mismatch: text " + std::to_string(text.dim()) +
                          " vs images " + std::to_string(images.dim()));
  }
  require_nonzero_rows(text.matrix(), "text");
  require_nonzero_rows(images.matrix(), "image");
  ScoreMatrix cos = cosine_matrix(text.matrix(), images.matrix());
  return FingerprintTable(text.words(), std::move(cos.scores));
}

FingerprintTable visual_word_filter(const FingerprintTable& table, const FilterParams& params) {
  params.validate();
  if (table.sparsified()) throw InvalidArgument("fingerprints are already sparsified");
  if (table.size() == 0 || table.dim() == 0 || table.active().empty()) {
    throw InvalidArgument("visual_word_filter on an empty table");
  }
  const Matrix& fp = table.fp();
  const auto& candidates = table.active();

  std::vector<double> row_max(candidates.size());
  for (std::size_t r = 0; r < candidates.size(); ++r) {
    row_max[r] = fp.row(static_cast<Eigen::Index>(candidates[r])).maxCoeff();
  }
  const double max_threshold = quantile(row_max, params.max_sim_quantile);

  Matrix out = Matrix::Zero(fp.rows(), fp.cols());
  std::vector<char> keep(candidates.size(), 0);
  parallel_for(candidates.size(), [&](std::size_t r) {
    if (row_max[r] < max_threshold) return;
    const auto i = static_cast<Eigen::Index>(candidates[r]);
    const auto src = fp.row(i);
    const double cut = quantile(std::span<const double>(src.data(), static_cast<std::size_t>(src.size())),
                                params.sparsify_quantile);
    auto dst = out.row(i);
    for (Eigen::Index j = 0; j < fp.cols(); ++j) dst(j) = src(j) >= cut ? src(j) : 0.0;
    const double norm = dst.norm();
    if (norm > 0.0) {
      dst /= norm;
      keep[r] = 1;
    } else {
      dst.setZero();
    }
  });

  std::vector<std::size_t> active;
  for (std::size_t r = 0; r < candidates.size(); ++r) {
    if (keep[r]) active.push_back(candidates[r]);
  }
  return FingerprintTable(table.words(), std::move(out), std::move(active), true);
}

}  // namespace walip
