#include "walip/similarity.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "walip/error.hpp"
#include "walip/parallel.hpp"
#include "walip/quantile.hpp"

namespace walip {

Matrix normalized_rows(const Matrix& m) {
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double norm = m.row(i).norm();
    if (!(norm > 0.0)) throw InvalidArgument("zero-norm row " + std::to_string(i));
    out.row(i) = m.row(i) / norm;
  }
  return out;
}

ScoreMatrix cosine_matrix(const Matrix& x, const Matrix& y) {
  if (x.cols() != y.cols()) {
    throw InvalidArgument("dimension mismatch: " + std::to_string(x.cols()) + " vs " +
                          std::to_string(y.cols()));
  }
  const Matrix xn = normalized_rows(x);
  const Matrix yn = normalized_rows(y);
  ScoreMatrix out{Matrix(x.rows(), y.rows()), ScoreKind::Cosine};
  parallel_for(static_cast<std::size_t>(x.rows()), [&](std::size_t r) {
    const auto i = static_cast<Eigen::Index>(r);
    out.scores.row(i) = (yn * xn.row(i).transpose()).transpose().cwiseMax(-1.0).cwiseMin(1.0);
  });
  return out;
}

Vector mean_top_k_rows(const Matrix& scores, std::size_t k) {
  if (k < 1 || k > static_cast<std::size_t>(scores.cols())) {
    throw InvalidArgument("k = " + std::to_string(k) + " out of range [1, " +
                          std::to_string(scores.cols()) + "]");
  }
  Vector out(scores.rows());
  parallel_for(static_cast<std::size_t>(scores.rows()), [&](std::size_t r) {
    const auto i = static_cast<Eigen::Index>(r);
    std::vector<double> row(scores.row(i).begin(), scores.row(i).end());
    std::partial_sort(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(k), row.end(),
                      std::greater<>());
    double sum = 0.0;
    for (std::size_t t = 0; t < k; ++t) sum += row[t];
    out(i) = sum / static_cast<double>(k);
  });
  return out;
}

ScoreMatrix csls_matrix(const Matrix& x, const Matrix& y, const CslsParams& params) {
  const auto limit = static_cast<std::size_t>(std::min(x.rows(), y.rows()));
  if (params.k < 1 || params.k > limit) {
    throw InvalidArgument("CSLS k = " + std::to_string(params.k) + " out of range [1, " +
                          std::to_string(limit) + "]");
  }
  ScoreMatrix cos = cosine_matrix(x, y);
  const Vector r_src = mean_top_k_rows(cos.scores, params.k);
  const Matrix cos_t = cos.scores.transpose();
  const Vector r_tgt = mean_top_k_rows(cos_t, params.k);

  ScoreMatrix out{std::move(cos.scores), ScoreKind::Csls};
  parallel_for(out.rows(), [&](std::size_t r) {
    const auto i = static_cast<Eigen::Index>(r);
    out.scores.row(i) = 2.0 * out.scores.row(i) - r_tgt.transpose();
    out.scores.row(i).array() -= r_src(i);
  });
  return out;
}

WordMapping matching_filter(const ScoreMatrix& scores, double q) {
  if (scores.scores.size() == 0) throw InvalidArgument("matching_filter on an empty matrix");
  const Matrix& s = scores.scores;
  const double threshold = quantile(std::span<const double>(s.data(), static_cast<std::size_t>(s.size())), q);

  WordMapping mapping;
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < s.cols(); ++j) {
      if (s(i, j) > s(i, best)) best = j;
    }
    if (s(i, best) >= threshold) {
      mapping.add(static_cast<std::size_t>(i), static_cast<std::size_t>(best), s(i, best));
    }
  }
  return mapping;
}

std::vector<Candidate> topk_candidates(const ScoreMatrix& scores, std::size_t k) {
  const std::size_t n_tgt = scores.cols();
  if (k < 1 || k > n_tgt) {
    throw InvalidArgument("top-k: k = " + std::to_string(k) + " out of range [1, " +
                          std::to_string(n_tgt) + "]");
  }
  const std::size_t n_src = scores.rows();
  std::vector<Candidate> out(n_src * k);
  parallel_for(n_src, [&](std::size_t i) {
    const auto row = scores.scores.row(static_cast<Eigen::Index>(i));
    std::vector<std::size_t> idx(n_tgt);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                      [&](std::size_t a, std::size_t b) {
                        const double sa = row(static_cast<Eigen::Index>(a));
                        const double sb = row(static_cast<Eigen::Index>(b));
                        return sa > sb || (sa == sb && a < b);
                      });
    for (std::size_t t = 0; t < k; ++t) {
      out[i * k + t] = {i, idx[t], row(static_cast<Eigen::Index>(idx[t]))};
    }
  });
  return out;
}

WordMapping matching_filter(std::span<const Candidate> candidates, double q) {
  if (candidates.empty()) throw InvalidArgument("matching_filter on an empty candidate list");
  std::vector<double> values;
  values.reserve(candidates.size());
  for (const auto& c : candidates) values.push_back(c.score);
  const double threshold = quantile(values, q);

  std::map<std::size_t, Candidate> best;
  for (const auto& c : candidates) {
    auto [it, inserted] = best.emplace(c.src, c);
    if (!inserted) {
      const Candidate& b = it->second;
      if (c.score > b.score || (c.score == b.score && c.tgt < b.tgt)) it->second = c;
    }
  }
  WordMapping mapping;
  for (const auto& [src, c] : best) {
    if (c.score >= threshold) mapping.add(src, c.tgt, c.score);
  }
  return mapping;
}

}  // namespace walip
