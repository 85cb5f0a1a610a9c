#include "walip/procrustes.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <iostream>

#include "walip/error.hpp"

namespace walip {
namespace {

void check_pair(const Matrix& x, const Matrix& y) {
  if (x.cols() == 0) throw InvalidArgument("procrustes: dimension must be >= 1");
  if (x.rows() == 0) throw InvalidArgument("procrustes: no pairs");
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw InvalidArgument("procrustes: X is " + std::to_string(x.rows()) + "x" +
                          std::to_string(x.cols()) + " but Y is " + std::to_string(y.rows()) +
                          "x" + std::to_string(y.cols()));
  }
  if (!x.allFinite() || !y.allFinite()) throw InvalidArgument("procrustes: non-finite input");
}

LinearMap solve(const Matrix& cross) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(cross),
                                     Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix w = svd.matrixU() * svd.matrixV().transpose();
  return LinearMap(w);
}

double weighted_residual(const Matrix& x, const Matrix& y, const Matrix& w, const Vector& alpha) {
  const Matrix r = x * w - y;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < r.rows(); ++i) sum += alpha(i) * r.row(i).squaredNorm();
  return std::sqrt(sum);
}

}  // namespace

LinearMap procrustes(const Matrix& x, const Matrix& y) {
  check_pair(x, y);
  return solve(x.transpose() * y);
}

LinearMap weighted_procrustes(const Matrix& x, const Matrix& y, std::span<const double> weights) {
  check_pair(x, y);
  if (weights.size() != static_cast<std::size_t>(x.rows())) {
    throw InvalidArgument("weighted_procrustes: expected " + std::to_string(x.rows()) +
                          " weights, got " + std::to_string(weights.size()));
  }
  bool any_positive = false;
  Vector root(x.rows());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights[i]) || weights[i] < 0.0) {
      throw InvalidArgument("weighted_procrustes: weights must be finite and non-negative");
    }
    any_positive = any_positive || weights[i] > 0.0;
    root(static_cast<Eigen::Index>(i)) = std::sqrt(weights[i]);
  }
  if (!any_positive) throw InvalidArgument("weighted_procrustes: all weights are zero");
  const Matrix dx = root.asDiagonal() * x;
  const Matrix dy = root.asDiagonal() * y;
  return solve(dx.transpose() * dy);
}

void RobustParams::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidArgument("robust eps must be > 0");
  if (iters < 1) throw InvalidArgument("robust iterations must be >= 1");
}

LinearMap robust_procrustes(const Matrix& x, const Matrix& y, const RobustParams& params,
                            std::vector<RobustStep>* trace) {
  params.validate();
  check_pair(x, y);
  if (x.rows() < x.cols()) {
    std::clog << "walip: warning: robust_procrustes with " << x.rows() << " pairs in dimension "
              << x.cols() << " is underdetermined\n";
  }
  LinearMap w = procrustes(x, y);
  Vector alpha(x.rows());
  for (std::size_t m = 0; m < params.iters; ++m) {
    const Matrix residual = x * w.matrix() - y;
    for (Eigen::Index i = 0; i < residual.rows(); ++i) {
      alpha(i) = 1.0 / (residual.row(i).squaredNorm() + params.eps);
    }
    alpha /= alpha.maxCoeff();
    LinearMap next = weighted_procrustes(x, y, std::span<const double>(alpha.data(), static_cast<std::size_t>(alpha.size())));
    if (trace != nullptr) {
      trace->push_back({alpha, next.matrix(), weighted_residual(x, y, w.matrix(), alpha),
                        weighted_residual(x, y, next.matrix(), alpha)});
    }
    w = std::move(next);
  }
  return w;
}

SupervisedFit supervised_fit(const EmbeddingTable& src, const EmbeddingTable& tgt,
                             const GoldLexicon& gold) {
  if (src.dim() != tgt.dim()) throw InvalidArgument("supervised_fit: dimension mismatch");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::size_t skipped = 0;
  for (const auto& [word, translations] : gold.entries()) {
    const auto si = src.index_of(word);
    std::optional<std::size_t> ti;
    for (const auto& t : translations) {
      if ((ti = tgt.index_of(t))) break;
    }
    if (!si || !ti) {
      ++skipped;
      continue;
    }
    pairs.emplace_back(*si, *ti);
  }
  if (pairs.size() < src.dim()) {
    throw InvalidArgument("supervised_fit: " + std::to_string(pairs.size()) +
                          " resolvable gold pairs, need at least " + std::to_string(src.dim()));
  }
  const auto n = static_cast<Eigen::Index>(pairs.size());
  Matrix x(n, src.matrix().cols()), y(n, tgt.matrix().cols());
  for (Eigen::Index r = 0; r < n; ++r) {
    x.row(r) = src.matrix().row(static_cast<Eigen::Index>(pairs[static_cast<std::size_t>(r)].first));
    y.row(r) = tgt.matrix().row(static_cast<Eigen::Index>(pairs[static_cast<std::size_t>(r)].second));
  }
  return {procrustes(x, y), pairs.size(), skipped};
}

}  // namespace walip
