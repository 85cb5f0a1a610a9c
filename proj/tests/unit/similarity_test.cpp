#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "walip/error.hpp"
#include "walip/similarity.hpp"

using namespace walip;
using testing_support::pairs_of;
using testing_support::random_matrix;
using testing_support::to_rows;

namespace {

ScoreMatrix scores_of(const oracle::Rows& rows) {
  return ScoreMatrix{testing_support::from_rows(rows), ScoreKind::Cosine};
}

void expect_matrix_near(const Matrix& got, const oracle::Rows& want, double tol) {
  ASSERT_EQ(static_cast<std::size_t>(got.rows()), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    for (std::size_t j = 0; j < want[i].size(); ++j) {
      EXPECT_NEAR(got(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), want[i][j], tol)
          << i << "," << j;
    }
  }
}

}  // namespace

TEST(Cosine, IdentityAndAntiparallel) {
  Matrix x(2, 2);
  x << 1, 0, 0, 1;
  const auto s = cosine_matrix(x, x);
  EXPECT_EQ(s.scores, Matrix::Identity(2, 2));
  Matrix y(1, 2);
  y << -3, 0;
  EXPECT_DOUBLE_EQ(cosine_matrix(x, y).scores(0, 0), -1.0);
}

TEST(Cosine, MatchesOracle) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix x = random_matrix(4, 3, rng);
    const Matrix y = random_matrix(5, 3, rng);
    expect_matrix_near(cosine_matrix(x, y).scores, oracle::cosine(to_rows(x), to_rows(y)), 1e-12);
  }
}

TEST(Cosine, Errors) {
  EXPECT_THROW(cosine_matrix(Matrix::Ones(2, 3), Matrix::Ones(2, 2)), InvalidArgument);
  Matrix z = Matrix::Ones(2, 2);
  z.row(1).setZero();
  EXPECT_THROW(cosine_matrix(z, Matrix::Ones(2, 2)), InvalidArgument);
}

TEST(Csls, SelfComparisonCancels) {
  Matrix x(1, 3);
  x << 0.3, -1.2, 2.0;
  EXPECT_NEAR(csls_matrix(x, x, {1}).scores(0, 0), 0.0, 1e-15);
}

TEST(Csls, HandEvaluated) {
  Matrix x(1, 2), y(2, 2);
  x << 1, 0;
  y << 1, 0, 0, 1;
  const auto s = csls_matrix(x, y, {1});
  EXPECT_NEAR(s.scores(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(s.scores(0, 1), -1.0, 1e-15);
  EXPECT_EQ(s.kind, ScoreKind::Csls);
}

TEST(Csls, KOutOfRange) {
  const Matrix x = Matrix::Identity(3, 3);
  const Matrix y = Matrix::Identity(2, 3);
  EXPECT_THROW(csls_matrix(x, y, {0}), InvalidArgument);
  EXPECT_THROW(csls_matrix(x, y, {3}), InvalidArgument);
  EXPECT_NO_THROW(csls_matrix(x, y, {2}));
}

TEST(Csls, MatchesBruteForce) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 1 + rng() % 12, n = 1 + rng() % 12, d = 1 + rng() % 6;
    const std::size_t k = 1 + rng() % std::min(m, n);
    const Matrix x = random_matrix(m, d, rng);
    const Matrix y = random_matrix(n, d, rng);
    expect_matrix_near(csls_matrix(x, y, {k}).scores, oracle::csls(to_rows(x), to_rows(y), k), 1e-12);
  }
}

TEST(CslsProperty, RowScaleInvariant) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> scale(0.05, 20.0);
  for (int trial = 0; trial < 30; ++trial) {
    Matrix x = random_matrix(6, 4, rng);
    Matrix y = random_matrix(7, 4, rng);
    const auto before = csls_matrix(x, y, {3}).scores;
    x.row(static_cast<Eigen::Index>(rng() % 6)) *= scale(rng);
    y.row(static_cast<Eigen::Index>(rng() % 7)) *= scale(rng);
    EXPECT_LE((csls_matrix(x, y, {3}).scores - before).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(MatchingFilter, QuantileZeroKeepsEveryArgmax) {
  const auto m = matching_filter(scores_of({{0.9, 0.1}, {0.2, 0.8}}), 0.0);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m.target_of(0), 0u);
  EXPECT_EQ(m.target_of(1), 1u);
  EXPECT_EQ(m.pairs()[1].score, 0.8);
}

TEST(MatchingFilter, QuantileOneKeepsTheMaximum) {
  const auto m = matching_filter(scores_of({{0.9, 0.1}, {0.2, 0.8}}), 1.0);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m.target_of(0), 0u);
}

TEST(MatchingFilter, TiesGoToLowestColumn) {
  const auto m = matching_filter(scores_of({{0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}}), 0.3);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m.target_of(0), 0u);
  EXPECT_EQ(m.target_of(1), 0u);
}

TEST(MatchingFilter, EmptyIsAnError) {
  EXPECT_THROW(matching_filter(ScoreMatrix{Matrix(0, 0)}, 0.5), InvalidArgument);
  EXPECT_THROW(matching_filter(std::span<const Candidate>{}, 0.5), InvalidArgument);
}

TEST(MatchingFilter, MatchesTranscription) {
  std::mt19937_64 rng(13);
  std::uniform_int_distribution<int> level(0, 6);
  for (int trial = 0; trial < 50; ++trial) {
    oracle::Rows rows(1 + rng() % 9, std::vector<double>(1 + rng() % 9));
    for (auto& r : rows) {
      for (double& v : r) v = level(rng) / 6.0;  // coarse values force ties
    }
    const double q = static_cast<double>(rng() % 11) / 10.0;
    EXPECT_EQ(pairs_of(matching_filter(scores_of(rows), q)), oracle::matching_filter(rows, q));
  }
}

TEST(MatchingFilterProperty, QuantileZeroCoversEveryRowOnce) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix x = random_matrix(1 + rng() % 20, 3, rng);
    const Matrix y = random_matrix(1 + rng() % 20, 3, rng);
    const auto m = matching_filter(cosine_matrix(x, y), 0.0);
    ASSERT_EQ(m.size(), static_cast<std::size_t>(x.rows()));
    for (std::size_t i = 0; i < m.size(); ++i) EXPECT_EQ(m.pairs()[i].src, i);
  }
}

TEST(TopK, FullAndSingle) {
  std::mt19937_64 rng(15);
  const auto s = cosine_matrix(random_matrix(4, 3, rng), random_matrix(6, 3, rng));
  EXPECT_EQ(topk_candidates(s, 6).size(), 24u);
  const auto top1 = topk_candidates(s, 1);
  const auto direct = matching_filter(s, 0.0);
  ASSERT_EQ(top1.size(), direct.size());
  for (std::size_t i = 0; i < top1.size(); ++i) {
    EXPECT_EQ(top1[i].src, direct.pairs()[i].src);
    EXPECT_EQ(top1[i].tgt, direct.pairs()[i].tgt);
  }
  EXPECT_THROW(topk_candidates(s, 0), InvalidArgument);
  EXPECT_THROW(topk_candidates(s, 7), InvalidArgument);
}

TEST(TopK, MatchesSortOracle) {
  std::mt19937_64 rng(16);
  std::uniform_int_distribution<int> level(0, 4);
  for (int trial = 0; trial < 30; ++trial) {
    oracle::Rows rows(5, std::vector<double>(7));
    for (auto& r : rows) {
      for (double& v : r) v = level(rng) / 4.0;
    }
    const auto got = topk_candidates(scores_of(rows), 3);
    const auto want = oracle::topk(rows, 3);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t t = 0; t < got.size(); ++t) {
      EXPECT_EQ(got[t].src, want[t].src);
      EXPECT_EQ(got[t].tgt, want[t].tgt);
      EXPECT_EQ(got[t].score, want[t].score);
    }
  }
}

TEST(CandidateMatching, ThresholdOverCandidatesOnly) {
  const std::vector<Candidate> c{{0, 0, 0.9}, {0, 1, 0.3}, {1, 2, 0.4}, {1, 0, 0.4}, {2, 1, 0.1}};
  // Sorted candidate scores: 0.1 0.3 0.4 0.4 0.9; q = 0.6 -> rank 3 -> 0.4.
  const auto m = matching_filter(std::span<const Candidate>(c), 0.6);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m.target_of(0), 0u);
  EXPECT_EQ(m.target_of(1), 0u);  // tie between 2 and 0 -> lowest
  EXPECT_FALSE(m.target_of(2).has_value());
}
