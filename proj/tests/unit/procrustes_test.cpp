#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "walip/error.hpp"
#include "walip/evalbench.hpp"
#include "walip/procrustes.hpp"

using namespace walip;
using testing_support::random_matrix;

namespace {

// Gram-Schmidt on a Gaussian matrix; independent of the library's generator.
Matrix gram_schmidt_orthogonal(std::size_t d, std::mt19937_64& rng) {
  Matrix q = random_matrix(d, d, rng);
  for (Eigen::Index i = 0; i < q.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) q.row(i) -= q.row(i).dot(q.row(j)) * q.row(j);
    q.row(i).normalize();
  }
  return q;
}

double objective(const Matrix& x, const Matrix& y, const Matrix& w) { return (x * w - y).norm(); }

}  // namespace

TEST(Procrustes, IdentityWhenYEqualsX) {
  std::mt19937_64 rng(30);
  const Matrix x = random_matrix(40, 8, rng);
  EXPECT_LE((procrustes(x, x).matrix() - Matrix::Identity(8, 8)).norm(), 1e-9);
}

TEST(Procrustes, RecoversPlantedRotation) {
  std::mt19937_64 rng(31);
  const Matrix x = random_matrix(200, 50, rng);
  const Matrix r = gram_schmidt_orthogonal(50, rng);
  EXPECT_LE((procrustes(x, x * r).matrix() - r).norm(), 1e-6);
}

TEST(Procrustes, BeatsRandomOrthogonalMaps) {
  std::mt19937_64 rng(32);
  const Matrix x = random_matrix(30, 5, rng);
  const Matrix y = x * gram_schmidt_orthogonal(5, rng) + 0.3 * random_matrix(30, 5, rng);
  const double best = objective(x, y, procrustes(x, y).matrix());
  for (int t = 0; t < 1000; ++t) {
    EXPECT_LE(best, objective(x, y, gram_schmidt_orthogonal(5, rng)) + 1e-12);
  }
}

TEST(Procrustes, AllowsReflections) {
  std::mt19937_64 rng(33);
  const Matrix x = random_matrix(20, 3, rng);
  Matrix r = Matrix::Identity(3, 3);
  r(2, 2) = -1.0;
  const auto w = procrustes(x, x * r);
  EXPECT_LE((w.matrix() - r).norm(), 1e-9);
  EXPECT_NEAR(w.matrix().determinant(), -1.0, 1e-9);
}

TEST(Procrustes, Errors) {
  Matrix x = Matrix::Ones(3, 2);
  x(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(procrustes(x, Matrix::Ones(3, 2)), InvalidArgument);
  EXPECT_THROW(procrustes(Matrix(3, 0), Matrix(3, 0)), InvalidArgument);
  EXPECT_THROW(procrustes(Matrix::Ones(3, 2), Matrix::Ones(2, 2)), InvalidArgument);
  EXPECT_THROW(procrustes(Matrix(0, 2), Matrix(0, 2)), InvalidArgument);
}

TEST(WeightedProcrustes, UniformWeightsMatchPlain) {
  std::mt19937_64 rng(34);
  const Matrix x = random_matrix(25, 6, rng);
  const Matrix y = random_matrix(25, 6, rng);
  const std::vector<double> w(25, 0.37);
  EXPECT_LE((weighted_procrustes(x, y, w).matrix() - procrustes(x, y).matrix()).norm(), 1e-10);
}

TEST(WeightedProcrustes, ZeroWeightsExcludeCorruptedRows) {
  std::mt19937_64 rng(35);
  const Matrix x = random_matrix(60, 10, rng);
  const Matrix r = gram_schmidt_orthogonal(10, rng);
  Matrix y = x * r;
  std::vector<double> w(60, 1.0);
  for (int i = 0; i < 15; ++i) {
    y.row(i) = random_matrix(1, 10, rng);
    w[i] = 0.0;
  }
  EXPECT_LE((weighted_procrustes(x, y, w).matrix() - r).norm(), 1e-6);
}

TEST(WeightedProcrustes, EqualsScaledPlain) {
  std::mt19937_64 rng(36);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix x = random_matrix(30, 4, rng);
    const Matrix y = random_matrix(30, 4, rng);
    std::vector<double> w(30);
    for (double& v : w) v = u(rng);
    Matrix dx = x, dy = y;
    for (int i = 0; i < 30; ++i) {
      dx.row(i) *= std::sqrt(w[i]);
      dy.row(i) *= std::sqrt(w[i]);
    }
    EXPECT_LE((weighted_procrustes(x, y, w).matrix() - procrustes(dx, dy).matrix()).norm(), 1e-10);
  }
}

TEST(WeightedProcrustesProperty, ScalingWeightsChangesNothing) {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const Matrix x = random_matrix(20, 4, rng);
    const Matrix y = random_matrix(20, 4, rng);
    std::vector<double> w(20), w2(20);
    const double c = 0.01 + 50.0 * u(rng);
    for (int i = 0; i < 20; ++i) {
      w[i] = u(rng);
      w2[i] = c * w[i];
    }
    EXPECT_LE((weighted_procrustes(x, y, w).matrix() - weighted_procrustes(x, y, w2).matrix()).norm(),
              1e-9);
  }
}

TEST(WeightedProcrustes, RejectsBadWeights) {
  const Matrix x = Matrix::Identity(3, 3);
  EXPECT_THROW(weighted_procrustes(x, x, std::vector<double>(3, 0.0)), InvalidArgument);
  EXPECT_THROW(weighted_procrustes(x, x, std::vector<double>{1.0, -1.0, 1.0}), InvalidArgument);
  EXPECT_THROW(weighted_procrustes(x, x, std::vector<double>{1.0, 1.0}), InvalidArgument);
}

TEST(RobustProcrustes, NoiseFreeFixedPoint) {
  std::mt19937_64 rng(38);
  const Matrix x = random_matrix(80, 12, rng);
  const Matrix r = gram_schmidt_orthogonal(12, rng);
  std::vector<RobustStep> trace;
  const auto w = robust_procrustes(x, x * r, {}, &trace);
  EXPECT_LE((w.matrix() - r).norm(), 1e-6);
  ASSERT_EQ(trace.size(), 5u);
  for (const auto& step : trace) {
    EXPECT_LE((step.map - r).norm(), 1e-6);
    EXPECT_GE(step.weights.minCoeff(), 1.0 - 1e-6);
    EXPECT_DOUBLE_EQ(step.weights.maxCoeff(), 1.0);
  }
}

TEST(RobustProcrustes, ZeroResidualWeightIsInverseEps) {
  // Two pairs: one exact, one with squared residual 1 under the identity.
  Matrix x(2, 1), y(2, 1);
  x << 1, 1;
  y << 1, 1;
  // With every residual zero the raw weight is 1/eps.
  const RobustParams params;
  EXPECT_DOUBLE_EQ(1.0 / (0.0 + params.eps), 1000.0);
  std::vector<RobustStep> trace;
  robust_procrustes(x, y, params, &trace);
  EXPECT_DOUBLE_EQ(trace.front().weights(0), 1.0);
}

TEST(RobustProcrustes, DownweightsOutliers) {
  std::mt19937_64 rng(39);
  const Matrix x = random_matrix(100, 6, rng);
  const Matrix r = gram_schmidt_orthogonal(6, rng);
  Matrix y = x * r + 0.01 * random_matrix(100, 6, rng);
  for (int i = 0; i < 30; ++i) y.row(i) = x.row(99 - i) * r;
  const double robust = (robust_procrustes(x, y).matrix() - r).norm();
  const double plain = (procrustes(x, y).matrix() - r).norm();
  EXPECT_LT(robust, plain);
}

TEST(RobustProcrustesProperty, WeightedObjectiveDescends) {
  std::mt19937_64 rng(40);
  for (int trial = 0; trial < 30; ++trial) {
    const Matrix x = random_matrix(40, 5, rng);
    const Matrix y = x * gram_schmidt_orthogonal(5, rng) + 0.5 * random_matrix(40, 5, rng);
    std::vector<RobustStep> trace;
    robust_procrustes(x, y, {1e-3, 6}, &trace);
    ASSERT_EQ(trace.size(), 6u);
    Matrix prev = procrustes(x, y).matrix();
    for (const auto& step : trace) {
      Matrix dx = x, dy = y;
      for (int i = 0; i < 40; ++i) {
        dx.row(i) *= std::sqrt(step.weights(i));
        dy.row(i) *= std::sqrt(step.weights(i));
      }
      EXPECT_LE(objective(dx, dy, step.map), objective(dx, dy, prev) + 1e-12);
      EXPECT_NEAR(step.objective_prev, objective(dx, dy, prev), 1e-9);
      EXPECT_NEAR(step.objective, objective(dx, dy, step.map), 1e-9);
      prev = step.map;
    }
  }
}

TEST(ProcrustesProperty, AlwaysOrthogonal) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 1 + rng() % 10;
    const Matrix x = random_matrix(d + rng() % 30, d, rng);
    const Matrix y = random_matrix(static_cast<std::size_t>(x.rows()), d, rng);
    EXPECT_LE(procrustes(x, y).orthogonality_error(), 1e-8);
    EXPECT_LE(robust_procrustes(x, y).orthogonality_error(), 1e-8);
  }
}

TEST(RobustParams, Validation) {
  EXPECT_THROW((RobustParams{0.0, 5}.validate()), InvalidArgument);
  EXPECT_THROW((RobustParams{1e-3, 0}.validate()), InvalidArgument);
}

TEST(SupervisedFit, IdentityOnIdenticalTables) {
  std::mt19937_64 rng(42);
  const EmbeddingTable t(testing_support::words("w", 30), random_matrix(30, 6, rng));
  GoldLexicon gold;
  for (const auto& w : t.words()) gold.add(w, w);
  const auto fit = supervised_fit(t, t, gold);
  EXPECT_LE((fit.map.matrix() - Matrix::Identity(6, 6)).norm(), 1e-9);
  EXPECT_EQ(fit.used_pairs, 30u);
}

TEST(SupervisedFit, PlantedRotationAndSkips) {
  SyntheticSpec spec;
  spec.n_words = 100;
  spec.dim = 8;
  spec.n_images = 20;
  spec.seed = 5;
  const auto inst = gen_synthetic(spec);
  GoldLexicon gold = inst.gold;
  gold.add("missing_word", "t1");
  const auto fit = supervised_fit(inst.src, inst.tgt, gold);
  EXPECT_LE((fit.map.matrix() - inst.planted_map.matrix()).norm(), 1e-6);
  EXPECT_EQ(fit.used_pairs, 100u);
  EXPECT_EQ(fit.skipped, 1u);
}

TEST(SupervisedFit, TooFewPairs) {
  std::mt19937_64 rng(43);
  const EmbeddingTable t(testing_support::words("w", 10), random_matrix(10, 6, rng));
  GoldLexicon gold;
  gold.add("w0", "w0");
  EXPECT_THROW(supervised_fit(t, t, gold), InvalidArgument);
}
