#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "walip/error.hpp"
#include "walip/evalbench.hpp"
#include "walip/io.hpp"
#include "walip/procrustes.hpp"

using namespace walip;

namespace {

GoldLexicon cat_gold() {
  GoldLexicon g;
  g.add("cat", "chat");
  g.add("cat", "minou");
  return g;
}

}  // namespace

TEST(Recall, AnyOfNPredictions) {
  EXPECT_EQ(recall_at_n({{"cat", {"minou", "X"}}}, cat_gold(), 2), 1.0);
  EXPECT_EQ(recall_at_n({{"cat", {"X"}}}, cat_gold(), 1), 0.0);
  EXPECT_EQ(recall_at_n({}, cat_gold(), 1), 0.0);
  EXPECT_THROW(recall_at_n({}, cat_gold(), 0), InvalidArgument);
}

TEST(Recall, ThreeOfFour) {
  GoldLexicon g;
  g.add("a", "1");
  g.add("b", "2");
  g.add("c", "3");
  g.add("d", "4");
  const RankedPredictions p{{"a", {"1"}}, {"b", {"2"}}, {"c", {"9"}}, {"d", {"4"}}};
  EXPECT_EQ(recall_at_n(p, g, 1), 0.75);
}

TEST(Recall, MatchesSetIntersectionOracle) {
  std::mt19937_64 rng(60);
  for (int trial = 0; trial < 50; ++trial) {
    GoldLexicon g;
    RankedPredictions p;
    for (int w = 0; w < 15; ++w) {
      const std::string src = "s" + std::to_string(w);
      for (std::size_t t = 0; t < 1 + rng() % 3; ++t) g.add(src, "t" + std::to_string(rng() % 8));
      if (rng() % 5 == 0) continue;
      for (std::size_t t = 0; t < 1 + rng() % 6; ++t) p[src].push_back("t" + std::to_string(rng() % 8));
    }
    for (std::size_t n = 1; n <= 6; ++n) {
      std::size_t hit = 0;
      for (const auto& [src, tgts] : g.entries()) {
        const std::set<std::string> gold(tgts.begin(), tgts.end());
        auto it = p.find(src);
        if (it == p.end()) continue;
        std::set<std::string> top(it->second.begin(),
                                  it->second.begin() + std::min(n, it->second.size()));
        std::vector<std::string> both;
        std::set_intersection(gold.begin(), gold.end(), top.begin(), top.end(), std::back_inserter(both));
        hit += !both.empty();
      }
      EXPECT_DOUBLE_EQ(recall_at_n(p, g, n), static_cast<double>(hit) / g.size());
    }
  }
}

TEST(RecallProperty, MonotoneInN) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 50; ++trial) {
    GoldLexicon g;
    RankedPredictions p;
    for (int w = 0; w < 20; ++w) {
      const std::string src = "s" + std::to_string(w);
      g.add(src, "t" + std::to_string(rng() % 10));
      for (int t = 0; t < 8; ++t) p[src].push_back("t" + std::to_string(rng() % 10));
    }
    double prev = 0.0;
    for (std::size_t n = 1; n <= 10; ++n) {
      const double r = recall_at_n(p, g, n);
      EXPECT_GE(r, prev);
      prev = r;
    }
  }
}

TEST(Hubness, IdentityAndCollapse) {
  std::vector<std::size_t> identity{0, 1, 2, 3};
  auto h = hubness(identity, 1);
  EXPECT_EQ(h.max_in_degree, 1u);
  EXPECT_EQ(h.n_hubs, 0u);
  std::vector<std::size_t> collapse(7, 0);
  h = hubness(collapse, 1, 5);
  EXPECT_EQ(h.max_in_degree, 7u);
  EXPECT_EQ(h.n_hubs, 1u);
  EXPECT_EQ(h.in_degree.size(), 5u);
}

TEST(Hubness, MatchesCountingOracle) {
  std::mt19937_64 rng(62);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::size_t> targets(1 + rng() % 40);
    for (auto& t : targets) t = rng() % 12;
    const std::size_t h = rng() % 4;
    const auto got = hubness(targets, h, 12);
    const auto deg = oracle::in_degree(targets, 12);
    EXPECT_EQ(got.in_degree, deg);
    EXPECT_EQ(got.max_in_degree, *std::max_element(deg.begin(), deg.end()));
    EXPECT_EQ(got.n_hubs, static_cast<std::size_t>(std::count_if(deg.begin(), deg.end(),
                                                                 [&](std::size_t d) { return d > h; })));
  }
}

TEST(Synthetic, SameSeedIsBitwiseIdentical) {
  SyntheticSpec spec;
  spec.n_words = 200;
  spec.noise_sigma = 0.02;
  spec.corrupt_frac = 0.3;
  spec.seed = 99;
  const auto a = gen_synthetic(spec);
  const auto b = gen_synthetic(spec);
  EXPECT_EQ(a.src.matrix(), b.src.matrix());
  EXPECT_EQ(a.tgt.matrix(), b.tgt.matrix());
  EXPECT_EQ(a.fp_src.fp(), b.fp_src.fp());
  EXPECT_EQ(a.fp_tgt.fp(), b.fp_tgt.fp());
  EXPECT_EQ(a.init, b.init);
  EXPECT_EQ(a.permutation, b.permutation);
  EXPECT_EQ(a.planted_map.matrix(), b.planted_map.matrix());
  spec.seed = 100;
  EXPECT_NE(gen_synthetic(spec).src.matrix(), a.src.matrix());
}

TEST(Synthetic, NoiseFreeInitRecoversRotation) {
  SyntheticSpec spec;
  spec.seed = 4;
  const auto inst = gen_synthetic(spec);
  Matrix x(inst.init.size(), spec.dim), y(inst.init.size(), spec.dim);
  for (std::size_t i = 0; i < inst.init.size(); ++i) {
    x.row(i) = inst.src.matrix().row(inst.init.pairs()[i].src);
    y.row(i) = inst.tgt.matrix().row(inst.init.pairs()[i].tgt);
  }
  EXPECT_LE((procrustes(x, y).matrix() - inst.planted_map.matrix()).norm(), 1e-6);
}

TEST(Synthetic, VisualWordCount) {
  SyntheticSpec spec;
  spec.n_words = 2000;
  spec.visual_frac = 0.4;
  EXPECT_EQ(gen_synthetic(spec).visual_words.size(), 800u);
}

TEST(Synthetic, InvariantsHold) {
  SyntheticSpec spec;
  spec.n_words = 300;
  spec.noise_sigma = 0.01;
  spec.corrupt_frac = 0.5;
  spec.seed = 3;
  const auto inst = gen_synthetic(spec);
  EXPECT_LE(inst.planted_map.orthogonality_error(), 1e-12);
  // gold is a bijection and agrees with the permutation
  std::set<std::string> targets;
  for (const auto& [src, tgts] : inst.gold.entries()) {
    ASSERT_EQ(tgts.size(), 1u);
    targets.insert(tgts[0]);
  }
  EXPECT_EQ(inst.gold.size(), 300u);
  EXPECT_EQ(targets.size(), 300u);
  for (std::size_t t = 0; t < 300; ++t) {
    EXPECT_EQ(inst.inverse[inst.permutation[t]], t);
    EXPECT_TRUE(inst.gold.accepts(inst.src.words()[inst.permutation[t]], inst.tgt.words()[t]));
  }
  // corrupted share of the init
  std::size_t wrong = 0;
  for (const auto& p : inst.init.pairs()) wrong += inst.inverse[p.src] != p.tgt;
  EXPECT_EQ(inst.init.size(), 30u);
  EXPECT_EQ(wrong, 15u);
}

TEST(Synthetic, VisualFingerprintsCorrelateAcrossLanguages) {
  SyntheticSpec spec;
  spec.noise_sigma = 0.01;
  spec.seed = 2;
  const auto inst = gen_synthetic(spec);
  for (std::size_t s : inst.visual_words) {
    const std::size_t t = inst.inverse[s];
    const auto a = inst.fp_src.fp().row(static_cast<Eigen::Index>(s));
    const auto b = inst.fp_tgt.fp().row(static_cast<Eigen::Index>(t));
    EXPECT_GE(a.dot(b) / (a.norm() * b.norm()), 0.9);
  }
}

TEST(Synthetic, FileRoundTrip) {
  testing_support::TempDir dir;
  SyntheticSpec spec;
  spec.n_words = 120;
  spec.dim = 10;
  spec.n_images = 30;
  spec.noise_sigma = 0.01;
  spec.seed = 6;
  const auto inst = gen_synthetic(spec);
  write_synthetic(inst, dir.path());
  const auto src = load_embeddings(dir / "src.vec");
  EXPECT_EQ(src.words(), inst.src.words());
  EXPECT_EQ(src.matrix(), inst.src.matrix());
  EXPECT_EQ(load_embeddings(dir / "tgt.vec").matrix(), inst.tgt.matrix());
  EXPECT_EQ(load_fingerprints(dir / "src.fp").fp(), inst.fp_src.fp());
  EXPECT_EQ(load_lexicon(dir / "gold.txt"), inst.gold);
  const auto init = load_mapping(dir / "init.tsv", inst.src.words(), inst.tgt.words());
  ASSERT_EQ(init.size(), inst.init.size());
  for (std::size_t i = 0; i < init.size(); ++i) {
    EXPECT_EQ(init.pairs()[i].src, inst.init.pairs()[i].src);
    EXPECT_EQ(init.pairs()[i].tgt, inst.init.pairs()[i].tgt);
  }
  EXPECT_LE((load_linear_map(dir / "planted_map.bin").matrix() - inst.planted_map.matrix()).norm(),
            1e-6);
  EXPECT_TRUE(std::filesystem::exists(dir / "spec.json"));
}

TEST(Synthetic, SpecValidation) {
  SyntheticSpec spec;
  spec.n_words = 10;
  spec.dim = 32;
  EXPECT_THROW(spec.validate(), InvalidArgument);
  spec = SyntheticSpec{};
  spec.visual_frac = 1.5;
  EXPECT_THROW(spec.validate(), InvalidArgument);
  spec = SyntheticSpec{};
  spec.noise_sigma = -1.0;
  EXPECT_THROW(spec.validate(), InvalidArgument);
}

TEST(RandomOrthogonal, IsOrthogonalAndSeeded) {
  const Matrix q = random_orthogonal(20, 3);
  EXPECT_LE(orthogonality_error(q), 1e-12);
  EXPECT_EQ(q, random_orthogonal(20, 3));
}
