#include "walip/evalbench.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include <json.hpp>

#include "walip/error.hpp"
#include "walip/io.hpp"

namespace walip {
namespace {

// Fingerprint synthesis. Visual rows: base + cluster bump + word-specific
// profile; non-visual rows: base + small flat noise (independent per language).
constexpr double kFpBase = 0.2;
constexpr double kFpClusterBump = 0.08;
constexpr double kFpProfile = 0.06;
constexpr double kFpFlat = 0.01;
constexpr std::size_t kImagesPerCluster = 10;

double to_float32(double v) { return static_cast<double>(static_cast<float>(v)); }

void quantize(Matrix& m) { m = m.unaryExpr(&to_float32); }

void normalize_row(Eigen::Ref<Eigen::RowVectorXd> row) {
  const double n = row.norm();
  if (n > 0.0) row /= n;
}

std::vector<std::size_t> shuffled(std::size_t n, std::mt19937_64& rng) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  std::shuffle(v.begin(), v.end(), rng);
  return v;
}

std::vector<std::string> names(const char* prefix, std::size_t n) {
  std::vector<std::string> out;
  out.reserve(n);
  const std::size_t width = std::to_string(n > 0 ? n - 1 : 0).size();
  for (std::size_t i = 0; i < n; ++i) {
    std::string idx = std::to_string(i);
    out.push_back(prefix + std::string(width - idx.size(), '0') + idx);
  }
  return out;
}

std::size_t fraction_count(double frac, std::size_t n) {
  return static_cast<std::size_t>(std::floor(frac * static_cast<double>(n) + 1e-9));
}

Matrix orthogonal_from(std::mt19937_64& rng, std::size_t d) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(d);
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

}  // namespace

double recall_at_n(const RankedPredictions& predictions, const GoldLexicon& gold, std::size_t n) {
  if (n < 1) throw InvalidArgument("recall@n needs n >= 1");
  if (gold.empty()) throw InvalidArgument("recall@n over an empty gold lexicon");
  std::size_t hits = 0;
  for (const auto& [src, accepted] : gold.entries()) {
    auto it = predictions.find(src);
    if (it == predictions.end()) continue;
    const auto& ranked = it->second;
    const std::size_t limit = std::min(n, ranked.size());
    for (std::size_t r = 0; r < limit; ++r) {
      if (std::find(accepted.begin(), accepted.end(), ranked[r]) != accepted.end()) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(gold.size());
}

HubnessStats hubness(std::span<const std::size_t> targets, std::size_t threshold,
                     std::size_t n_targets) {
  HubnessStats s;
  std::size_t size = n_targets;
  for (std::size_t t : targets) size = std::max(size, t + 1);
  s.in_degree.assign(size, 0);
  for (std::size_t t : targets) ++s.in_degree[t];
  for (std::size_t deg : s.in_degree) {
    s.max_in_degree = std::max(s.max_in_degree, deg);
    if (deg > threshold) ++s.n_hubs;
  }
  return s;
}

HubnessStats hubness(const WordMapping& mapping, std::size_t threshold, std::size_t n_targets) {
  std::vector<std::size_t> targets;
  targets.reserve(mapping.size());
  for (const auto& p : mapping.pairs()) targets.push_back(p.tgt);
  return hubness(targets, threshold, n_targets);
}

void SyntheticSpec::validate() const {
  if (dim < 1) throw InvalidArgument("synthetic: dim must be >= 1");
  if (n_words < dim) throw InvalidArgument("synthetic: n_words must be >= dim");
  if (n_images < 1) throw InvalidArgument("synthetic: n_images must be >= 1");
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(visual_frac)) throw InvalidArgument("synthetic: visual_frac must lie in [0, 1]");
  if (!unit(corrupt_frac)) throw InvalidArgument("synthetic: corrupt_frac must lie in [0, 1]");
  if (!unit(init_frac)) throw InvalidArgument("synthetic: init_frac must lie in [0, 1]");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
    throw InvalidArgument("synthetic: noise_sigma must be >= 0");
  }
}

Matrix random_orthogonal(std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return orthogonal_from(rng, d);
}

SyntheticInstance gen_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t n = spec.n_words;
  const auto rows = static_cast<Eigen::Index>(n);
  const auto d = static_cast<Eigen::Index>(spec.dim);
  const auto g = static_cast<Eigen::Index>(spec.n_images);

  const Matrix r = orthogonal_from(rng, spec.dim);

  Matrix src(rows, d);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) src(i, j) = normal(rng);
    normalize_row(src.row(i));
  }
  quantize(src);

  const std::vector<std::size_t> perm = shuffled(n, rng);
  std::vector<std::size_t> inverse(n);
  for (std::size_t i = 0; i < n; ++i) inverse[perm[i]] = i;

  Matrix tgt(rows, d);
  for (Eigen::Index i = 0; i < rows; ++i) {
    tgt.row(i) = src.row(static_cast<Eigen::Index>(perm[static_cast<std::size_t>(i)])) * r;
    for (Eigen::Index j = 0; j < d; ++j) tgt(i, j) += spec.noise_sigma * normal(rng);
    normalize_row(tgt.row(i));
  }
  quantize(tgt);

  // Fingerprints.
  const std::size_t n_visual = fraction_count(spec.visual_frac, n);
  std::vector<std::size_t> order = shuffled(n, rng);
  std::vector<char> is_visual(n, 0);
  for (std::size_t t = 0; t < n_visual; ++t) is_visual[order[t]] = 1;

  const std::size_t n_clusters = std::max<std::size_t>(1, spec.n_images / kImagesPerCluster);
  std::uniform_int_distribution<std::size_t> pick_cluster(0, n_clusters - 1);
  std::vector<std::size_t> image_cluster(spec.n_images);
  for (auto& c : image_cluster) c = pick_cluster(rng);

  Matrix latent = Matrix::Constant(rows, g, kFpBase);
  for (Eigen::Index w = 0; w < rows; ++w) {
    if (!is_visual[static_cast<std::size_t>(w)]) continue;
    const std::size_t c = pick_cluster(rng);
    for (Eigen::Index j = 0; j < g; ++j) {
      latent(w, j) += kFpProfile * normal(rng) +
                      (image_cluster[static_cast<std::size_t>(j)] == c ? kFpClusterBump : 0.0);
    }
  }
  auto observe = [&](Eigen::Index w) {
    Eigen::RowVectorXd row = latent.row(w);
    const bool visual = is_visual[static_cast<std::size_t>(w)];
    for (Eigen::Index j = 0; j < g; ++j) {
      row(j) += visual ? spec.noise_sigma * normal(rng) : kFpFlat * normal(rng);
    }
    return Eigen::RowVectorXd(row.cwiseMax(-1.0).cwiseMin(1.0));
  };
  Matrix fp_src(rows, g), fp_tgt(rows, g);
  for (Eigen::Index w = 0; w < rows; ++w) fp_src.row(w) = observe(w);
  for (Eigen::Index i = 0; i < rows; ++i) {
    fp_tgt.row(i) = observe(static_cast<Eigen::Index>(perm[static_cast<std::size_t>(i)]));
  }
  quantize(fp_src);
  quantize(fp_tgt);

  // Planted init: a gold subset, a fraction of it reassigned among itself.
  const std::size_t m = fraction_count(spec.init_frac, n);
  const std::vector<std::size_t> chosen_order = shuffled(n, rng);
  std::vector<std::size_t> chosen(chosen_order.begin(), chosen_order.begin() + static_cast<std::ptrdiff_t>(m));
  std::vector<std::size_t> targets(m);
  for (std::size_t t = 0; t < m; ++t) targets[t] = inverse[chosen[t]];
  const std::size_t corrupt = fraction_count(spec.corrupt_frac, m);
  if (corrupt >= 2) {
    std::rotate(targets.begin(), targets.begin() + 1,
                targets.begin() + static_cast<std::ptrdiff_t>(corrupt));
  } else if (corrupt == 1 && n > 1) {
    std::uniform_int_distribution<std::size_t> other(0, n - 2);
    std::size_t t = other(rng);
    if (t >= targets[0]) ++t;
    targets[0] = t;
  }
  std::vector<std::size_t> init_order(m);
  std::iota(init_order.begin(), init_order.end(), std::size_t{0});
  std::sort(init_order.begin(), init_order.end(),
            [&](std::size_t a, std::size_t b) { return chosen[a] < chosen[b]; });
  WordMapping init;
  for (std::size_t t : init_order) init.add(chosen[t], targets[t], 1.0);

  auto src_words = names("s", n);
  auto tgt_words = names("t", n);
  GoldLexicon gold;
  for (std::size_t i = 0; i < n; ++i) gold.add(src_words[perm[i]], tgt_words[i]);

  std::vector<std::size_t> visual;
  for (std::size_t w = 0; w < n; ++w) {
    if (is_visual[w]) visual.push_back(w);
  }

  return SyntheticInstance{
      spec,
      EmbeddingTable(src_words, std::move(src)),
      EmbeddingTable(tgt_words, std::move(tgt)),
      LinearMap(r),
      std::move(gold),
      FingerprintTable(src_words, std::move(fp_src)),
      FingerprintTable(tgt_words, std::move(fp_tgt)),
      std::move(init),
      perm,
      std::move(inverse),
      std::move(visual),
  };
}

void write_synthetic(const SyntheticInstance& inst, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());

  save_embeddings(inst.src, dir / "src.vec", EmbeddingFormat::Text);
  save_embeddings(inst.tgt, dir / "tgt.vec", EmbeddingFormat::Text);
  save_fingerprints(inst.fp_src, dir / "src.fp", EmbeddingFormat::Text);
  save_fingerprints(inst.fp_tgt, dir / "tgt.fp", EmbeddingFormat::Text);
  save_lexicon(inst.gold, dir / "gold.txt");
  save_mapping(inst.init, inst.src.words(), inst.tgt.words(), dir / "init.tsv");
  save_linear_map(inst.planted_map, dir / "planted_map.bin");

  const auto& s = inst.spec;
  nlohmann::json doc{
      {"n_words", s.n_words},         {"dim", s.dim},
      {"n_images", s.n_images},       {"visual_frac", s.visual_frac},
      {"noise_sigma", s.noise_sigma}, {"corrupt_frac", s.corrupt_frac},
      {"init_frac", s.init_frac},     {"seed", s.seed},
      {"n_visual", inst.visual_words.size()},
      {"init_pairs", inst.init.size()},
  };
  std::ofstream out(dir / "spec.json");
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("failed writing '" + (dir / "spec.json").string() + "'");
}

HubInstance gen_hub_instance(std::uint64_t seed, std::size_t n_src, std::size_t n_tgt,
                             std::size_t dim, std::size_t n_hubs) {
  if (dim < 2 || n_src < 1 || n_tgt <= n_hubs) {
    throw InvalidArgument("gen_hub_instance: need dim >= 2 and more targets than hubs");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto d = static_cast<Eigen::Index>(dim);
  const double spread = 1.0 / std::sqrt(static_cast<double>(dim));
  constexpr double kShared = 0.3;
  constexpr double kHubJitter = 0.05;

  Eigen::RowVectorXd mean(d);
  for (Eigen::Index j = 0; j < d; ++j) mean(j) = normal(rng);
  mean.normalize();

  auto cloud = [&](std::size_t count) {
    Matrix m(static_cast<Eigen::Index>(count), d);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < d; ++j) m(i, j) = kShared * mean(j) + spread * normal(rng);
      normalize_row(m.row(i));
    }
    return m;
  };

  HubInstance inst{cloud(n_src), cloud(n_tgt), {}};
  const std::vector<std::size_t> order = shuffled(n_tgt, rng);
  for (std::size_t h = 0; h < n_hubs; ++h) {
    const auto row = static_cast<Eigen::Index>(order[h]);
    for (Eigen::Index j = 0; j < d; ++j) inst.tgt(row, j) = mean(j) + kHubJitter * spread * normal(rng);
    normalize_row(inst.tgt.row(row));
    inst.hubs.push_back(order[h]);
  }
  std::sort(inst.hubs.begin(), inst.hubs.end());
  return inst;
}

}  // namespace walip
