#include "walip/clip_nn.hpp"

#include <algorithm>
#include <numeric>

#include "walip/error.hpp"
#include "walip/parallel.hpp"
#include "walip/similarity.hpp"

namespace walip {
namespace {

std::vector<std::size_t> top_indices(const Eigen::Ref<const Eigen::RowVectorXd>& row,
                                     std::size_t k) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(row.size()));
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  k = std::min(k, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                    [&](std::size_t a, std::size_t b) {
                      const double sa = row(static_cast<Eigen::Index>(a));
                      const double sb = row(static_cast<Eigen::Index>(b));
                      return sa > sb || (sa == sb && a < b);
                    });
  idx.resize(k);
  return idx;
}

}  // namespace

std::size_t clip_nn_fanout(std::size_t n) {
  std::size_t k = 0;
  while (k * k < n) ++k;
  return k;
}

std::vector<std::vector<RankedTarget>> clip_nn_baseline(const Matrix& src_text,
                                                        const Matrix& src_images,
                                                        const Matrix& tgt_images,
                                                        const Matrix& tgt_text, std::size_t n) {
  if (n < 1) throw InvalidArgument("clip-nn: n must be >= 1");
  if (src_text.cols() != src_images.cols() || tgt_text.cols() != tgt_images.cols()) {
    throw InvalidArgument("clip-nn: text and image embeddings differ in dimension");
  }
  if (src_images.rows() != tgt_images.rows()) {
    throw InvalidArgument("clip-nn: source and target image tables differ in size");
  }
  const std::size_t k = clip_nn_fanout(n);
  const Matrix word_to_image = cosine_matrix(src_text, src_images).scores;
  const Matrix image_to_word = cosine_matrix(tgt_images, tgt_text).scores;

  // Each image's k nearest target words do not depend on the query.
  std::vector<std::vector<std::size_t>> image_neighbours(static_cast<std::size_t>(image_to_word.rows()));
  parallel_for(image_neighbours.size(), [&](std::size_t g) {
    image_neighbours[g] = top_indices(image_to_word.row(static_cast<Eigen::Index>(g)), k);
  });

  std::vector<std::vector<RankedTarget>> out(static_cast<std::size_t>(src_text.rows()));
  parallel_for(out.size(), [&](std::size_t i) {
    std::vector<RankedTarget> pool;
    for (std::size_t g : top_indices(word_to_image.row(static_cast<Eigen::Index>(i)), k)) {
      for (std::size_t t : image_neighbours[g]) {
        const double s = image_to_word(static_cast<Eigen::Index>(g), static_cast<Eigen::Index>(t));
        auto it = std::find_if(pool.begin(), pool.end(),
                               [t](const RankedTarget& r) { return r.tgt == t; });
        if (it == pool.end()) {
          pool.push_back({t, s});
        } else {
          it->score = std::max(it->score, s);
        }
      }
    }
    std::sort(pool.begin(), pool.end(), [](const RankedTarget& a, const RankedTarget& b) {
      return a.score > b.score || (a.score == b.score && a.tgt < b.tgt);
    });
    if (pool.size() > n) pool.resize(n);
    out[i] = std::move(pool);
  });
  return out;
}

std::vector<std::vector<RankedTarget>> clip_nn_baseline(const Matrix& src_text,
                                                        const Matrix& images,
                                                        const Matrix& tgt_text, std::size_t n) {
  return clip_nn_baseline(src_text, images, images, tgt_text, n);
}

}  // namespace walip
