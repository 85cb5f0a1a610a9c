#pragma once

#include <cstddef>
#include <vector>

#include "walip/types.hpp"

namespace walip {

struct RankedTarget {
  std::size_t tgt = 0;
  double score = 0.0;
};

/// Neighbour fan-out of the double k-NN baseline: ceil(sqrt(n)).
std::size_t clip_nn_fanout(std::size_t n);

/// Double k-NN through a shared image set, k = ceil(sqrt(n)): each source
/// word's k nearest images (source-side image embeddings), then each image's
/// k nearest target words (target-side image embeddings). Targets are ranked
/// by their best image-word cosine (ties to lowest index); the top n are
/// returned per source word. Both image tables must list the same images in
/// the same order.
std::vector<std::vector<RankedTarget>> clip_nn_baseline(const Matrix& src_text,
                                                        const Matrix& src_images,
                                                        const Matrix& tgt_images,
                                                        const Matrix& tgt_text, std::size_t n);

/// Single image table shared by both languages.
std::vector<std::vector<RankedTarget>> clip_nn_baseline(const Matrix& src_text,
                                                        const Matrix& images,
                                                        const Matrix& tgt_text, std::size_t n);

}  // namespace walip
