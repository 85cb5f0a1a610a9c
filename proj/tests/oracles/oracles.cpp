#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace oracle {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) s += a[t] * b[t];
  return s;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  return dot(a, b) / (std::sqrt(dot(a, a)) * std::sqrt(dot(b, b)));
}

Rows cosine(const Rows& x, const Rows& y) {
  Rows out(x.size(), std::vector<double>(y.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) out[i][j] = cosine(x[i], y[j]);
  }
  return out;
}

double quantile(std::vector<double> values, double q) {
  std::sort(values.begin(), values.end());
  const double k = static_cast<double>(values.size());
  for (std::size_t r = 1; r <= values.size(); ++r) {
    if (static_cast<double>(r) / k >= q) return values[r - 1];
  }
  return values.back();
}

double mean_top_k(std::vector<double> sims, std::size_t k) {
  std::sort(sims.begin(), sims.end());
  double s = 0.0;
  for (std::size_t t = 0; t < k; ++t) s += sims[sims.size() - 1 - t];
  return s / static_cast<double>(k);
}

Rows csls(const Rows& x, const Rows& y, std::size_t k) {
  std::vector<double> rx(x.size()), ry(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    std::vector<double> sims;
    for (const auto& yj : y) sims.push_back(cosine(x[i], yj));
    rx[i] = mean_top_k(sims, k);
  }
  for (std::size_t j = 0; j < y.size(); ++j) {
    std::vector<double> sims;
    for (const auto& xi : x) sims.push_back(cosine(xi, y[j]));
    ry[j] = mean_top_k(sims, k);
  }
  Rows out(x.size(), std::vector<double>(y.size()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) {
      out[i][j] = 2.0 * cosine(x[i], y[j]) - rx[i] - ry[j];
    }
  }
  return out;
}

Filtered visual_word_filter(const Rows& fp, double max_sim_q, double sparsify_q) {
  // f_max per word
  std::vector<double> fmax;
  for (const auto& row : fp) fmax.push_back(*std::max_element(row.begin(), row.end()));
  const double median = quantile(fmax, max_sim_q);

  Filtered out;
  out.fp.assign(fp.size(), std::vector<double>(fp.empty() ? 0 : fp[0].size(), 0.0));
  for (std::size_t i = 0; i < fp.size(); ++i) {
    if (!(fmax[i] >= median)) continue;
    const double cut = quantile(fp[i], sparsify_q);
    std::vector<double> row = fp[i];
    for (double& v : row) {
      if (v < cut) v = 0.0;
    }
    double norm = 0.0;
    for (double v : row) norm += v * v;
    norm = std::sqrt(norm);
    if (norm == 0.0) continue;
    for (double& v : row) v /= norm;
    out.fp[i] = row;
    out.active.push_back(i);
  }
  return out;
}

std::vector<Pair> matching_filter(const Rows& scores, double q) {
  std::vector<double> all;
  for (const auto& row : scores) all.insert(all.end(), row.begin(), row.end());
  const double c_bar = quantile(all, q);
  std::vector<Pair> out;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    std::size_t best = 0;
    for (std::size_t j = 0; j < scores[i].size(); ++j) {
      if (scores[i][j] > scores[i][best]) best = j;
    }
    if (scores[i][best] >= c_bar) out.push_back({i, best, scores[i][best]});
  }
  return out;
}

std::vector<Pair> topk(const Rows& scores, std::size_t k) {
  std::vector<Pair> out;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    std::vector<std::pair<double, std::size_t>> row;
    for (std::size_t j = 0; j < scores[i].size(); ++j) row.push_back({-scores[i][j], j});
    std::sort(row.begin(), row.end());
    for (std::size_t t = 0; t < k; ++t) out.push_back({i, row[t].second, -row[t].first});
  }
  return out;
}

std::size_t lcs(const std::u32string& a, const std::u32string& b) {
  std::size_t best = 0;
  for (std::size_t s = 0; s < a.size(); ++s) {
    for (std::size_t len = 1; s + len <= a.size(); ++len) {
      if (len > best && b.find(a.substr(s, len)) != std::u32string::npos) best = len;
    }
  }
  return best;
}

std::vector<std::vector<std::pair<std::size_t, double>>> double_knn(const Rows& src_text,
                                                                   const Rows& src_images,
                                                                   const Rows& tgt_images,
                                                                   const Rows& tgt_text,
                                                                   std::size_t n) {
  std::size_t k = 1;
  while (k * k < n) ++k;
  auto nearest = [](const std::vector<double>& q, const Rows& pool, std::size_t k) {
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t j = 0; j < pool.size(); ++j) all.push_back({-cosine(q, pool[j]), j});
    std::sort(all.begin(), all.end());
    all.resize(std::min(k, all.size()));
    return all;
  };
  std::vector<std::vector<std::pair<std::size_t, double>>> out;
  for (const auto& word : src_text) {
    std::map<std::size_t, double> best;
    for (const auto& [neg, img] : nearest(word, src_images, k)) {
      for (const auto& [negt, t] : nearest(tgt_images[img], tgt_text, k)) {
        const double score = -negt;
        auto it = best.find(t);
        if (it == best.end() || score > it->second) best[t] = score;
      }
    }
    std::vector<std::pair<double, std::size_t>> ranked;
    for (const auto& [t, s] : best) ranked.push_back({-s, t});
    std::sort(ranked.begin(), ranked.end());
    std::vector<std::pair<std::size_t, double>> row;
    for (std::size_t r = 0; r < ranked.size() && r < n; ++r) row.push_back({ranked[r].second, -ranked[r].first});
    out.push_back(row);
  }
  return out;
}

double loss(const Rows& a, const Rows& b, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (const auto& [i, j] : pairs) {
    for (std::size_t t = 0; t < a[i].size(); ++t) {
      diff += (a[i][t] - b[j][t]) * (a[i][t] - b[j][t]);
      na += a[i][t] * a[i][t];
      nb += b[j][t] * b[j][t];
    }
  }
  return std::sqrt(diff) / (std::sqrt(na) + std::sqrt(nb));
}

std::vector<std::size_t> in_degree(const std::vector<std::size_t>& targets, std::size_t n_targets) {
  std::vector<std::size_t> deg(n_targets, 0);
  for (std::size_t t : targets) {
    if (t >= deg.size()) deg.resize(t + 1, 0);
    ++deg[t];
  }
  return deg;
}

}  // namespace oracle
