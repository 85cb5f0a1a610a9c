#include "walip/lexical_init.hpp"

#include <algorithm>
#include <unordered_map>
#include <vector>

#include "walip/error.hpp"
#include "walip/parallel.hpp"
#include "walip/text.hpp"

namespace walip {
namespace {

std::vector<std::u32string> fold_all(std::span<const std::string> words) {
  std::vector<std::u32string> out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(text::fold_case(w));
  return out;
}

struct Match {
  std::size_t tgt = 0;
  std::size_t lcs = 0;
  double score = 0.0;
  bool found = false;
};

WordMapping match_folded(const std::vector<std::u32string>& src,
                         const std::vector<std::u32string>& tgt, std::size_t min_len) {
  if (min_len < 1) throw InvalidArgument("min_len must be >= 1");
  std::vector<Match> best(src.size());
  parallel_for(src.size(), [&](std::size_t i) {
    Match& m = best[i];
    for (std::size_t j = 0; j < tgt.size(); ++j) {
      const std::size_t longer = std::max(src[i].size(), tgt[j].size());
      // Cheap bound: the LCS cannot exceed the shorter word.
      const std::size_t shorter = std::min(src[i].size(), tgt[j].size());
      if (shorter < min_len || shorter < (longer + 1) / 2 || (m.found && shorter <= m.lcs)) {
        continue;
      }
      const std::size_t lcs = longest_common_substring(src[i], tgt[j]);
      if (lcs < min_len || lcs < (longer + 1) / 2) continue;
      if (!m.found || lcs > m.lcs) {
        m = {j, lcs, static_cast<double>(lcs) / static_cast<double>(longer), true};
      }
    }
  });
  WordMapping mapping;
  for (std::size_t i = 0; i < best.size(); ++i) {
    if (best[i].found) mapping.add(i, best[i].tgt, best[i].score);
  }
  return mapping;
}

std::vector<char32_t> rank_characters(const std::vector<std::u32string>& words) {
  std::unordered_map<char32_t, std::size_t> counts;
  for (const auto& w : words) {
    for (char32_t c : w) ++counts[c];
  }
  std::vector<std::pair<char32_t, std::size_t>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second > b.second || (a.second == b.second && a.first < b.first);
  });
  std::vector<char32_t> out;
  out.reserve(ranked.size());
  for (const auto& [c, n] : ranked) out.push_back(c);
  return out;
}

}  // namespace

std::size_t longest_common_substring(std::u32string_view a, std::u32string_view b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  std::size_t best = 0;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : 0;
      best = std::max(best, cur[j]);
    }
    std::swap(prev, cur);
  }
  return best;
}

WordMapping substring_init(std::span<const std::string> src_words,
                           std::span<const std::string> tgt_words, std::size_t min_len) {
  return match_folded(fold_all(src_words), fold_all(tgt_words), min_len);
}

std::map<char32_t, char32_t> character_map(std::span<const std::string> src_words,
                                           std::span<const std::string> tgt_words) {
  const auto src_rank = rank_characters(fold_all(src_words));
  const auto tgt_rank = rank_characters(fold_all(tgt_words));
  std::map<char32_t, char32_t> map;
  for (std::size_t r = 0; r < src_rank.size(); ++r) {
    map[src_rank[r]] = r < tgt_rank.size() ? tgt_rank[r] : kUnmappedChar;
  }
  return map;
}

WordMapping char_map_init(std::span<const std::string> src_words,
                          std::span<const std::string> tgt_words, std::size_t min_len) {
  if (src_words.empty() || tgt_words.empty()) {
    throw InvalidArgument("char_map_init needs non-empty dictionaries");
  }
  const auto map = character_map(src_words, tgt_words);
  std::vector<std::u32string> transliterated = fold_all(src_words);
  for (auto& w : transliterated) {
    for (auto& c : w) c = map.at(c);
  }
  return match_folded(transliterated, fold_all(tgt_words), min_len);
}

}  // namespace walip
