#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>

#include "walip/types.hpp"

namespace walip {

/// Length of the longest common contiguous substring, in code points.
std::size_t longest_common_substring(std::u32string_view a, std::u32string_view b);

/// Pairs each source word with the target sharing the longest case-folded
/// common substring, provided that substring has at least min_len code points
/// and covers at least half (rounded up) of the longer word. Ties go to the
/// lowest target index. score = LCS / longer word length.
WordMapping substring_init(std::span<const std::string> src_words,
                           std::span<const std::string> tgt_words, std::size_t min_len);

/// Code point substituted for source characters with no counterpart; lies
/// outside the Unicode range so it never matches a target character.
inline constexpr char32_t kUnmappedChar = 0x110000;

/// Maps the source character of frequency rank r (over the case-folded
/// dictionary) to the target character of rank r. Frequency ties rank the
/// smaller code point first.
std::map<char32_t, char32_t> character_map(std::span<const std::string> src_words,
                                           std::span<const std::string> tgt_words);

/// Transliterates source words through character_map, then runs
/// substring_init against the target words.
WordMapping char_map_init(std::span<const std::string> src_words,
                          std::span<const std::string> tgt_words, std::size_t min_len);

}  // namespace walip
