#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>

#include "walip/fingerprint.hpp"
#include "walip/types.hpp"

namespace walip {

enum class EmbeddingFormat { Text, Binary };

/// Binary files start with "WLP1"; anything else is treated as text.
EmbeddingFormat detect_format(const std::filesystem::path& path);

/// Text: fastText layout ("<n> <d>" header, then "<word> <v1> ... <vd>").
/// Binary: "WLP1", u64 n, u64 d, n*d binary32 row-major, then n words as
/// u32 byte length + UTF-8 bytes; all little-endian. Values are stored as
/// binary32 in both formats. Words are NFC-normalized on load.
EmbeddingTable load_embeddings(const std::filesystem::path& path, EmbeddingFormat format);
EmbeddingTable load_embeddings(const std::filesystem::path& path);
EmbeddingTable read_embeddings_text(std::istream& in);
EmbeddingTable read_embeddings_binary(std::istream& in);

void save_embeddings(const EmbeddingTable& table, const std::filesystem::path& path,
                     EmbeddingFormat format);
void write_embeddings_text(const EmbeddingTable& table, std::ostream& out);
void write_embeddings_binary(const EmbeddingTable& table, std::ostream& out);

/// One whitespace-separated "src tgt" pair per line; blank lines skipped.
GoldLexicon load_lexicon(const std::filesystem::path& path);
GoldLexicon read_lexicon(std::istream& in);
void save_lexicon(const GoldLexicon& lexicon, const std::filesystem::path& path);

/// TSV rows "src<TAB>tgt<TAB>score", score with 9 significant digits.
void save_mapping(const WordMapping& mapping, std::span<const std::string> src_words,
                  std::span<const std::string> tgt_words, const std::filesystem::path& path);
void write_mapping(const WordMapping& mapping, std::span<const std::string> src_words,
                   std::span<const std::string> tgt_words, std::ostream& out);
WordMapping load_mapping(const std::filesystem::path& path, std::span<const std::string> src_words,
                         std::span<const std::string> tgt_words);
WordMapping read_mapping(std::istream& in, std::span<const std::string> src_words,
                         std::span<const std::string> tgt_words);

/// Same TSV layout, several rows per source word in rank order. Only the
/// first two columns are required.
RankedPredictions load_predictions(const std::filesystem::path& path);
RankedPredictions read_predictions(std::istream& in);
void save_predictions(const RankedPredictions& predictions, const std::filesystem::path& path);

/// Binary matrix layout with n = d; row words are "r0", "r1", ...
void save_linear_map(const LinearMap& map, const std::filesystem::path& path);
/// Stored values are binary32, so orthogonality is checked at `tolerance`.
LinearMap load_linear_map(const std::filesystem::path& path, double tolerance = 1e-5);

/// Fingerprint rows in either embedding format. Filtered tables also write
/// "<path>.json" with the active indices and filter parameters.
void save_fingerprints(const FingerprintTable& table, const std::filesystem::path& path,
                       EmbeddingFormat format, const std::optional<FilterParams>& params = {});
FingerprintTable load_fingerprints(const std::filesystem::path& path);
std::filesystem::path fingerprint_sidecar_path(const std::filesystem::path& path);

}  // namespace walip
