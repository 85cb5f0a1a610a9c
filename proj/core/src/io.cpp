#include "walip/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cfloat>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "walip/error.hpp"
#include "walip/text.hpp"

namespace walip {
namespace fs = std::filesystem;

namespace {

constexpr std::array<char, 4> kMagic{'W', 'L', 'P', '1'};

std::ifstream open_in(const fs::path& path, bool binary) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const fs::path& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

/// Splits on runs of spaces/tabs; trailing CR is ignored.
std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_blank(line[i])) ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_blank(line[i])) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

bool is_blank_line(std::string_view line) {
  for (char c : line) {
    if (!is_blank(c)) return false;
  }
  return true;
}

std::string normalize_word(std::string_view raw, std::size_t line) {
  std::string word;
  try {
    word = text::nfc(raw);
  } catch (const InvalidArgument& e) {
    throw ParseError(ParseErrorKind::BadToken, line, e.what());
  }
  if (!is_valid_token(word)) {
    throw ParseError(ParseErrorKind::BadToken, line, "invalid token");
  }
  return word;
}

std::size_t parse_count(std::string_view tok, std::size_t line) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(ParseErrorKind::MalformedHeader, line, "expected '<n> <d>'");
  }
  return v;
}

double parse_float32(std::string_view tok, std::size_t line) {
  float v = 0.0f;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec == std::errc::result_out_of_range) {
    throw ParseError(ParseErrorKind::NonFinite, line, "value out of binary32 range");
  }
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(ParseErrorKind::BadValue, line, "cannot parse '" + std::string(tok) + "'");
  }
  if (!std::isfinite(v)) throw ParseError(ParseErrorKind::NonFinite, line, std::string(tok));
  return static_cast<double>(v);
}

double parse_double(std::string_view tok, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(ParseErrorKind::BadValue, line, "cannot parse '" + std::string(tok) + "'");
  }
  if (!std::isfinite(v)) throw ParseError(ParseErrorKind::NonFinite, line, std::string(tok));
  return v;
}

std::string format_sig(double v, int digits) {
  std::array<char, 64> buf{};
  auto [ptr, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, digits);
  return std::string(buf.data(), ptr);
}

void check_float_range(const Matrix& m) {
  if (m.size() > 0 && m.cwiseAbs().maxCoeff() > static_cast<double>(FLT_MAX)) {
    throw InvalidArgument("value exceeds binary32 range");
  }
}

template <class T>
void put_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  out.write(bytes.data(), sizeof(T));
}

template <class T>
T get_le(std::istream& in, std::size_t record, const char* what) {
  std::array<char, sizeof(T)> bytes;
  if (!in.read(bytes.data(), sizeof(T))) {
    throw ParseError(ParseErrorKind::Truncated, record, std::string("missing ") + what);
  }
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes.begin(), bytes.end());
  }
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

std::unordered_map<std::string, std::size_t> index_words(std::span<const std::string> words) {
  std::unordered_map<std::string, std::size_t> idx;
  idx.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) idx.emplace(words[i], i);
  return idx;
}

}  // namespace

EmbeddingFormat detect_format(const fs::path& path) {
  auto in = open_in(path, true);
  std::array<char, 4> head{};
  in.read(head.data(), head.size());
  return (in.gcount() == 4 && head == kMagic) ? EmbeddingFormat::Binary : EmbeddingFormat::Text;
}

EmbeddingTable read_embeddings_text(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError(ParseErrorKind::MalformedHeader, 1, "missing header");
  }
  const auto header = split_ws(line);
  if (header.size() != 2) {
    throw ParseError(ParseErrorKind::MalformedHeader, 1, "expected '<n> <d>'");
  }
  const std::size_t n = parse_count(header[0], 1);
  const std::size_t d = parse_count(header[1], 1);
  if (d < 1) throw ParseError(ParseErrorKind::MalformedHeader, 1, "dimension must be >= 1");

  std::vector<std::string> words;
  words.reserve(n);
  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  std::unordered_set<std::string> seen;
  seen.reserve(n);

  for (std::size_t row = 0; row < n; ++row) {
    const std::size_t lineno = row + 2;
    if (!std::getline(in, line)) {
      throw ParseError(ParseErrorKind::Truncated, lineno,
                       "expected " + std::to_string(n) + " rows, found " + std::to_string(row));
    }
    const auto toks = split_ws(line);
    if (toks.size() != d + 1) {
      throw ParseError(ParseErrorKind::RowLength, lineno,
                       "expected " + std::to_string(d) + " values, found " +
                           std::to_string(toks.empty() ? 0 : toks.size() - 1));
    }
    std::string word = normalize_word(toks[0], lineno);
    if (!seen.insert(word).second) {
      throw ParseError(ParseErrorKind::DuplicateWord, lineno, "'" + word + "'");
    }
    for (std::size_t j = 0; j < d; ++j) {
      m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(j)) =
          parse_float32(toks[j + 1], lineno);
    }
    words.push_back(std::move(word));
  }
  std::size_t lineno = n + 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!is_blank_line(line)) {
      throw ParseError(ParseErrorKind::MalformedHeader, lineno,
                       "more rows than the header's n = " + std::to_string(n));
    }
  }
  return EmbeddingTable(std::move(words), std::move(m));
}

EmbeddingTable read_embeddings_binary(std::istream& in) {
  std::array<char, 4> head{};
  if (!in.read(head.data(), head.size()) || head != kMagic) {
    throw ParseError(ParseErrorKind::MalformedHeader, 1, "missing WLP1 magic");
  }
  const auto n = get_le<std::uint64_t>(in, 1, "row count");
  const auto d = get_le<std::uint64_t>(in, 1, "dimension");
  if (d < 1) throw ParseError(ParseErrorKind::MalformedHeader, 1, "dimension must be >= 1");

  Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  std::vector<float> row(d);
  for (std::uint64_t i = 0; i < n; ++i) {
    if (!in.read(reinterpret_cast<char*>(row.data()),
                 static_cast<std::streamsize>(d * sizeof(float)))) {
      throw ParseError(ParseErrorKind::Truncated, i + 1, "row data");
    }
    for (std::uint64_t j = 0; j < d; ++j) {
      float v = row[j];
      if constexpr (std::endian::native == std::endian::big) {
        auto bits = std::bit_cast<std::uint32_t>(v);
        bits = __builtin_bswap32(bits);
        v = std::bit_cast<float>(bits);
      }
      if (!std::isfinite(v)) throw ParseError(ParseErrorKind::NonFinite, i + 1, "row value");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = static_cast<double>(v);
    }
  }

  std::vector<std::string> words;
  words.reserve(n);
  std::unordered_set<std::string> seen;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto len = get_le<std::uint32_t>(in, i + 1, "word length");
    std::string raw(len, '\0');
    if (len > 0 && !in.read(raw.data(), len)) {
      throw ParseError(ParseErrorKind::Truncated, i + 1, "word bytes");
    }
    std::string word = normalize_word(raw, i + 1);
    if (!seen.insert(word).second) {
      throw ParseError(ParseErrorKind::DuplicateWord, i + 1, "'" + word + "'");
    }
    words.push_back(std::move(word));
  }
  return EmbeddingTable(std::move(words), std::move(m));
}

EmbeddingTable load_embeddings(const fs::path& path, EmbeddingFormat format) {
  auto in = open_in(path, format == EmbeddingFormat::Binary);
  return format == EmbeddingFormat::Binary ? read_embeddings_binary(in)
                                           : read_embeddings_text(in);
}

EmbeddingTable load_embeddings(const fs::path& path) {
  return load_embeddings(path, detect_format(path));
}

void write_embeddings_text(const EmbeddingTable& table, std::ostream& out) {
  check_float_range(table.matrix());
  const Matrix& m = table.matrix();
  out << table.size() << ' ' << table.dim() << '\n';
  std::string line;
  for (std::size_t i = 0; i < table.size(); ++i) {
    line = table.words()[i];
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      line += ' ';
      line += format_sig(m(static_cast<Eigen::Index>(i), j), 9);
    }
    line += '\n';
    out << line;
  }
}

void write_embeddings_binary(const EmbeddingTable& table, std::ostream& out) {
  check_float_range(table.matrix());
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint64_t>(out, table.size());
  put_le<std::uint64_t>(out, table.dim());
  const Matrix& m = table.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) put_le<float>(out, static_cast<float>(m(i, j)));
  }
  for (const auto& w : table.words()) {
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(w.size()));
    out.write(w.data(), static_cast<std::streamsize>(w.size()));
  }
}

void save_embeddings(const EmbeddingTable& table, const fs::path& path, EmbeddingFormat format) {
  auto out = open_out(path, format == EmbeddingFormat::Binary);
  if (format == EmbeddingFormat::Binary) {
    write_embeddings_binary(table, out);
  } else {
    write_embeddings_text(table, out);
  }
  finish(out, path);
}

GoldLexicon read_lexicon(std::istream& in) {
  GoldLexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks.size() != 2) {
      throw ParseError(ParseErrorKind::TokenCount, lineno,
                       "expected 2 tokens, found " + std::to_string(toks.size()));
    }
    lex.add(normalize_word(toks[0], lineno), normalize_word(toks[1], lineno));
  }
  return lex;
}

GoldLexicon load_lexicon(const fs::path& path) {
  auto in = open_in(path, false);
  return read_lexicon(in);
}

void save_lexicon(const GoldLexicon& lexicon, const fs::path& path) {
  auto out = open_out(path, false);
  for (const auto& [src, targets] : lexicon.entries()) {
    for (const auto& tgt : targets) out << src << ' ' << tgt << '\n';
  }
  finish(out, path);
}

void write_mapping(const WordMapping& mapping, std::span<const std::string> src_words,
                   std::span<const std::string> tgt_words, std::ostream& out) {
  mapping.check_bounds(src_words.size(), tgt_words.size());
  for (const auto& p : mapping.pairs()) {
    out << src_words[p.src] << '\t' << tgt_words[p.tgt] << '\t' << format_sig(p.score, 9) << '\n';
  }
}

void save_mapping(const WordMapping& mapping, std::span<const std::string> src_words,
                  std::span<const std::string> tgt_words, const fs::path& path) {
  mapping.check_bounds(src_words.size(), tgt_words.size());
  auto out = open_out(path, false);
  write_mapping(mapping, src_words, tgt_words, out);
  finish(out, path);
}

WordMapping read_mapping(std::istream& in, std::span<const std::string> src_words,
                         std::span<const std::string> tgt_words) {
  const auto src_idx = index_words(src_words);
  const auto tgt_idx = index_words(tgt_words);
  WordMapping mapping;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank_line(line)) continue;
    const auto cols = split_tabs(line);
    if (cols.size() != 3) {
      throw ParseError(ParseErrorKind::TokenCount, lineno,
                       "expected 3 tab-separated columns, found " + std::to_string(cols.size()));
    }
    const std::string src = normalize_word(cols[0], lineno);
    const std::string tgt = normalize_word(cols[1], lineno);
    auto si = src_idx.find(src);
    if (si == src_idx.end()) {
      throw ParseError(ParseErrorKind::UnknownWord, lineno, "source word '" + src + "'");
    }
    auto ti = tgt_idx.find(tgt);
    if (ti == tgt_idx.end()) {
      throw ParseError(ParseErrorKind::UnknownWord, lineno, "target word '" + tgt + "'");
    }
    const double score = parse_double(cols[2], lineno);
    if (mapping.target_of(si->second)) {
      throw ParseError(ParseErrorKind::DuplicateWord, lineno, "source word '" + src + "' repeated");
    }
    mapping.add(si->second, ti->second, score);
  }
  return mapping;
}

WordMapping load_mapping(const fs::path& path, std::span<const std::string> src_words,
                         std::span<const std::string> tgt_words) {
  auto in = open_in(path, false);
  return read_mapping(in, src_words, tgt_words);
}

RankedPredictions read_predictions(std::istream& in) {
  RankedPredictions preds;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank_line(line)) continue;
    auto cols = line.find('\t') != std::string::npos ? split_tabs(line) : split_ws(line);
    if (cols.size() < 2) {
      throw ParseError(ParseErrorKind::TokenCount, lineno, "expected at least 2 columns");
    }
    const std::string src = normalize_word(cols[0], lineno);
    const std::string tgt = normalize_word(cols[1], lineno);
    auto& list = preds[src];
    if (std::find(list.begin(), list.end(), tgt) == list.end()) list.push_back(tgt);
  }
  return preds;
}

RankedPredictions load_predictions(const fs::path& path) {
  auto in = open_in(path, false);
  return read_predictions(in);
}

void save_predictions(const RankedPredictions& predictions, const fs::path& path) {
  auto out = open_out(path, false);
  for (const auto& [src, list] : predictions) {
    for (std::size_t r = 0; r < list.size(); ++r) {
      out << src << '\t' << list[r] << '\t' << (r + 1) << '\n';
    }
  }
  finish(out, path);
}

void save_linear_map(const LinearMap& map, const fs::path& path) {
  std::vector<std::string> names;
  names.reserve(map.dim());
  for (std::size_t i = 0; i < map.dim(); ++i) names.push_back("r" + std::to_string(i));
  save_embeddings(EmbeddingTable(std::move(names), map.matrix()), path, EmbeddingFormat::Binary);
}

LinearMap load_linear_map(const fs::path& path, double tolerance) {
  const auto table = load_embeddings(path, EmbeddingFormat::Binary);
  if (table.size() != table.dim()) {
    throw ParseError(ParseErrorKind::MalformedHeader, 1, "linear map must be square");
  }
  return LinearMap(table.matrix(), tolerance);
}

fs::path fingerprint_sidecar_path(const fs::path& path) {
  fs::path p = path;
  p += ".json";
  return p;
}

void save_fingerprints(const FingerprintTable& table, const fs::path& path,
                       EmbeddingFormat format, const std::optional<FilterParams>& params) {
  save_embeddings(EmbeddingTable(table.words(), table.fp()), path, format);
  const auto sidecar = fingerprint_sidecar_path(path);
  if (!table.sparsified()) {
    std::error_code ec;
    fs::remove(sidecar, ec);
    return;
  }
  nlohmann::json doc;
  doc["format"] = "walip-fingerprint-sidecar";
  doc["version"] = 1;
  doc["n"] = table.size();
  doc["d"] = table.dim();
  doc["sparsified"] = true;
  doc["active"] = table.active();
  if (params) {
    doc["params"] = {{"max_sim_quantile", params->max_sim_quantile},
                     {"sparsify_quantile", params->sparsify_quantile}};
  }
  auto out = open_out(sidecar, false);
  out << doc.dump(2) << '\n';
  finish(out, sidecar);
}

FingerprintTable load_fingerprints(const fs::path& path) {
  auto table = load_embeddings(path);
  const auto sidecar = fingerprint_sidecar_path(path);
  if (!fs::exists(sidecar)) {
    return FingerprintTable(table.words(), table.matrix());
  }
  auto in = open_in(sidecar, false);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
    if (doc.at("n").get<std::size_t>() != table.size() ||
        doc.at("d").get<std::size_t>() != table.dim()) {
      throw ParseError(ParseErrorKind::MalformedHeader, 1,
                       "sidecar shape does not match '" + path.string() + "'");
    }
    auto active = doc.at("active").get<std::vector<std::size_t>>();
    const bool sparsified = doc.value("sparsified", true);
    return FingerprintTable(table.words(), table.matrix(), std::move(active), sparsified);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(ParseErrorKind::MalformedHeader, 1,
                     "bad sidecar '" + sidecar.string() + "': " + e.what());
  }
}

}  // namespace walip
