#include "walip/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>
#include <unicode/ustring.h>
#include <unicode/utf8.h>

#include "walip/error.hpp"

namespace walip::text {
namespace {

icu::UnicodeString decode(std::string_view utf8) {
  // Reject invalid sequences up front; fromUTF8 would silently substitute.
  std::int32_t i = 0;
  const auto len = static_cast<std::int32_t>(utf8.size());
  const auto* s = reinterpret_cast<const std::uint8_t*>(utf8.data());
  while (i < len) {
    UChar32 c;
    U8_NEXT(s, i, len, c);
    if (c < 0) throw InvalidArgument("invalid UTF-8 in '" + std::string(utf8) + "'");
  }
  return icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), len));
}

std::u32string code_points(const icu::UnicodeString& s) {
  std::u32string out;
  out.reserve(static_cast<std::size_t>(s.length()));
  for (std::int32_t i = 0; i < s.length();) {
    const UChar32 c = s.char32At(i);
    out.push_back(static_cast<char32_t>(c));
    i += U16_LENGTH(c);
  }
  return out;
}

}  // namespace

std::string nfc(std::string_view utf8) {
  bool ascii = true;
  for (char c : utf8) ascii = ascii && static_cast<unsigned char>(c) < 0x80;
  if (ascii) return std::string(utf8);

  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");
  icu::UnicodeString normalized = norm->normalize(decode(utf8), status);
  if (U_FAILURE(status)) throw InvalidArgument("NFC normalization failed");
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

std::u32string fold_case(std::string_view utf8) {
  icu::UnicodeString s = decode(utf8);
  s.foldCase();
  return code_points(s);
}

std::u32string to_code_points(std::string_view utf8) { return code_points(decode(utf8)); }

std::string to_utf8(std::u32string_view cps) {
  icu::UnicodeString s;
  for (char32_t c : cps) s.append(static_cast<UChar32>(c));
  std::string out;
  s.toUTF8String(out);
  return out;
}

}  // namespace walip::text
