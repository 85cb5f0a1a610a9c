#include "walip/error.hpp"

namespace walip {

std::string_view to_string(ParseErrorKind kind) noexcept {
  switch (kind) {
    case ParseErrorKind::MalformedHeader: return "MalformedHeader";
    case ParseErrorKind::RowLength: return "RowLength";
    case ParseErrorKind::DuplicateWord: return "DuplicateWord";
    case ParseErrorKind::NonFinite: return "NonFinite";
    case ParseErrorKind::BadValue: return "BadValue";
    case ParseErrorKind::BadToken: return "BadToken";
    case ParseErrorKind::TokenCount: return "TokenCount";
    case ParseErrorKind::UnknownWord: return "UnknownWord";
    case ParseErrorKind::Truncated: return "Truncated";
  }
  return "Unknown";
}

ParseError::ParseError(ParseErrorKind kind, std::size_t line,
                       const std::string& detail)
    : Error(std::string(to_string(kind)) + " at line " + std::to_string(line) +
            (detail.empty() ? "" : ": " + detail)),
      kind_(kind),
      line_(line) {}

}  // namespace walip
