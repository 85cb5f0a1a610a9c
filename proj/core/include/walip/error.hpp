#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace walip {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument does not hold (dimension mismatch, k out of
/// range, zero-norm row, empty input, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A configuration document violates the PipelineConfig schema.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class ParseErrorKind {
  MalformedHeader,
  RowLength,
  DuplicateWord,
  NonFinite,
  BadValue,
  BadToken,
  TokenCount,
  UnknownWord,
  Truncated,
};

std::string_view to_string(ParseErrorKind kind) noexcept;

/// Malformed file content. `line()` is 1-based; for binary files it is the
/// 1-based record (row or word) index.
class ParseError : public Error {
 public:
  ParseError(ParseErrorKind kind, std::size_t line, const std::string& detail);

  ParseErrorKind kind() const noexcept { return kind_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ParseErrorKind kind_;
  std::size_t line_;
};

}  // namespace walip
