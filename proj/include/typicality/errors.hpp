#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace typicality {

// Base of every error thrown by the library. Callers that only need to
// distinguish "bad input" from "bug" can catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed bytes. Carries the source name and, when known, the 1-based
// line number or the byte offset of the offending record.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::string source,
             std::optional<std::size_t> line = std::nullopt,
             std::optional<std::size_t> byte_offset = std::nullopt);

  const std::string& source() const { return source_; }
  std::optional<std::size_t> line() const { return line_; }
  std::optional<std::size_t> byte_offset() const { return byte_offset_; }

 private:
  std::string source_;
  std::optional<std::size_t> line_;
  std::optional<std::size_t> byte_offset_;
};

// Well-formed input that violates a domain invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class EmptyDatasetError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Declared shapes or dimensions disagree.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Stored bytes do not match their declared length or checksum.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

// Unknown key or index out of range.
class LookupError : public Error {
 public:
  using Error::Error;
};

}  // namespace typicality
