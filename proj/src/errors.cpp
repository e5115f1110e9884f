#include "typicality/errors.hpp"

#include <utility>

namespace typicality {
namespace {

std::string describe(const std::string& message, const std::string& source,
                     std::optional<std::size_t> line,
                     std::optional<std::size_t> byte_offset) {
  std::string out = source;
  if (line) out += ":" + std::to_string(*line);
  if (byte_offset) out += " (byte " + std::to_string(*byte_offset) + ")";
  if (!out.empty()) out += ": ";
  return out + message;
}

}  // namespace

ParseError::ParseError(const std::string& message, std::string source,
                       std::optional<std::size_t> line,
                       std::optional<std::size_t> byte_offset)
    : Error(describe(message, source, line, byte_offset)),
      source_(std::move(source)),
      line_(line),
      byte_offset_(byte_offset) {}

}  // namespace typicality
