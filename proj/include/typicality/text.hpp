#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace typicality::text {

// Trim, lowercase and NFC-normalize a UTF-8 string.
std::string normalize_word(std::string_view raw);

// True when the (already trimmed) string contains Unicode whitespace.
bool is_multiword(std::string_view word);

// True when any code point is neither alphanumeric nor '-'.
bool has_punctuation(std::string_view word);

// Splits on a single delimiter character; no quoting.
std::vector<std::string> split(std::string_view line, char delim);

// Splits one CSV/TSV record. Fields may be wrapped in double quotes, with
// "" standing for a literal quote inside a quoted field.
std::vector<std::string> split_delimited(std::string_view line, char delim);

// Quotes a field for split_delimited when it contains delim, '"' or a newline.
std::string quote_field(std::string_view field, char delim);

// Splits on runs of ASCII whitespace.
std::vector<std::string> split_ws(std::string_view line);

std::string_view trim(std::string_view s);

// Shortest decimal form that reads back to the same double.
std::string format_double(double value);

// Strict parse of the whole token; std::nullopt-like failure via bool.
bool parse_double(std::string_view token, double& out);
bool parse_size(std::string_view token, std::size_t& out);

}  // namespace typicality::text
