#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace remoteness {

// Splits one CSV line. Supports RFC-4180 quoting with "" escapes; embedded
// newlines are not supported (none of the consumed formats produce them).
// Returns nullopt on unbalanced quotes.
std::optional<std::vector<std::string>> split_csv_line(std::string_view line);

// Quotes a field when it contains a comma, quote, or leading/trailing space.
std::string csv_field(std::string_view value);

// Shortest round-trip decimal form of a double.
std::string format_double(double value);

// Strict full-field numeric parsing; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view text);
std::optional<std::int64_t> parse_int64(std::string_view text);

}  // namespace remoteness
