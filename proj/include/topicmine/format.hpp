#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace topicmine {

// Locale-independent fixed-point rendering ("." separator), used by every CSV
// writer so outputs are byte-stable across platforms.
std::string format_fixed(double value, int decimals);

// Shortest round-trip rendering of a double.
std::string format_shortest(double value);

// Renders numerator/denominator rounded half-up at `decimals` places using
// integer arithmetic only, so the result is exact for any count ratio.
std::string format_ratio(std::uint64_t numerator, std::uint64_t denominator, int decimals);

// Minimal CSV field quoting (RFC 4180 style).
std::string csv_field(const std::string& field);

// Splits one CSV record, honouring double-quoted fields. Returns nullopt on
// an unterminated quote.
std::optional<std::vector<std::string>> parse_csv_line(std::string_view line);

}  // namespace topicmine
