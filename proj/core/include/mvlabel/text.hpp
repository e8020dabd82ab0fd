#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mvlabel {

namespace csv {

using Row = std::vector<std::string>;

/// Reads comma-separated records with RFC 4180 quoting. A UTF-8 byte-order
/// mark on the first line is stripped. Blank lines are skipped.
std::vector<Row> read(std::istream& in);

/// Quotes a field only when it contains a comma, quote or line break.
std::string escape(std::string_view field);

std::string join(const Row& row);

}  // namespace csv

/// Shortest decimal text that parses back to exactly `value`.
std::string format_shortest(double value);

/// Fixed-point rendering with `decimals` places (printf semantics, so exact
/// binary ties round to even).
std::string format_fixed(double value, int decimals);

/// Parses a numeric cell. Empty, "nan", "na" and "null" (any case) are missing.
/// Returns std::nullopt for missing and throws std::invalid_argument for garbage.
std::optional<double> parse_cell(std::string_view cell);

std::string trim(std::string_view text);

/// English words for 0..99 ("two", "eleven", "thirty-five"); digits beyond.
std::string number_words(std::size_t n);

std::string read_file(const std::filesystem::path& path);

/// Writes `contents` verbatim, creating parent directories as needed.
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace mvlabel
