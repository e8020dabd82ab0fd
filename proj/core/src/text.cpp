#include "mvlabel/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "mvlabel/errors.hpp"

namespace mvlabel {

namespace csv {

std::vector<Row> read(std::istream& in) {
  std::vector<Row> rows;
  Row row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  bool first = true;

  auto end_row = [&] {
    if (field_started || !row.empty()) {
      row.push_back(field);
      rows.push_back(std::move(row));
    }
    row.clear();
    field.clear();
    field_started = false;
  };

  std::string content{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::size_t i = 0;
  if (first && content.rfind("\xEF\xBB\xBF", 0) == 0) i = 3;
  first = false;

  for (; i < content.size(); ++i) {
    const char ch = content[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(ch);
      }
      continue;
    }
    switch (ch) {
      case '"':
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        row.push_back(field);
        field.clear();
        field_started = true;
        break;
      case '\r':
        break;
      case '\n':
        end_row();
        break;
      default:
        field.push_back(ch);
        field_started = true;
    }
  }
  end_row();
  return rows;
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

std::string join(const Row& row) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out.push_back(',');
    out += escape(row[i]);
  }
  return out;
}

}  // namespace csv

std::string format_shortest(double value) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("format_shortest: conversion failed");
  return std::string(buf.data(), ptr);
}

std::string format_fixed(double value, int decimals) {
  std::array<char, 512> buf{};
  const int n = std::snprintf(buf.data(), buf.size(), "%.*f", decimals, value);
  if (n < 0 || static_cast<std::size_t>(n) >= buf.size())
    throw std::runtime_error("format_fixed: value out of range");
  return std::string(buf.data(), static_cast<std::size_t>(n));
}

std::string trim(std::string_view text) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  std::size_t b = 0;
  std::size_t e = text.size();
  while (b < e && is_space(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && is_space(static_cast<unsigned char>(text[e - 1]))) --e;
  return std::string(text.substr(b, e - b));
}

std::optional<double> parse_cell(std::string_view cell) {
  const std::string t = trim(cell);
  if (t.empty()) return std::nullopt;
  std::string lower = t;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "nan" || lower == "na" || lower == "null" || lower == "none") return std::nullopt;

  double value = 0.0;
  const char* first = t.data();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size())
    throw std::invalid_argument("not a number: '" + t + "'");
  return value;
}

std::string number_words(std::size_t n) {
  static constexpr std::array<const char*, 20> small = {
      "zero",    "one",     "two",       "three",    "four",     "five",    "six",
      "seven",   "eight",   "nine",      "ten",      "eleven",   "twelve",  "thirteen",
      "fourteen", "fifteen", "sixteen",  "seventeen", "eighteen", "nineteen"};
  static constexpr std::array<const char*, 10> tens = {
      "", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety"};
  if (n < small.size()) return small[n];
  if (n < 100) {
    std::string out = tens[n / 10];
    if (n % 10) out += std::string("-") + small[n % 10];
    return out;
  }
  return std::to_string(n);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StageDependencyError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("short write to '" + path.string() + "'");
}

}  // namespace mvlabel
