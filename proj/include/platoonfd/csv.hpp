#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace platoonfd::csv {

/// Splits one line on `delim` and trims surrounding whitespace from each
/// field. Quoting is not supported.
std::vector<std::string_view> split(std::string_view line, char delim = ',');

std::string_view trim(std::string_view s);

/// Full-field numeric parse; nullopt on trailing garbage or empty input.
std::optional<double> parse_double(std::string_view field);

/// Shortest decimal form that reads back to the identical double.
std::string format_double(double value);

/// Iterates the lines of an in-memory buffer, tracking 1-based line numbers
/// and stripping a trailing '\r'.
class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  bool next(std::string_view& line);
  [[nodiscard]] std::size_t line_number() const noexcept { return line_number_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_number_ = 0;
};

}  // namespace platoonfd::csv
