#pragma once

#include <initializer_list>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fracstep::app {

/// Comma-separated table with a header row, 17 significant digits and LF line endings.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void row(std::span<const double> values);
  void row(std::initializer_list<double> values) { row(std::span<const double>(values.begin(), values.size())); }
  /// Row whose cells are already formatted.
  void text_row(std::span<const std::string> cells);

  [[nodiscard]] const std::string& str() const noexcept { return text_; }

 private:
  std::size_t columns_;
  std::string text_;
};

/// Shortest-round-trip-safe decimal with 17 significant digits.
[[nodiscard]] std::string format_number(double value);

/// Named output files held in memory until the run succeeds.
using Artifacts = std::map<std::string, std::string>;

/// Creates `dir` and writes every artifact through a temporary file and rename.
void commit_artifacts(const std::string& dir, const Artifacts& artifacts);

}  // namespace fracstep::app
