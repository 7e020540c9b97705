#include "fracstep_app/io.hpp"

#include <fmt/format.h>

#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace fracstep::app {

std::string format_number(double value) { return fmt::format("{:.17g}", value); }

CsvTable::CsvTable(std::vector<std::string> header) : columns_(header.size()) { text_row(header); }

void CsvTable::row(std::span<const double> values) {
  if (values.size() != columns_) throw std::logic_error("CSV row width does not match the header");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) text_ += ',';
    text_ += format_number(values[i]);
  }
  text_ += '\n';
}

void CsvTable::text_row(std::span<const std::string> cells) {
  if (cells.size() != columns_) throw std::logic_error("CSV row width does not match the header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) text_ += ',';
    text_ += cells[i];
  }
  text_ += '\n';
}

void commit_artifacts(const std::string& dir, const Artifacts& artifacts) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  for (const auto& [name, content] : artifacts) {
    const fs::path target = fs::path(dir) / name;
    const fs::path tmp = fs::path(dir) / ("." + name + ".tmp");
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write " + tmp.string());
      out.write(content.data(), static_cast<std::streamsize>(content.size()));
      if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
  }
}

}  // namespace fracstep::app
