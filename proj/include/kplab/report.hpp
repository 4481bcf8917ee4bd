#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace kplab {

// Doubles rendered with 17 significant digits, enough to round-trip exactly.
std::string csv_num(double x);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  void add_row(std::vector<std::string> cells);
  std::size_t rows() const { return rows_.size(); }
  std::string to_string() const;
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace kplab
