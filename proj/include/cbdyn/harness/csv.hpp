#pragma once

#include <string>
#include <vector>

namespace cbdyn {

/// Shortest round-trip representation ("%.17g").
std::string format_double(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add_row(std::vector<std::string> row);
  std::string str() const;
  /// Writes the table, creating parent directories. Throws ConfigError on I/O failure.
  void write(const std::string& path) const;
  const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace cbdyn
