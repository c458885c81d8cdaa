#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <variant>
#include <vector>

namespace edsense::cli {

using CsvCell = std::variant<double, long long, std::string>;

/// Comma-separated output with '#' comment lines, LF endings and doubles
/// printed with 17 significant digits.
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);

  void comment(const std::string& line);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<CsvCell>& cells);
  void close();

  static std::string format(const CsvCell& cell);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace edsense::cli
