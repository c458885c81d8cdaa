#include "edsense/cli/csv.hpp"

#include <fmt/format.h>

#include "edsense/errors.hpp"

namespace edsense::cli {

CsvWriter::CsvWriter(const std::filesystem::path& path)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw Error(fmt::format("cannot open '{}' for writing", path.string()));
}

void CsvWriter::comment(const std::string& line) { out_ << "# " << line << '\n'; }

void CsvWriter::header(const std::vector<std::string>& columns) {
  for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<CsvCell>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << format(cells[i]);
  out_ << '\n';
}

void CsvWriter::close() {
  out_.close();
  if (!out_) throw Error(fmt::format("failed writing '{}'", path_.string()));
}

std::string CsvWriter::format(const CsvCell& cell) {
  struct {
    std::string operator()(double v) const { return fmt::format("{:.17g}", v); }
    std::string operator()(long long v) const { return fmt::format("{}", v); }
    std::string operator()(const std::string& v) const { return v; }
  } visitor;
  return std::visit(visitor, cell);
}

}  // namespace edsense::cli
