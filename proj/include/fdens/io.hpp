#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fdens/curvespace.hpp"

namespace fdens {

/// Curve CSV: first row holds the grid abscissae, each later row one curve's values.
/// Errors carry the source name and 1-based line number.
FunctionalSample read_curve_csv(std::istream& in, const std::string& source = "<input>");
FunctionalSample read_curve_csv(const std::filesystem::path& path);
void write_curve_csv(std::ostream& out, const FunctionalSample& sample);
void write_curve_csv(const std::filesystem::path& path, const FunctionalSample& sample);

/// Shortest text that parses back to the same double.
std::string format_double(double x);

/// Header plus string cells; what every CSV artifact parses into.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
  double number(std::size_t row, std::size_t col) const;
  double number(std::size_t row, const std::string& name) const { return number(row, column(name)); }
};

CsvTable read_csv_table(std::istream& in, const std::string& source = "<input>");
CsvTable read_csv_table(const std::filesystem::path& path);

/// Writes `path`, throwing InputError if it cannot be opened.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace fdens
