#include "fdens/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fdens/error.hpp"

namespace fdens {

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

bool parse_number(const std::string& text, double& out) {
  const std::string t = trim(text);
  if (t.empty()) return false;
  const char* first = t.data();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), out);
  return ec == std::errc() && ptr == t.data() + t.size();
}

std::string where(const std::string& source, std::size_t line) { return source + ":" + std::to_string(line) + ": "; }

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "' for reading");
  return in;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

FunctionalSample read_curve_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> grid_points;
  std::vector<std::vector<double>> rows;
  bool have_header = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto cells = split_row(line);
    std::vector<double> values(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c)
      if (!parse_number(cells[c], values[c]) || !std::isfinite(values[c]))
        throw InputError(where(source, line_no) + "column " + std::to_string(c + 1) + ": '" + trim(cells[c]) +
                         "' is not a finite number");
    if (!have_header) {
      grid_points = std::move(values);
      have_header = true;
      if (grid_points.size() < 2)
        throw InputError(where(source, line_no) + "header row needs at least two grid abscissae");
      for (std::size_t c = 1; c < grid_points.size(); ++c)
        if (!(grid_points[c] > grid_points[c - 1]))
          throw InputError(where(source, line_no) + "grid abscissae must be strictly increasing (column " +
                           std::to_string(c + 1) + ")");
      continue;
    }
    if (values.size() != grid_points.size())
      throw InputError(where(source, line_no) + "expected " + std::to_string(grid_points.size()) + " values, found " +
                       std::to_string(values.size()));
    rows.push_back(std::move(values));
  }
  if (!have_header) throw InputError(where(source, 1) + "missing header row (grid abscissae)");
  if (rows.empty()) throw InputError(where(source, line_no + 1) + "no curve rows after the header");

  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(grid_points.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t t = 0; t < grid_points.size(); ++t)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(t)) = rows[i][t];
  return FunctionalSample(Grid(std::move(grid_points)), std::move(m));
}

FunctionalSample read_curve_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_curve_csv(in, path.string());
}

void write_curve_csv(std::ostream& out, const FunctionalSample& sample) {
  const auto pts = sample.grid().points();
  for (std::size_t t = 0; t < pts.size(); ++t) out << (t ? "," : "") << format_double(pts[t]);
  out << '\n';
  for (Eigen::Index i = 0; i < sample.values().rows(); ++i) {
    for (Eigen::Index t = 0; t < sample.values().cols(); ++t) out << (t ? "," : "") << format_double(sample.values()(i, t));
    out << '\n';
  }
}

void write_curve_csv(const std::filesystem::path& path, const FunctionalSample& sample) {
  std::ostringstream os;
  write_curve_csv(os, sample);
  write_text_file(path, os.str());
}

std::size_t CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) throw InputError("CSV has no column '" + name + "'");
  return static_cast<std::size_t>(it - header.begin());
}

double CsvTable::number(std::size_t row, std::size_t col) const {
  double v = 0.0;
  const std::string& cell = rows.at(row).at(col);
  if (cell == "inf") return INFINITY;
  if (cell == "-inf") return -INFINITY;
  if (cell == "nan") return NAN;
  if (!parse_number(cell, v)) throw InputError("CSV cell '" + cell + "' is not numeric");
  return v;
}

CsvTable read_csv_table(std::istream& in, const std::string& source) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split_row(line);
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != table.header.size())
      throw InputError(where(source, line_no) + "expected " + std::to_string(table.header.size()) + " cells, found " +
                       std::to_string(cells.size()));
    table.rows.push_back(std::move(cells));
  }
  if (!have_header) throw InputError(where(source, 1) + "missing header row");
  return table;
}

CsvTable read_csv_table(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_csv_table(in, path.string());
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

}  // namespace fdens
