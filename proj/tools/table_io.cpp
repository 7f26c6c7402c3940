#include "table_io.hpp"

#include "errors.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace simtool {

std::string format_double(double value) {
  char buf[64];
  if (value != 0.0 && std::abs(value) < 1e-3) {
    std::snprintf(buf, sizeof(buf), "%.10e", value);
  } else {
    std::snprintf(buf, sizeof(buf), "%.10g", value);
  }
  return buf;
}

std::string write_csv(const std::string& dir, const std::string& filename,
                      const CsvTable& table) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const std::string path = (std::filesystem::path(dir) / filename).string();
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw CliError{ErrorCategory::kIo, "cannot open " + path + " for writing"};
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    out << (i ? "," : "") << table.header[i];
  }
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "") << format_double(row[i]);
    }
    out << "\n";
  }
  if (!out) throw CliError{ErrorCategory::kIo, "short write to " + path};
  return path;
}

std::vector<cvqt::FitPoint> read_fit_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError{ErrorCategory::kIo, "cannot open " + path};
  std::string line;
  if (!std::getline(in, line)) {
    throw CliError{ErrorCategory::kSchema, path + ": empty file, header required"};
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  bool has_sigma = false;
  if (line == "n_in,F,sigma_F") {
    has_sigma = true;
  } else if (line != "n_in,F") {
    throw CliError{ErrorCategory::kSchema,
                   path + ": expected header 'n_in,F,sigma_F' or 'n_in,F', got '" + line + "'"};
  }
  std::vector<cvqt::FitPoint> points;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    cvqt::FitPoint p;
    char comma1 = 0;
    char comma2 = 0;
    if (!(ss >> p.n_in >> comma1 >> p.fidelity) || comma1 != ',') {
      throw CliError{ErrorCategory::kSchema,
                     path + ":" + std::to_string(line_no) + ": malformed row '" + line + "'"};
    }
    if (has_sigma) {
      if (!(ss >> comma2 >> p.sigma) || comma2 != ',') {
        throw CliError{ErrorCategory::kSchema,
                       path + ":" + std::to_string(line_no) + ": malformed row '" + line + "'"};
      }
    }
    points.push_back(p);
  }
  return points;
}

}  // namespace simtool
