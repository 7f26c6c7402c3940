#pragma once

#include "cvqt/model.hpp"

#include <string>
#include <vector>

namespace simtool {

// Deterministic number formatting for CSV artifacts: '.' decimal separator,
// scientific notation for 0 < |x| < 1e-3, 10 significant digits.
std::string format_double(double value);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

// Writes header + rows; returns the full path written.
std::string write_csv(const std::string& dir, const std::string& filename, const CsvTable& table);

// Reads fidelity-vs-photon-number data. The header must be
// "n_in,F,sigma_F" (or "n_in,F", in which case sigma defaults to 1).
std::vector<cvqt::FitPoint> read_fit_csv(const std::string& path);

}  // namespace simtool
