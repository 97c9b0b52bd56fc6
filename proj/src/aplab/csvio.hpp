#pragma once

#include <string>
#include <vector>

#include "aplab/coefficients.hpp"

namespace aplab {

// Writes content to path via a temp file plus rename, so readers never see a
// partial artifact.
void atomic_write_file(const std::string& path, const std::string& content);

std::string coefficient_series_csv(const CoefficientSeries& s);
CoefficientSeries coefficient_series_from_csv(const std::string& content);

struct CsvDocument {
  std::vector<std::string> comments;  // leading '#' lines, verbatim
  std::vector<std::string> header;    // column names
  std::vector<std::vector<std::string>> rows;
};
CsvDocument parse_csv(const std::string& content);

}  // namespace aplab
