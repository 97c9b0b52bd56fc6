#include "aplab/csvio.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace aplab {

void atomic_write_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
  }
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(out.good(), errc::io_failure, "cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    require(out.good(), errc::io_failure, "write failed for " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    fail(errc::io_failure, "rename to " + target.string() + " failed: " + ec.message());
  }
}

std::string coefficient_series_csv(const CoefficientSeries& s) {
  std::ostringstream os;
  os.precision(17);
  os << "# N=" << s.N
     << " normalization=" << (s.is_arithmetic() ? "arithmetic" : "unitary")
     << " label=" << s.label << "\n";
  os << "n,value\n";
  for (std::uint64_t n = 1; n <= s.N; ++n) {
    if (s.is_arithmetic())
      os << n << ',' << to_string_i128(s.ints[n]) << '\n';
    else
      os << n << ',' << s.vals[n] << '\n';
  }
  return os.str();
}

CsvDocument parse_csv(const std::string& content) {
  CsvDocument doc;
  std::istringstream in(content);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      doc.comments.push_back(line);
      continue;
    }
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (!header_seen) {
      doc.header = std::move(fields);
      header_seen = true;
    } else {
      doc.rows.push_back(std::move(fields));
    }
  }
  return doc;
}

CoefficientSeries coefficient_series_from_csv(const std::string& content) {
  const CsvDocument doc = parse_csv(content);
  require(doc.header.size() == 2 && doc.header[0] == "n" && doc.header[1] == "value",
          errc::invalid_argument, "series CSV must have columns n,value");
  bool arithmetic = false;
  std::string label = "imported";
  for (const std::string& c : doc.comments) {
    if (c.find("normalization=arithmetic") != std::string::npos) arithmetic = true;
    const auto pos = c.find("label=");
    if (pos != std::string::npos) label = c.substr(pos + 6);
  }
  std::uint64_t N = 0;
  for (const auto& row : doc.rows) N = std::max(N, static_cast<std::uint64_t>(std::stoull(row[0])));
  require(N >= 1, errc::invalid_argument, "series CSV has no rows");

  CoefficientSeries s;
  s.N = N;
  s.norm = arithmetic ? Normalization::arithmetic : Normalization::unitary;
  s.label = label;
  s.vals.assign(N + 1, 0.0);
  if (arithmetic) s.ints.assign(N + 1, 0);
  for (const auto& row : doc.rows) {
    require(row.size() == 2, errc::invalid_argument, "series CSV row width mismatch");
    const std::uint64_t n = std::stoull(row[0]);
    if (arithmetic) {
      i128 v = 0;
      bool neg = false;
      for (char ch : row[1]) {
        if (ch == '-') {
          neg = true;
          continue;
        }
        if (ch == '+') continue;
        require(ch >= '0' && ch <= '9', errc::invalid_argument, "bad integer in series CSV");
        v = v * 10 + (ch - '0');
      }
      s.ints[n] = neg ? -v : v;
      s.vals[n] = static_cast<double>(s.ints[n]);
    } else {
      s.vals[n] = std::stod(row[1]);
    }
  }
  return s;
}

}  // namespace aplab
