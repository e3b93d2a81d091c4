#pragma once

#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

namespace cwlab {

/// "%.17g", or "nan" / "inf" / "-inf".
std::string format_double(double x);

/// Comma-separated, '.' decimal, header row, LF line endings. Preamble lines
/// go above the header, each prefixed with "# ".
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header,
            const std::vector<std::string>& preamble = {});

  void row(std::initializer_list<double> values);
  void row(const std::vector<double>& values);

 private:
  std::ofstream out_;
  std::size_t columns_;
};

}  // namespace cwlab
