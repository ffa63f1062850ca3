#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

// Deterministic CSV output: header row, '.' decimal separator, %.17g value
// formatting so that equal doubles produce equal bytes.

namespace osclab {

std::string format_double(double v);

class CsvWriter {
  public:
    CsvWriter(const std::filesystem::path& path, std::vector<std::string> columns);

    void row(std::initializer_list<double> values);
    void row(const std::vector<double>& values);
    void raw_row(const std::vector<std::string>& fields);

  private:
    std::ofstream out_;
    std::size_t n_columns_;
};

}  // namespace osclab
