#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace twotier::cli {

// %.9g, with an empty string for NaN (used for missing cells).
std::string format_double(double v);

// Quotes a field when it contains a comma, quote, or line break.
std::string csv_escape(std::string_view field);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::initializer_list<std::string_view> header);

  void row(const std::vector<std::string>& fields);
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

}  // namespace twotier::cli
