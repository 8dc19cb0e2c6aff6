#include "csv.hpp"

#include <cmath>
#include <cstdio>

#include "twotier/error.hpp"

namespace twotier::cli {

std::string format_double(double v) {
  if (std::isnan(v)) return {};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     std::initializer_list<std::string_view> header)
    : path_(path), out_(path, std::ios::binary), columns_(header.size()) {
  if (!out_) throw Error("cannot write " + path.string());
  bool first = true;
  for (auto h : header) {
    if (!first) out_ << ',';
    out_ << csv_escape(h);
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (fields.size() != columns_) throw Error("CsvWriter: column count mismatch in " + path_.string());
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << csv_escape(fields[i]);
  }
  out_ << '\n';
}

void CsvWriter::close() {
  out_.close();
  if (!out_) throw Error("failed writing " + path_.string());
}

}  // namespace twotier::cli
