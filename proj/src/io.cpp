#include "bakerdim/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace bakerdim {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);  // LF endings everywhere
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

}  // namespace

void write_csv(const std::filesystem::path& path, const std::string& header,
               std::span<const std::vector<double>> rows) {
  std::ofstream out = open_out(path);
  out << header << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << format_g17(row[i]);
    }
    out << '\n';
  }
}

void write_csv_tagged(const std::filesystem::path& path, const std::string& header,
                      std::span<const std::vector<double>> rows,
                      std::span<const std::string> tags) {
  std::ofstream out = open_out(path);
  out << header << '\n';
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t i = 0; i < rows[r].size(); ++i) {
      if (i) out << ',';
      out << format_g17(rows[r][i]);
    }
    out << ',' << tags[r] << '\n';
  }
}

std::string digits_to_string(std::span<const uint8_t> digits) {
  std::string s;
  s.reserve(digits.size());
  for (uint8_t d : digits) s.push_back(d ? '1' : '0');
  return s;
}

}  // namespace bakerdim
