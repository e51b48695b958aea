#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace bakerdim {

/// Shortest text keeping all 17 significant digits.
std::string format_g17(double v);

/// Rows of doubles, comma separated, 17 significant digits, LF endings.
void write_csv(const std::filesystem::path& path, const std::string& header,
               std::span<const std::vector<double>> rows);

/// Same, with a trailing string column per row (digit audit strings etc.).
void write_csv_tagged(const std::filesystem::path& path, const std::string& header,
                      std::span<const std::vector<double>> rows,
                      std::span<const std::string> tags);

std::string digits_to_string(std::span<const uint8_t> digits);

}  // namespace bakerdim
