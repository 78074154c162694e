#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fivenum {

// Fixed 9-significant-digit rendering used for every floating-point value
// written to CSV, so repeated runs produce byte-identical, diffable files.
std::string format_sig9(double value);

std::string trim(std::string_view text);

// Splits one CSV line on commas (no quoting; fields in this project never
// contain commas) and trims each field.
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace fivenum
