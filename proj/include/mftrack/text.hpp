#pragma once

#include <string>
#include <vector>

namespace mft {

/// Shortest decimal form that round-trips the exact double value.
std::string format_double(double v);

std::string trim(const std::string& s);

/// Splits on sep and trims each field; a lone empty line yields one empty field.
std::vector<std::string> split_fields(const std::string& line, char sep = ',');

/// Locale-independent numeric parsing; the whole field must be consumed.
double parse_double_field(const std::string& field);
long parse_int_field(const std::string& field);

}  // namespace mft
