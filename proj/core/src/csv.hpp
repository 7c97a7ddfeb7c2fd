#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace phaseless::detail {

/// Decimal text with 17 significant digits, which round-trips every double.
std::string format_double(double v);

std::vector<std::string_view> split_fields(std::string_view line, char sep = ',');

/// Parses a full field as a double; throws ParseError tagged with `line`.
double parse_double(std::string_view field, int line);

std::string trim(std::string_view s);

}  // namespace phaseless::detail
