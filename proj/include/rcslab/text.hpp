#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rcs {

/// Locale-independent decimal text with 17 significant digits.
std::string format_double(double x);

/// Whole-string parse; nullopt on trailing characters or an empty field.
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_integer(std::string_view s);

std::string_view trim(std::string_view s);

/// Splits on sep and trims each field. An empty input gives no fields.
std::vector<std::string> split(std::string_view s, char sep);

}  // namespace rcs
