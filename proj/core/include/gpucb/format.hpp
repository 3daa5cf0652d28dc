#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace gpucb {

/// Shortest decimal string that parses back to exactly `value`.
std::string format_double(double value);

/// Strict parse: the whole of `text` must be a number. Returns nullopt otherwise.
std::optional<double> parse_double(std::string_view text);

}  // namespace gpucb
