#include "gpucb/format.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace gpucb {

std::string format_double(double value) {
    std::array<char, 32> buffer{};
    const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    return {buffer.data(), result.ptr};
}

std::optional<double> parse_double(std::string_view text) {
    if (text.empty()) { return std::nullopt; }
    // from_chars rejects a leading '+'; accept it for hand-written files.
    if (text.front() == '+') { text.remove_prefix(1); }
    double value = 0.0;
    const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
    if (result.ec != std::errc{} || result.ptr != text.data() + text.size()) { return std::nullopt; }
    return value;
}

}  // namespace gpucb
