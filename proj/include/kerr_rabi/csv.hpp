#pragma once

#include <charconv>
#include <cstdint>
#include <string>

namespace kerr_rabi::csv {

/// Shortest decimal representation that round-trips the double.
inline std::string format_double(double value) {
    char buffer[32];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

inline std::string format_u64(std::uint64_t value) {
    char buffer[24];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

} // namespace kerr_rabi::csv
