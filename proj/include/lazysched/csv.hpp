#pragma once

#include <charconv>
#include <cstdint>
#include <string>

namespace lazysched {

// Locale-independent numeric formatting: '.' decimal separator, 15
// significant digits, identical bytes for identical doubles.
inline std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value,
                                    std::chars_format::general, 15);
  return std::string(buffer, result.ptr);
}

inline std::string format_u64(std::uint64_t value) {
  char buffer[24];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

}  // namespace lazysched
