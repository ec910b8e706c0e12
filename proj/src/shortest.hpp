#pragma once

#include <charconv>
#include <string>

namespace wecfarm::detail {

// Shortest text that reads back to the same double.
inline std::string shortest(double value) {
  char buffer[32];
  const auto r = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, r.ptr);
}

}  // namespace wecfarm::detail
