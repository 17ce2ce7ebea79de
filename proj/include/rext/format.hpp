#pragma once

#include <charconv>
#include <string>

namespace rext {

/// Shortest decimal that round-trips to the same double.
inline std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace rext
