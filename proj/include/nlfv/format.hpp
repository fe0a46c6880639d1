#pragma once

#include <charconv>
#include <string>

namespace nlfv {

/// Shortest decimal string that round-trips to the same double; always uses
/// '.' regardless of locale.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace nlfv
