#pragma once

#include <charconv>
#include <cstdint>
#include <string>

namespace faswpcn {

/// Shortest decimal representation that round-trips the double exactly.
inline std::string fmt_double(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

inline std::string fmt_u64(uint64_t v) {
  char buf[24];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace faswpcn
