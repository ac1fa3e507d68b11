#pragma once

#include <charconv>
#include <optional>
#include <string>

namespace fdn::detail {

/// Shortest round-trip decimal form; identical on every platform.
inline std::string num(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

}  // namespace fdn::detail
