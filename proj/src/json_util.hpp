#pragma once

// Internal helpers for reading loosely typed JSON documents. Listing-style
// scenario files carry numbers as strings ("vus": "30"), so numeric getters
// accept both.

#include <charconv>
#include <string>
#include <string_view>

#include "json.hpp"

#include "fdn/errors.hpp"

namespace fdn::detail {

using nlohmann::json;

inline json parse_json(std::string_view document, std::string_view what) {
  try {
    return json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string(what) + ": malformed JSON: " + e.what());
  }
}

inline const json& require(const json& obj, const char* key, std::string_view ctx) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ValidationError(std::string(ctx) + ": missing field '" + key + "'");
  }
  return *it;
}

inline double as_double(const json& v, std::string_view ctx) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    try {
      std::size_t pos = 0;
      double d = std::stod(s, &pos);
      if (pos == s.size()) return d;
    } catch (const std::exception&) {
    }
  }
  throw ValidationError(std::string(ctx) + ": expected a number");
}

inline std::int64_t as_int(const json& v, std::string_view ctx) {
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number_float()) {
    double d = v.get<double>();
    if (d == static_cast<double>(static_cast<std::int64_t>(d))) return static_cast<std::int64_t>(d);
  }
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    std::int64_t out = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (ec == std::errc() && p == s.data() + s.size()) return out;
  }
  throw ValidationError(std::string(ctx) + ": expected an integer");
}

inline std::string as_string(const json& v, std::string_view ctx) {
  if (!v.is_string()) throw ValidationError(std::string(ctx) + ": expected a string");
  return v.get<std::string>();
}

inline bool as_bool(const json& v, std::string_view ctx) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_string()) {
    if (v == "true") return true;
    if (v == "false") return false;
  }
  throw ValidationError(std::string(ctx) + ": expected a boolean");
}

template <typename T, typename F>
T get_or(const json& obj, const char* key, T fallback, F&& convert) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  return convert(*it);
}

}  // namespace fdn::detail
