#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "json.hpp"
#include "lstmopt/errors.hpp"

namespace lstmopt::detail {

using nlohmann::json;

inline json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed ") + what + " JSON: " + e.what());
  }
}

template <typename T>
T get_field(const json& j, const char* key, const char* what) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw FormatError(std::string(what) + " JSON is missing field '" + key + "'");
  }
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw FormatError(std::string(what) + " JSON field '" + key + "': " + e.what());
  }
}

// Integral doubles are written as JSON integers so files stay readable.
inline json number(double v) {
  if (std::isfinite(v) && std::floor(v) == v && std::abs(v) < 9.0e15) {
    return static_cast<std::int64_t>(v);
  }
  return v;
}

}  // namespace lstmopt::detail
