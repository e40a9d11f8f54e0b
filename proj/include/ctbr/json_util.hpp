#pragma once

// Small helpers over nlohmann::json that report failures as SchemaError with
// a JSON pointer to the offending value.

#include <string>
#include <string_view>

#include "ctbr/errors.hpp"
#include "json.hpp"

namespace ctbr::json_util {

inline nlohmann::json parse(std::string_view bytes) {
  try {
    return nlohmann::json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("", std::string("malformed JSON: ") + e.what());
  }
}

// Pretty-printed, keys sorted (nlohmann objects are std::map backed),
// trailing newline.
inline std::string dump(const nlohmann::json& j) {
  return j.dump(2, ' ', false, nlohmann::json::error_handler_t::strict) + "\n";
}

inline void require_object(const nlohmann::json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path.empty() ? "/" : path, "expected object");
}

inline const nlohmann::json& get(const nlohmann::json& j, const char* key,
                                 const std::string& path) {
  const auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path + "/" + key, "missing field");
  return *it;
}

inline std::string get_string(const nlohmann::json& j, const char* key,
                              const std::string& path) {
  const auto& v = get(j, key, path);
  if (!v.is_string()) throw SchemaError(path + "/" + key, "expected string");
  return v.get<std::string>();
}

inline double as_number(const nlohmann::json& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path, "expected number");
  return v.get<double>();
}

inline double get_number(const nlohmann::json& j, const char* key,
                         const std::string& path) {
  return as_number(get(j, key, path), path + "/" + key);
}

inline long long get_integer(const nlohmann::json& j, const char* key,
                             const std::string& path) {
  const auto& v = get(j, key, path);
  if (!v.is_number_integer())
    throw SchemaError(path + "/" + key, "expected integer");
  return v.get<long long>();
}

inline bool get_bool(const nlohmann::json& j, const char* key,
                     const std::string& path) {
  const auto& v = get(j, key, path);
  if (!v.is_boolean()) throw SchemaError(path + "/" + key, "expected boolean");
  return v.get<bool>();
}

}  // namespace ctbr::json_util
