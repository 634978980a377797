#pragma once

#include <set>
#include <string>

#include "json.hpp"
#include "pfb/errors.hpp"

namespace pfb::detail {

inline std::string pointer_token(const std::string& key) {
  std::string out;
  for (char ch : key) {
    if (ch == '~') {
      out += "~0";
    } else if (ch == '/') {
      out += "~1";
    } else {
      out += ch;
    }
  }
  return out;
}

inline std::string join(const std::string& path, const std::string& key) {
  return path + "/" + pointer_token(key);
}

inline std::string join(const std::string& path, std::size_t index) {
  return path + "/" + std::to_string(index);
}

inline const char* type_name(const nlohmann::json& j) { return j.type_name(); }

inline double as_number(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number()) {
    throw ConfigError(path, std::string("expected a number, found ") + type_name(j));
  }
  return j.get<double>();
}

inline int as_int(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number_integer()) {
    throw ConfigError(path, std::string("expected an integer, found ") + type_name(j));
  }
  const auto v = j.get<long long>();
  if (v < -2147483647LL || v > 2147483647LL) throw ConfigError(path, "integer out of range");
  return static_cast<int>(v);
}

inline std::string as_string(const nlohmann::json& j, const std::string& path) {
  if (!j.is_string()) {
    throw ConfigError(path, std::string("expected a string, found ") + type_name(j));
  }
  return j.get<std::string>();
}

inline bool as_bool(const nlohmann::json& j, const std::string& path) {
  if (!j.is_boolean()) {
    throw ConfigError(path, std::string("expected a boolean, found ") + type_name(j));
  }
  return j.get<bool>();
}

inline const nlohmann::json& as_array(const nlohmann::json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, std::string("expected an array, found ") + type_name(j));
  return j;
}

/// Object reader that remembers which keys were consumed, so leftovers can be
/// reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) {
      throw ConfigError(path_, std::string("expected an object, found ") + type_name(j_));
    }
  }

  const std::string& path() const { return path_; }
  std::string at(const std::string& key) const { return join(path_, key); }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const nlohmann::json& required(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    if (it == j_.end()) throw ConfigError(at(key), "missing required field");
    return *it;
  }

  const nlohmann::json* optional(const std::string& key) {
    seen_.insert(key);
    const auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  double number(const std::string& key, double fallback) {
    const auto* v = optional(key);
    return v ? as_number(*v, at(key)) : fallback;
  }
  int integer(const std::string& key, int fallback) {
    const auto* v = optional(key);
    return v ? as_int(*v, at(key)) : fallback;
  }
  std::string string(const std::string& key, const std::string& fallback) {
    const auto* v = optional(key);
    return v ? as_string(*v, at(key)) : fallback;
  }
  bool boolean(const std::string& key, bool fallback) {
    const auto* v = optional(key);
    return v ? as_bool(*v, at(key)) : fallback;
  }

  /// Throws for the first key (in sorted order) that was never requested.
  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.count(key)) throw ConfigError(at(key), "unknown key '" + key + "'");
    }
  }

 private:
  const nlohmann::json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

}  // namespace pfb::detail
