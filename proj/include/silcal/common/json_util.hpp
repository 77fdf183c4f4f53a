#pragma once

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "silcal/common/errors.hpp"

namespace silcal {

using Json = nlohmann::json;

inline Json load_json_file(const std::string& path, const std::string& context) {
  std::ifstream in(path);
  if (!in) throw ConfigError(context + ": cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return Json::parse(buf.str());
  } catch (const Json::parse_error& e) {
    throw ConfigError(context + ": " + path + " is not valid JSON (" + e.what() + ")");
  }
}

/// Writes with a trailing newline; nlohmann's dump keeps object keys sorted,
/// which together with shortest-round-trip doubles makes output byte-stable.
inline void save_json_file(const std::string& path, const Json& value, int indent = 2) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << value.dump(indent) << '\n';
  if (!out) throw ConfigError("failed while writing " + path);
}

/// Rejects unknown keys so config typos fail loudly instead of being ignored.
inline void check_allowed_keys(const Json& obj, std::initializer_list<const char*> allowed,
                               const std::string& context) {
  if (!obj.is_object())
    throw ConfigError(context + ": expected a JSON object");
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known)
      throw ConfigError(context + ": unknown key \"" + item.key() + "\"");
  }
}

inline void require_key(const Json& obj, const char* key, const std::string& context) {
  if (!obj.contains(key))
    throw ConfigError(context + ": missing required key \"" + std::string(key) + "\"");
}

inline void check_schema_version(const Json& obj, int expected, const std::string& context) {
  require_key(obj, "schema_version", context);
  const int got = obj.at("schema_version").get<int>();
  if (got != expected)
    throw ConfigError(context + ": unsupported schema_version " + std::to_string(got) +
                      " (expected " + std::to_string(expected) + ")");
}

}  // namespace silcal
