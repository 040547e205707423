#pragma once

#include <json.hpp>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cusplab::cli {

using Json = nlohmann::ordered_json;

/// Bad config file, unknown key, wrong type or malformed override.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every key the tool understands, with its default value.
Json default_config();

/// Defaults, then the file at `path` (skipped when empty), then each
/// "dotted.key=value" override. Values in overrides are parsed as JSON and
/// fall back to plain strings.
Json resolve_config(const std::string& path, const std::vector<std::string>& overrides);

/// Merges `user` into `base`; every key of `user` must already exist in
/// `base` with a compatible type.
void merge_checked(Json& base, const Json& user, const std::string& prefix = "");

void apply_override(Json& cfg, const std::string& assignment);

/// Leaves as ("a_b_c", value) pairs; array elements get an index suffix.
std::vector<std::pair<std::string, Json>> flatten(const Json& cfg, const std::string& prefix);

}  // namespace cusplab::cli
