#pragma once

#include <istream>
#include <map>
#include <string>

#include <json.hpp>

namespace horient {

/// Flat configuration: "section.key" (or bare "key" before any section
/// header) mapped to a scalar JSON value: string, number, or boolean.
using ConfigTable = std::map<std::string, nlohmann::json>;

/// TOML subset: [section] headers, key = value lines, # comments. Values
/// are double-quoted strings (\" and \\ escapes), integers, floats, and
/// true/false. Duplicate keys are rejected. `origin` names the source in
/// error messages.
ConfigTable parse_toml_subset(std::istream& in, const std::string& origin);

/// Reads a config file: JSON (one nesting level of sections) when the first
/// non-space byte is '{', the TOML subset otherwise. This makes every
/// resolved-config JSON the tool emits directly reusable via --config.
ConfigTable load_config(const std::string& path);

/// Fetch helpers: absent key leaves `dst` untouched and returns false; a
/// present key of the wrong type throws.
bool config_get(const ConfigTable& t, const std::string& key, double& dst);
bool config_get(const ConfigTable& t, const std::string& key, std::int64_t& dst);
bool config_get(const ConfigTable& t, const std::string& key, int& dst);
bool config_get(const ConfigTable& t, const std::string& key, bool& dst);
bool config_get(const ConfigTable& t, const std::string& key, std::string& dst);
bool config_get(const ConfigTable& t, const std::string& key, std::uint64_t& dst);

}  // namespace horient
