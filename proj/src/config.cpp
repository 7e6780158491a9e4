#include "horient/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "horient/errors.hpp"

namespace horient {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

bool key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// strip a # comment that is not inside a quoted string
std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

json parse_value(const std::string& raw, const std::string& origin, int line) {
  if (raw.empty()) fail(origin, line, "missing value");
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"') {
      fail(origin, line, "unterminated string");
    }
    std::string out;
    for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
      if (raw[i] == '\\') {
        if (i + 2 >= raw.size()) fail(origin, line, "dangling escape");
        char e = raw[++i];
        if (e == '"' || e == '\\') {
          out += e;
        } else {
          fail(origin, line, std::string("unsupported escape \\") + e);
        }
      } else if (raw[i] == '"') {
        fail(origin, line, "stray quote inside string");
      } else {
        out += raw[i];
      }
    }
    return json(out);
  }
  if (raw == "true") return json(true);
  if (raw == "false") return json(false);
  // integer or float; json::parse applies strict JSON number syntax
  json v = json::parse(raw, nullptr, false);
  if (v.is_number()) return v;
  fail(origin, line, "cannot parse value '" + raw + "'");
}

}  // namespace

ConfigTable parse_toml_subset(std::istream& in, const std::string& origin) {
  ConfigTable table;
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(strip_comment(line));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(origin, lineno, "missing ']' in section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty()) fail(origin, lineno, "empty section name");
      for (char c : section) {
        if (!key_char(c)) {
          fail(origin, lineno, "bad character in section name '" + section + "'");
        }
      }
      continue;
    }
    std::size_t eq = s.find('=');
    if (eq == std::string::npos) fail(origin, lineno, "expected key = value");
    std::string key = trim(s.substr(0, eq));
    if (key.empty()) fail(origin, lineno, "empty key");
    for (char c : key) {
      if (!key_char(c)) fail(origin, lineno, "bad character in key '" + key + "'");
    }
    std::string full = section.empty() ? key : section + "." + key;
    if (table.count(full)) fail(origin, lineno, "duplicate key '" + full + "'");
    table[full] = parse_value(trim(s.substr(eq + 1)), origin, lineno);
  }
  return table;
}

ConfigTable load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();

  std::size_t first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ConfigError(path + ": " + e.what());
    }
    ConfigTable table;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      if (it.value().is_object()) {
        for (auto jt = it.value().begin(); jt != it.value().end(); ++jt) {
          if (!jt.value().is_primitive() || jt.value().is_null()) {
            throw ConfigError(path + ": key '" + it.key() + "." + jt.key() +
                              "' must be a scalar");
          }
          table[it.key() + "." + jt.key()] = jt.value();
        }
      } else if (it.value().is_primitive() && !it.value().is_null()) {
        table[it.key()] = it.value();
      } else {
        throw ConfigError(path + ": key '" + it.key() +
                          "' must be a scalar or a section object");
      }
    }
    return table;
  }

  std::istringstream body(text);
  return parse_toml_subset(body, path);
}

namespace {

const json* find_key(const ConfigTable& t, const std::string& key) {
  auto it = t.find(key);
  return it == t.end() ? nullptr : &it->second;
}

[[noreturn]] void wrong_type(const std::string& key, const char* want) {
  throw ConfigError("config key '" + key + "' must be " + want);
}

}  // namespace

bool config_get(const ConfigTable& t, const std::string& key, double& dst) {
  const json* v = find_key(t, key);
  if (!v) return false;
  if (!v->is_number()) wrong_type(key, "a number");
  dst = v->get<double>();
  return true;
}

bool config_get(const ConfigTable& t, const std::string& key, std::int64_t& dst) {
  const json* v = find_key(t, key);
  if (!v) return false;
  if (!v->is_number_integer()) wrong_type(key, "an integer");
  dst = v->get<std::int64_t>();
  return true;
}

bool config_get(const ConfigTable& t, const std::string& key, int& dst) {
  std::int64_t wide;
  if (!config_get(t, key, wide)) return false;
  dst = static_cast<int>(wide);
  if (dst != wide) wrong_type(key, "a small integer");
  return true;
}

bool config_get(const ConfigTable& t, const std::string& key, bool& dst) {
  const json* v = find_key(t, key);
  if (!v) return false;
  if (!v->is_boolean()) wrong_type(key, "a boolean");
  dst = v->get<bool>();
  return true;
}

bool config_get(const ConfigTable& t, const std::string& key, std::string& dst) {
  const json* v = find_key(t, key);
  if (!v) return false;
  if (!v->is_string()) wrong_type(key, "a string");
  dst = v->get<std::string>();
  return true;
}

bool config_get(const ConfigTable& t, const std::string& key, std::uint64_t& dst) {
  const json* v = find_key(t, key);
  if (!v) return false;
  if (v->is_number_unsigned()) {
    dst = v->get<std::uint64_t>();
    return true;
  }
  if (v->is_number_integer() && v->get<std::int64_t>() >= 0) {
    dst = static_cast<std::uint64_t>(v->get<std::int64_t>());
    return true;
  }
  wrong_type(key, "a non-negative integer");
}

}  // namespace horient
