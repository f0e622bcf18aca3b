#include "vrulabel/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace vrulabel::config {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw FormatError("config: cannot open " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

KeyValueConfig KeyValueConfig::parse_string(const std::string& text) {
  KeyValueConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw FormatError("config: line " + std::to_string(lineno) +
                        " is not key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw FormatError("config: empty key on line " + std::to_string(lineno));
    }
    if (cfg.values_.count(key)) {
      throw FormatError("config: duplicate key " + key);
    }
    cfg.values_[key] = value;
  }
  return cfg;
}

void KeyValueConfig::validate_keys(const std::vector<std::string>& exact,
                                   const std::vector<std::string>& prefixes) const {
  const std::set<std::string> known(exact.begin(), exact.end());
  for (const auto& [key, value] : values_) {
    if (known.count(key)) continue;
    bool ok = false;
    for (const auto& p : prefixes) {
      if (key.rfind(p, 0) == 0) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw FormatError("config: unknown key " + key);
    }
  }
}

bool KeyValueConfig::has(const std::string& key) const {
  return values_.count(key) > 0;
}

std::string KeyValueConfig::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) {
    throw FormatError("config: missing key " + key);
  }
  return it->second;
}

double KeyValueConfig::get_double(const std::string& key) const {
  const std::string v = get_string(key);
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw FormatError("config: key " + key + " is not a number: " + v);
  }
}

long long KeyValueConfig::get_int(const std::string& key) const {
  const std::string v = get_string(key);
  try {
    size_t pos = 0;
    const long long i = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw FormatError("config: key " + key + " is not an integer: " + v);
  }
}

bool KeyValueConfig::get_bool(const std::string& key) const {
  const std::string v = get_string(key);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw FormatError("config: key " + key + " is not a boolean: " + v);
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long long KeyValueConfig::get_int(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  return has(key) ? get_bool(key) : fallback;
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  values_[key] = value;
}

void KeyValueConfig::set_double(const std::string& key, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  values_[key] = buf;
}

void KeyValueConfig::set_int(const std::string& key, long long value) {
  values_[key] = std::to_string(value);
}

std::vector<std::string> KeyValueConfig::subsections(const std::string& prefix) const {
  std::set<std::string> names;
  for (const auto& [key, value] : values_) {
    if (key.rfind(prefix, 0) != 0) continue;
    const size_t dot = key.find('.', prefix.size());
    if (dot == std::string::npos) continue;
    names.insert(key.substr(prefix.size(), dot - prefix.size()));
  }
  return {names.begin(), names.end()};
}

std::string KeyValueConfig::serialize() const {
  std::ostringstream out;
  for (const auto& [key, value] : values_) {
    out << key << " = " << value << "\n";
  }
  return out.str();
}

}  // namespace vrulabel::config
