#pragma once

#include <map>
#include <string>
#include <vector>

#include "vrulabel/types.hpp"

namespace vrulabel::config {

/// Flat key-value configuration with dotted section names:
///   pipeline.smoothing_window = 9
/// '#' starts a comment; keys are unique.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig parse_file(const std::string& path);
  static KeyValueConfig parse_string(const std::string& text);

  /// Rejects any key that is neither listed exactly nor under an allowed
  /// prefix, naming the offending key.
  void validate_keys(const std::vector<std::string>& exact,
                     const std::vector<std::string>& prefixes) const;

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  long long get_int(const std::string& key) const;
  bool get_bool(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  void set(const std::string& key, const std::string& value);
  void set_double(const std::string& key, double value);
  void set_int(const std::string& key, long long value);

  /// Keys sharing a dotted prefix, e.g. sensor ids under "sensor.".
  std::vector<std::string> subsections(const std::string& prefix) const;

  std::string serialize() const;  // sorted keys, one per line

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace vrulabel::config
