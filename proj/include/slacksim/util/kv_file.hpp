#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace slacksim {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Flat `key = value` text file. `#` starts a comment; blank lines are ignored.
/// Keys may contain dots (`slack.ways`). Duplicate keys are an error.
class KeyValueFile {
 public:
  static KeyValueFile parse(std::string_view text, std::string_view origin = "<text>");
  static KeyValueFile load(const std::string& path);

  bool has(std::string_view key) const;
  std::string get_string(std::string_view key, std::string fallback) const;
  std::uint64_t get_uint(std::string_view key, std::uint64_t fallback) const;
  double get_double(std::string_view key, double fallback) const;
  bool get_bool(std::string_view key, bool fallback) const;
  /// Comma-separated list.
  std::vector<std::string> get_list(std::string_view key, std::vector<std::string> fallback) const;

  /// Keys not consumed by any getter; callers use this to reject typos.
  std::vector<std::string> unused_keys() const;

 private:
  const std::string* find(std::string_view key) const;

  std::string origin_;
  std::map<std::string, std::string, std::less<>> values_;
  mutable std::map<std::string, bool, std::less<>> used_;
};

std::string trim(std::string_view s);

}  // namespace slacksim
