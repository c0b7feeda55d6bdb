#include "slacksim/util/kv_file.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace slacksim {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

KeyValueFile KeyValueFile::parse(std::string_view text, std::string_view origin) {
  KeyValueFile kv;
  kv.origin_ = origin;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(kv.origin_ + ":" + std::to_string(lineno) + ": expected `key = value`");
    }
    std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError(kv.origin_ + ":" + std::to_string(lineno) + ": empty key");
    if (kv.values_.count(key) != 0) {
      throw ConfigError(kv.origin_ + ":" + std::to_string(lineno) + ": duplicate key `" + key + "`");
    }
    kv.used_[key] = false;
    kv.values_.emplace(std::move(key), std::move(value));
  }
  return kv;
}

KeyValueFile KeyValueFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

const std::string* KeyValueFile::find(std::string_view key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return nullptr;
  used_.find(key)->second = true;
  return &it->second;
}

bool KeyValueFile::has(std::string_view key) const { return values_.find(key) != values_.end(); }

std::string KeyValueFile::get_string(std::string_view key, std::string fallback) const {
  const auto* v = find(key);
  return v ? *v : fallback;
}

std::uint64_t KeyValueFile::get_uint(std::string_view key, std::uint64_t fallback) const {
  const auto* v = find(key);
  if (!v) return fallback;
  std::uint64_t out = 0;
  int base = 10;
  std::string_view digits = *v;
  if (digits.size() > 2 && digits[0] == '0' && (digits[1] == 'x' || digits[1] == 'X')) {
    base = 16;
    digits.remove_prefix(2);
  }
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out, base);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
    throw ConfigError(origin_ + ": key `" + std::string(key) + "` expects an unsigned integer, got `" + *v + "`");
  }
  return out;
}

double KeyValueFile::get_double(std::string_view key, double fallback) const {
  const auto* v = find(key);
  if (!v) return fallback;
  try {
    std::size_t pos = 0;
    const double d = std::stod(*v, &pos);
    if (pos != v->size()) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    throw ConfigError(origin_ + ": key `" + std::string(key) + "` expects a number, got `" + *v + "`");
  }
}

bool KeyValueFile::get_bool(std::string_view key, bool fallback) const {
  const auto* v = find(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw ConfigError(origin_ + ": key `" + std::string(key) + "` expects a boolean, got `" + *v + "`");
}

std::vector<std::string> KeyValueFile::get_list(std::string_view key, std::vector<std::string> fallback) const {
  const auto* v = find(key);
  if (!v) return fallback;
  std::vector<std::string> out;
  std::stringstream ss(*v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto t = trim(item);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

std::vector<std::string> KeyValueFile::unused_keys() const {
  std::vector<std::string> out;
  for (const auto& [k, used] : used_) {
    if (!used) out.push_back(k);
  }
  return out;
}

}  // namespace slacksim
