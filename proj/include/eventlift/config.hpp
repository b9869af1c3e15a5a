#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "eventlift/errors.hpp"

namespace eventlift {

/// Flat `key = value` configuration with optional `[section]` headers; a key
/// inside `[ssm]` becomes `ssm.key`. `#` starts a comment. Dotted keys are
/// also accepted directly.
class Config {
 public:
  Config() = default;

  static Config parse_string(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      if (line.front() == '[') {
        if (line.back() != ']') {
          throw validation_error("config line " + std::to_string(lineno) + ": bad section header");
        }
        section = trim(line.substr(1, line.size() - 2));
        continue;
      }
      auto eq = line.find('=');
      if (eq == std::string::npos) {
        throw validation_error("config line " + std::to_string(lineno) + ": expected key = value");
      }
      std::string key = trim(line.substr(0, eq));
      std::string value = trim(line.substr(eq + 1));
      if (key.empty()) {
        throw validation_error("config line " + std::to_string(lineno) + ": empty key");
      }
      if (!section.empty() && key.find('.') == std::string::npos) key = section + "." + key;
      cfg.kv_[key] = value;
    }
    return cfg;
  }

  static Config parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str());
  }

  bool has(const std::string& key) const { return kv_.count(key) > 0; }

  void set(const std::string& key, const std::string& value) { kv_[key] = value; }

  /// Overlays `other` on top of this config (other wins).
  void merge_from(const Config& other) {
    for (const auto& [k, v] : other.kv_) kv_[k] = v;
  }

  std::string get_str(const std::string& key, const std::string& fallback = {}) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
  }

  long get_int(const std::string& key, long fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
      return std::stol(it->second);
    } catch (const std::exception&) {
      throw validation_error("config key '" + key + "': expected integer, got '" + it->second + "'");
    }
  }

  double get_double(const std::string& key, double fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
      return std::stod(it->second);
    } catch (const std::exception&) {
      throw validation_error("config key '" + key + "': expected number, got '" + it->second + "'");
    }
  }

  bool get_bool(const std::string& key, bool fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    const std::string& v = it->second;
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw validation_error("config key '" + key + "': expected boolean, got '" + v + "'");
  }

  /// Comma-separated list; empty value -> empty list.
  std::vector<std::string> get_list(const std::string& key,
                                    const std::vector<std::string>& fallback = {}) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    std::vector<std::string> out;
    std::istringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) out.push_back(item);
    }
    return out;
  }

  const std::map<std::string, std::string>& items() const { return kv_; }

 private:
  static std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  std::map<std::string, std::string> kv_;
};

}  // namespace eventlift
