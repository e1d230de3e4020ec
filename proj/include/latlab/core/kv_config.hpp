#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace latlab {

// Plain-text "key = value" configuration with CLI-style overrides.
// Keys are sorted on save so snapshots and hashes are stable.
class KvConfig {
 public:
  KvConfig() = default;

  static KvConfig load(const std::filesystem::path& path);
  static KvConfig parse(std::string_view text);
  void save(const std::filesystem::path& path) const;
  std::string to_string() const;

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  void set_int(const std::string& key, std::int64_t v) { values_[key] = std::to_string(v); }
  void set_double(const std::string& key, double v);

  // "key=value" as given on a command line.
  void apply_override(std::string_view assignment);

  // Getters throw ConfigError when the key is absent (no-default forms) or the
  // value does not parse as the requested type.
  std::string get_str(const std::string& key) const;
  std::string get_str(const std::string& key, const std::string& fallback) const;
  std::int64_t get_int(const std::string& key) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  // Later entries win.
  void merge(const KvConfig& other);

  std::uint64_t content_hash() const;
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace latlab
