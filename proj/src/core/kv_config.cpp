#include "latlab/core/kv_config.hpp"

#include <cstdio>
#include <sstream>

#include "latlab/core/errors.hpp"
#include "latlab/core/hashing.hpp"
#include "latlab/core/records.hpp"
#include "latlab/core/text.hpp"

namespace latlab {

KvConfig KvConfig::load(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ConfigError("config file not found: " + path.string());
  return parse(read_text_file(path));
}

KvConfig KvConfig::parse(std::string_view text) {
  KvConfig cfg;
  std::size_t lineno = 0;
  for (const auto& raw : split_on(text, '\n')) {
    ++lineno;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + " has no '=': " + line);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + " has empty key");
    cfg.values_[key] = value;
  }
  return cfg;
}

std::string KvConfig::to_string() const {
  std::ostringstream out;
  for (const auto& [k, v] : values_) out << k << " = " << v << '\n';
  return out.str();
}

void KvConfig::save(const std::filesystem::path& path) const {
  write_text_file(path, to_string());
}

void KvConfig::set_double(const std::string& key, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  values_[key] = buf;
}

void KvConfig::apply_override(std::string_view assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string_view::npos)
    throw ConfigError("override must look like key=value, got: " + std::string(assignment));
  std::string key = trim(assignment.substr(0, eq));
  std::string value = trim(assignment.substr(eq + 1));
  if (key.empty()) throw ConfigError("override has empty key: " + std::string(assignment));
  values_[key] = value;
}

std::string KvConfig::get_str(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key: " + key);
  return it->second;
}

std::string KvConfig::get_str(const std::string& key, const std::string& fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

std::int64_t KvConfig::get_int(const std::string& key) const {
  const std::string v = get_str(key);
  try {
    std::size_t pos = 0;
    std::int64_t out = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + " is not an integer: " + v);
  }
}

std::int64_t KvConfig::get_int(const std::string& key, std::int64_t fallback) const {
  return has(key) ? get_int(key) : fallback;
}

double KvConfig::get_double(const std::string& key) const {
  const std::string v = get_str(key);
  try {
    std::size_t pos = 0;
    double out = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + " is not a number: " + v);
  }
}

double KvConfig::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

bool KvConfig::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  std::string v = lower_ascii(get_str(key));
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError("config key " + key + " is not a boolean: " + v);
}

void KvConfig::merge(const KvConfig& other) {
  for (const auto& [k, v] : other.values_) values_[k] = v;
}

std::uint64_t KvConfig::content_hash() const {
  StreamHash h;
  for (const auto& [k, v] : values_) {
    h.update(k).update("\x1f").update(v).update("\x1e");
  }
  return h.value();
}

}  // namespace latlab
