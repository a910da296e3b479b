#pragma once

// Flat key = value configuration with command-line overrides.

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace shapegeo::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Config {
 public:
  /// Lines are `key = value`; blank lines and lines starting with '#' are
  /// skipped. A repeated key keeps the last value.
  static Config parse(const std::string& text, const std::string& source = "<string>");
  static Config load(const std::filesystem::path& path);

  void set(const std::string& key, const std::string& value);
  /// "key=value" as given to --set.
  void apply_assignment(const std::string& assignment);
  void merge(const Config& later);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& raw(const std::string& key) const;

  std::string get_string(const std::string& key) const { return raw(key); }
  double get_double(const std::string& key) const;
  int get_int(const std::string& key) const;
  std::uint64_t get_uint64(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  /// Comma-separated values; integer lists also accept a range `a..b`.
  std::vector<double> get_double_list(const std::string& key) const;
  std::vector<int> get_int_list(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const noexcept { return values_; }
  /// Sorted `key = value` lines, parseable by Config::parse.
  std::string to_text() const;

 private:
  std::map<std::string, std::string> values_;
};

std::string trim(const std::string& s);

}  // namespace shapegeo::cli
