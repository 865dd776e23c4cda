#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace advinterp::cli {

//! Configuration problem; key() names the offending setting when known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

//! Flat key=value settings for one subcommand.
//!
//! Text format: one `key=value` per line, `#` starts a comment, blank lines
//! are ignored, lists are comma separated. Keys not accepted by the
//! subcommand are rejected.
class RunConfig {
 public:
  RunConfig() = default;
  explicit RunConfig(std::string subcommand);

  static RunConfig parse(std::string subcommand, std::string_view text);
  static RunConfig load(std::string subcommand, const std::string& path);

  //! Canonical text form: sorted key=value lines.
  std::string serialize() const;

  const std::string& subcommand() const { return subcommand_; }
  const std::map<std::string, std::string>& values() const { return values_; }

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  void set(const std::string& key, std::string value);

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback) const;
  std::vector<std::int64_t> get_ints(const std::string& key,
                                     std::vector<std::int64_t> fallback) const;
  std::vector<std::string> get_strings(const std::string& key,
                                       std::vector<std::string> fallback) const;

  bool operator==(const RunConfig&) const = default;

 private:
  std::string subcommand_;
  std::map<std::string, std::string> values_;
};

//! Keys accepted by a subcommand (including seed, workers and out).
const std::set<std::string>& allowed_keys(const std::string& subcommand);

std::vector<std::string> split_list(std::string_view text);

}  // namespace advinterp::cli
