#include "advinterp/cli/run_config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace advinterp::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

const std::map<std::string, std::set<std::string>>& key_table() {
  static const std::set<std::string> common{"seed", "workers", "out"};
  static const std::set<std::string> plan_keys{
      "n_vali",          "n_test",        "noise",          "noise_convention",
      "degree",          "bandwidth_min", "bandwidth_max",  "bandwidth_count",
      "singular_exponent", "ip1_scale",   "ip2_delta",      "grid_resolution",
      "replications"};
  auto with = [&](std::set<std::string> extra, bool plan) {
    extra.insert(common.begin(), common.end());
    if (plan) extra.insert(plan_keys.begin(), plan_keys.end());
    return extra;
  };
  static const std::map<std::string, std::set<std::string>> table{
      {"simulate", with({"cases", "n_train", "radii", "methods"}, true)},
      {"curse", with({"case", "method", "r_rule", "r", "n_list"}, true)},
      {"phase-diagram", with({"regime", "beta", "d", "r_exponents"}, false)},
      {"theory-check",
       with({"sigma", "deltas", "n_mc", "ks", "k_mc", "cost_n", "cost_nrd", "cost_designs",
             "cost_resolution", "corrupt_closed_form"},
            false)},
      {"rate-report",
       with({"n", "r", "beta", "d", "delta", "sigma", "c3", "c_low", "c4"}, false)},
  };
  return table;
}

[[noreturn]] void bad_value(const std::string& key, std::string_view value, const char* what) {
  throw ConfigError(key, "invalid value '" + std::string(value) + "' for key '" + key +
                             "' (expected " + what + ")");
}

double to_double(const std::string& key, std::string_view s) {
  try {
    std::size_t used = 0;
    const std::string str(s);
    const double v = std::stod(str, &used);
    if (used != str.size()) bad_value(key, s, "a number");
    return v;
  } catch (const std::logic_error&) {
    bad_value(key, s, "a number");
  }
}

std::int64_t to_int(const std::string& key, std::string_view s) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    // Accept integral scientific notation such as 1e5.
    const double d = to_double(key, s);
    if (d != static_cast<double>(static_cast<std::int64_t>(d))) bad_value(key, s, "an integer");
    return static_cast<std::int64_t>(d);
  }
  return v;
}

}  // namespace

const std::set<std::string>& allowed_keys(const std::string& subcommand) {
  const auto& table = key_table();
  const auto it = table.find(subcommand);
  if (it == table.end()) throw ConfigError("", "unknown subcommand '" + subcommand + "'");
  return it->second;
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  while (true) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

RunConfig::RunConfig(std::string subcommand) : subcommand_(std::move(subcommand)) {
  allowed_keys(subcommand_);
}

void RunConfig::set(const std::string& key, std::string value) {
  if (allowed_keys(subcommand_).count(key) == 0)
    throw ConfigError(key, "unknown key '" + key + "' for subcommand " + subcommand_);
  values_[key] = std::move(value);
}

RunConfig RunConfig::parse(std::string subcommand, std::string_view text) {
  RunConfig cfg(std::move(subcommand));
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("", "line " + std::to_string(line_no) + ": expected key=value");
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError("", "line " + std::to_string(line_no) + ": empty key");
    cfg.set(key, std::string(trim(line.substr(eq + 1))));
  }
  return cfg;
}

RunConfig RunConfig::load(std::string subcommand, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(std::move(subcommand), buf.str());
}

std::string RunConfig::serialize() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
  return out;
}

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double RunConfig::get_double(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : to_double(key, it->second);
}

std::int64_t RunConfig::get_int(const std::string& key, std::int64_t fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : to_int(key, it->second);
}

std::vector<double> RunConfig::get_doubles(const std::string& key,
                                           std::vector<double> fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<double> out;
  for (const auto& item : split_list(it->second)) out.push_back(to_double(key, item));
  return out;
}

std::vector<std::int64_t> RunConfig::get_ints(const std::string& key,
                                              std::vector<std::int64_t> fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  std::vector<std::int64_t> out;
  for (const auto& item : split_list(it->second)) out.push_back(to_int(key, item));
  return out;
}

std::vector<std::string> RunConfig::get_strings(const std::string& key,
                                                std::vector<std::string> fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : split_list(it->second);
}

}  // namespace advinterp::cli
