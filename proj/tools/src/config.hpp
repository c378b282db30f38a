#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace vanhove::cli {

using json = nlohmann::ordered_json;

/// Bad configuration; maps to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OptionKind { real, integer, text, flag, real_list };

struct OptionSpec {
  std::string key;  // config key; the flag is --key with '_' -> '-'
  OptionKind kind;
  json fallback;    // default value
  std::string help;
};

/// Merged run configuration: defaults, then the config file, then flags.
class Config {
 public:
  Config(const std::vector<OptionSpec>& specs, json merged);

  double real(const std::string& key) const;
  long integer(const std::string& key) const;
  std::string text(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<double> reals(const std::string& key) const;
  const json& raw() const { return merged_; }

  // Checked accessors for common preconditions.
  double positive(const std::string& key) const;
  long positive_integer(const std::string& key) const;
  std::string choice(const std::string& key, const std::vector<std::string>& allowed) const;

 private:
  const json& at(const std::string& key) const;
  json merged_;
};

/// Applies `overrides` on top of `base`, checking each key against `specs`
/// and converting values to the declared kind.
json merge_config(const std::vector<OptionSpec>& specs, json base, const json& overrides,
                  const std::string& origin);

/// Parses a flag value given on the command line into the declared kind.
json parse_flag_value(const OptionSpec& spec, const std::string& text);

json defaults(const std::vector<OptionSpec>& specs);

}  // namespace vanhove::cli
