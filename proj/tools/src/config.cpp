#include "config.hpp"

#include <cmath>
#include <sstream>

namespace vanhove::cli {

namespace {

const OptionSpec* find(const std::vector<OptionSpec>& specs, const std::string& key) {
  for (const auto& s : specs)
    if (s.key == key) return &s;
  return nullptr;
}

json coerce(const OptionSpec& spec, const json& v, const std::string& origin) {
  const std::string where = origin + ": '" + spec.key + "'";
  switch (spec.kind) {
    case OptionKind::real:
      if (!v.is_number()) throw ConfigError(where + " must be a number");
      if (!std::isfinite(v.get<double>())) throw ConfigError(where + " must be finite");
      return v.get<double>();
    case OptionKind::integer:
      if (!v.is_number_integer()) throw ConfigError(where + " must be an integer");
      return v.get<long>();
    case OptionKind::text:
      if (!v.is_string()) throw ConfigError(where + " must be a string");
      return v;
    case OptionKind::flag:
      if (!v.is_boolean()) throw ConfigError(where + " must be true or false");
      return v;
    case OptionKind::real_list: {
      if (!v.is_array() || v.empty()) throw ConfigError(where + " must be a non-empty list of numbers");
      json out = json::array();
      for (const auto& e : v) {
        if (!e.is_number() || !std::isfinite(e.get<double>()))
          throw ConfigError(where + " must hold finite numbers");
        out.push_back(e.get<double>());
      }
      return out;
    }
  }
  throw ConfigError(where + ": unknown option kind");
}

double parse_real(const std::string& key, const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ConfigError("--" + key + ": '" + s + "' is not a number");
  return v;
}

}  // namespace

json defaults(const std::vector<OptionSpec>& specs) {
  json j = json::object();
  for (const auto& s : specs) j[s.key] = s.fallback;
  return j;
}

json merge_config(const std::vector<OptionSpec>& specs, json base, const json& overrides,
                  const std::string& origin) {
  if (!overrides.is_object()) throw ConfigError(origin + ": expected a JSON object");
  for (const auto& [key, value] : overrides.items()) {
    const auto* spec = find(specs, key);
    if (!spec) throw ConfigError(origin + ": unknown key '" + key + "'");
    base[key] = coerce(*spec, value, origin);
  }
  return base;
}

json parse_flag_value(const OptionSpec& spec, const std::string& text) {
  switch (spec.kind) {
    case OptionKind::real: return parse_real(spec.key, text);
    case OptionKind::integer: {
      std::size_t used = 0;
      long v = 0;
      try {
        v = std::stol(text, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != text.size())
        throw ConfigError("--" + spec.key + ": '" + text + "' is not an integer");
      return v;
    }
    case OptionKind::text: return text;
    case OptionKind::flag: return true;
    case OptionKind::real_list: {
      json out = json::array();
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ',')) out.push_back(parse_real(spec.key, item));
      if (out.empty()) throw ConfigError("--" + spec.key + ": empty list");
      return out;
    }
  }
  throw ConfigError("unknown option kind");
}

Config::Config(const std::vector<OptionSpec>& specs, json merged) : merged_(std::move(merged)) {
  for (const auto& s : specs)
    if (!merged_.contains(s.key)) throw ConfigError("missing value for '" + s.key + "'");
}

const json& Config::at(const std::string& key) const {
  if (!merged_.contains(key)) throw ConfigError("no option '" + key + "' for this command");
  return merged_.at(key);
}

double Config::real(const std::string& key) const { return at(key).get<double>(); }
long Config::integer(const std::string& key) const { return at(key).get<long>(); }
std::string Config::text(const std::string& key) const { return at(key).get<std::string>(); }
bool Config::flag(const std::string& key) const { return at(key).get<bool>(); }

std::vector<double> Config::reals(const std::string& key) const {
  return at(key).get<std::vector<double>>();
}

double Config::positive(const std::string& key) const {
  const double v = real(key);
  if (!(v > 0.0)) throw ConfigError("'" + key + "' must be positive");
  return v;
}

long Config::positive_integer(const std::string& key) const {
  const long v = integer(key);
  if (v <= 0) throw ConfigError("'" + key + "' must be a positive integer");
  return v;
}

std::string Config::choice(const std::string& key, const std::vector<std::string>& allowed) const {
  const std::string v = text(key);
  for (const auto& a : allowed)
    if (a == v) return v;
  std::string list;
  for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
  throw ConfigError("'" + key + "' must be one of: " + list);
}

}  // namespace vanhove::cli
