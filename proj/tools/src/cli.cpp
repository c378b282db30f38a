#include "cli.hpp"

#include <Eigen/Core>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "vanhove/error.hpp"
#include "vanhove/parallel.hpp"

#ifndef VANHOVE_VERSION
#define VANHOVE_VERSION "0"
#endif

namespace vanhove::cli {

namespace {

namespace fs = std::filesystem;

std::string flag_name(const std::string& key) {
  std::string s = "--" + key;
  for (auto& c : s)
    if (c == '_') c = '-';
  return s;
}

std::string columns_help(const CommandDef& d) {
  std::string s = "CSV columns:\n";
  for (const auto& c : d.columns) s += "  " + c.name + ": " + c.description + "\n";
  s += "Every option may also be given as a key of the JSON --config file\n"
       "(same name with underscores); flags override the file.";
  return s;
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void report_error(std::ostream& err, const std::string& kind, const std::string& phase,
                  const std::string& message) {
  json j = {{"status", "error"}, {"error", kind}, {"phase", phase}, {"message", message}};
  err << "vanhove: " << j.dump() << '\n';
}

bool is_input_error(ErrorKind k) {
  return k == ErrorKind::InvalidArgument || k == ErrorKind::ZeroFrequency;
}

int execute(const CommandDef& def, const Config& cfg, std::ostream& out, std::ostream& err) {
  const auto t0 = std::chrono::steady_clock::now();
  const bool deterministic = cfg.flag("deterministic");
  const std::string started = utc_now();
  Phase phase;
  Outcome res;
  try {
    res = def.run(cfg, phase);
  } catch (const ConfigError& e) {
    report_error(err, "ConfigError", phase.computing ? "compute" : "validation", e.what());
    return kExitConfig;
  } catch (const Error& e) {
    const bool input = !phase.computing || is_input_error(e.kind());
    report_error(err, std::string(to_string(e.kind())), phase.computing ? "compute" : "validation", e.what());
    return input ? kExitConfig : kExitNumerical;
  } catch (const std::exception& e) {
    report_error(err, "InternalError", phase.computing ? "compute" : "validation", e.what());
    return kExitNumerical;
  }
  res.table.columns = def.columns;

  const fs::path dir = cfg.text("out");
  const std::string base = cfg.text("name").empty() ? def.name : cfg.text("name");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    report_error(err, "ConfigError", "output", "cannot create '" + dir.string() + "': " + ec.message());
    return kExitConfig;
  }
  const std::string csv_name = base + ".csv", svg_name = base + ".svg";
  {
    std::ofstream f(dir / csv_name, std::ios::binary);
    write_csv(f, res.table);
    if (!f) {
      report_error(err, "IOError", "output", "cannot write " + (dir / csv_name).string());
      return kExitConfig;
    }
  }
  const bool plot = cfg.flag("plot") && res.plot.has_value();
  if (plot) {
    if (!deterministic) res.plot->timestamp = started;
    std::ofstream f(dir / svg_name, std::ios::binary);
    write_svg(f, *res.plot);
  }

  json m;
  m["schema"] = "vanhove-lab/1";
  m["command"] = def.name;
  m["config"] = cfg.raw();
  m["versions"] = {{"vanhove", VANHOVE_VERSION},
                   {"compiler", __VERSION__},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                 "." + std::to_string(EIGEN_MINOR_VERSION)},
                   {"cli11", CLI11_VERSION},
                   {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                         std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
  m["seeds"] = res.seeds;
  json cols = json::array();
  for (const auto& c : def.columns) cols.push_back({{"name", c.name}, {"description", c.description}});
  m["columns"] = cols;
  m["rows"] = res.table.rows.size();
  m["artifacts"] = {{"csv", csv_name}, {"svg", plot ? json(svg_name) : json(nullptr)}};
  m["report"] = res.report;
  m["converged"] = res.converged;
  m["max_error_estimate"] = res.max_error;
  if (!deterministic) {
    m["threads"] = worker_count();
    m["started_at"] = started;
    m["wall_time_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  {
    std::ofstream f(dir / (base + ".manifest.json"), std::ios::binary);
    f << m.dump(2) << '\n';
  }

  out << def.name << ": " << res.table.rows.size() << " rows -> " << (dir / csv_name).string() << '\n';
  if (!res.report.empty()) out << res.report.dump(2) << '\n';
  if (!res.converged) {
    report_error(err, "NotConverged", "compute", "at least one integral missed its tolerance");
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Van Hove self-energy lab: sweeps, oracle cross-checks, fits and plots", "vanhove"};
  app.require_subcommand(1);
  app.footer("Exit status: 0 ok, 2 configuration error, 3 numerical non-convergence.\n"
             "VANHOVE_THREADS overrides the worker count.");

  struct Bound {
    const CommandDef* def;
    CLI::App* sub;
    std::string config_path;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
  };
  std::vector<Bound> bound;
  bound.reserve(commands().size());
  for (const auto& def : commands()) {
    bound.push_back({&def, app.add_subcommand(def.name, def.summary), {}, {}, {}});
    auto& b = bound.back();
    b.sub->footer(columns_help(def));
    b.sub->add_option("--config", b.config_path, "JSON file with option values");
    for (const auto& o : def.options) {
      const std::string help = o.help + " (default " + o.fallback.dump() + ")";
      if (o.kind == OptionKind::flag)
        b.options[o.key] = b.sub->add_flag(flag_name(o.key), help);
      else
        b.options[o.key] = b.sub->add_option(flag_name(o.key), b.values[o.key], help);
    }
  }

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  for (auto& b : bound) {
    if (!b.sub->parsed()) continue;
    try {
      json merged = defaults(b.def->options);
      if (!b.config_path.empty()) {
        std::ifstream f(b.config_path);
        if (!f) throw ConfigError("cannot read config file '" + b.config_path + "'");
        json file;
        try {
          file = json::parse(f);
        } catch (const json::parse_error& e) {
          throw ConfigError("config file '" + b.config_path + "' is not valid JSON: " + e.what());
        }
        merged = merge_config(b.def->options, merged, file, b.config_path);
      }
      json flags = json::object();
      for (const auto& o : b.def->options)
        if (b.options[o.key]->count() > 0)
          flags[o.key] = o.kind == OptionKind::flag ? json(true) : parse_flag_value(o, b.values[o.key]);
      merged = merge_config(b.def->options, merged, flags, "command line");
      return execute(*b.def, Config(b.def->options, merged), out, err);
    } catch (const ConfigError& e) {
      report_error(err, "ConfigError", "validation", e.what());
      return kExitConfig;
    }
  }
  return kExitConfig;
}

}  // namespace vanhove::cli
