#pragma once

#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "output.hpp"

namespace vanhove::cli {

/// Tracks whether a command is still validating its input (errors map to
/// exit 2) or already computing (errors map to exit 3).
struct Phase {
  bool computing = false;
  void begin_compute() { computing = true; }
};

struct Outcome {
  Table table;
  json report = json::object();
  json seeds = json::object();
  bool converged = true;
  double max_error = 0.0;
  std::optional<PlotSpec> plot;
};

struct CommandDef {
  std::string name;
  std::string summary;
  std::vector<Column> columns;
  std::vector<OptionSpec> options;
  Outcome (*run)(const Config&, Phase&);
};

const std::vector<CommandDef>& commands();

}  // namespace vanhove::cli
