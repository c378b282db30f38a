#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace vanhove::cli {

struct Column {
  std::string name;
  std::string description;
};

using Cell = std::variant<double, long, std::string>;

struct Table {
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Header row, then one line per row. Reals use 17 significant digits.
void write_csv(std::ostream& out, const Table& t);
std::string format_real(double v);

struct Series {
  std::string label;
  std::vector<double> x, y;
  bool line = false;  // polyline instead of markers
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = true;
  std::vector<Series> series;
  std::optional<std::string> timestamp;  // omitted in deterministic mode
};

void write_svg(std::ostream& out, const PlotSpec& plot);

}  // namespace vanhove::cli
