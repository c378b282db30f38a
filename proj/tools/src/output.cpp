#include "output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace vanhove::cli {

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

void write_csv(std::ostream& out, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i].name;
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      std::visit(
          [&out](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>)
              out << format_real(v);
            else
              out << v;
          },
          row[i]);
    }
    out << '\n';
  }
}

namespace {

std::string escape(const std::string& s) {
  std::string r;
  for (char c : s) {
    switch (c) {
      case '&': r += "&amp;"; break;
      case '<': r += "&lt;"; break;
      case '>': r += "&gt;"; break;
      case '"': r += "&quot;"; break;
      default: r += c;
    }
  }
  return r;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// About five round-valued ticks covering [lo, hi].
std::vector<double> linear_ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  std::vector<double> t;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step)
    t.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
  return t;
}

}  // namespace

void write_svg(std::ostream& out, const PlotSpec& plot) {
  const double W = 720, H = 480, L = 80, R = 20, T = 40, B = 60;
  auto tx = [&](double x) { return plot.log_x ? std::log10(x) : x; };

  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : plot.series)
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.y[i]) || (plot.log_x && !(s.x[i] > 0))) continue;
      x0 = std::min(x0, tx(s.x[i]));
      x1 = std::max(x1, tx(s.x[i]));
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-12 * (1 + std::abs(y0))) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;

  auto px = [&](double x) { return L + (tx(x) - x0) / (x1 - x0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  if (plot.timestamp) out << "<!-- generated " << escape(*plot.timestamp) << " -->\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(plot.title) << "</text>\n";
  out << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\""
      << H - T - B << "\" fill=\"none\" stroke=\"black\"/>\n";

  // x ticks: decades on a log axis
  std::vector<double> xt;
  if (plot.log_x) {
    for (double e = std::ceil(x0 - 1e-9); e <= x1 + 1e-9; e += 1.0) xt.push_back(std::pow(10.0, e));
  } else {
    xt = linear_ticks(x0, x1);
  }
  for (double v : xt) {
    const double X = px(v);
    out << "<line x1=\"" << num(X) << "\" y1=\"" << H - B << "\" x2=\"" << num(X) << "\" y2=\""
        << H - B + 5 << "\" stroke=\"black\"/>";
    out << "<text x=\"" << num(X) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">"
        << tick_label(v) << "</text>\n";
  }
  for (double v : linear_ticks(y0, y1)) {
    const double Y = py(v);
    out << "<line x1=\"" << L - 5 << "\" y1=\"" << num(Y) << "\" x2=\"" << L << "\" y2=\"" << num(Y)
        << "\" stroke=\"black\"/>";
    out << "<text x=\"" << L - 8 << "\" y=\"" << num(Y + 4) << "\" text-anchor=\"end\">"
        << tick_label(v) << "</text>\n";
  }
  out << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">"
      << escape(plot.x_label) << "</text>\n";
  out << "<text x=\"18\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << (T + H - B) / 2 << ")\">" << escape(plot.y_label) << "</text>\n";

  const char* colors[] = {"#1f5fa8", "#c0392b", "#2e8b57", "#8e44ad"};
  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const auto& s = plot.series[k];
    const char* c = colors[k % 4];
    if (s.line) {
      out << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.x.size(); ++i)
        if (std::isfinite(s.y[i])) out << num(px(s.x[i])) << ',' << num(py(s.y[i])) << ' ';
      out << "\"/>\n";
    } else {
      for (std::size_t i = 0; i < s.x.size(); ++i)
        if (std::isfinite(s.y[i]))
          out << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i]))
              << "\" r=\"3\" fill=\"" << c << "\"/>\n";
    }
    const double ly = T + 16 + 16 * k;
    out << "<rect x=\"" << W - R - 180 << "\" y=\"" << ly - 9 << "\" width=\"10\" height=\"10\" fill=\"" << c
        << "\"/><text x=\"" << W - R - 165 << "\" y=\"" << ly << "\">" << escape(s.label) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace vanhove::cli
