#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "vanhove/bubbles.hpp"
#include "vanhove/dispersion.hpp"
#include "vanhove/error.hpp"
#include "vanhove/fitlab.hpp"
#include "vanhove/geometry.hpp"
#include "vanhove/parallel.hpp"
#include "vanhove/selfenergy.hpp"

#ifndef VANHOVE_DATA_DIR
#define VANHOVE_DATA_DIR "data"
#endif

namespace vanhove::cli {

namespace {

namespace se = vanhove::selfenergy;
using dispersion::DispersionModel;
using dispersion::Vec2;
using K = OptionKind;

constexpr double kLn2 = std::numbers::ln2;
constexpr double kPi = std::numbers::pi;

// ------------------------------------------------------------ option groups

std::vector<OptionSpec> output_options() {
  return {
      {"out", K::text, ".", "output directory"},
      {"name", K::text, "", "base name of the artifacts (default: the command name)"},
      {"plot", K::flag, false, "also write an SVG plot"},
      {"deterministic", K::flag, false, "omit wall time, thread count and timestamps"},
  };
}

std::vector<OptionSpec> quad_options(double abs_tol, double rel_tol, long evals) {
  return {
      {"abs_tol", K::real, abs_tol, "absolute quadrature tolerance"},
      {"rel_tol", K::real, rel_tol, "relative quadrature tolerance"},
      {"max_evals", K::integer, evals, "integrand evaluation budget per integral"},
  };
}

std::vector<OptionSpec> grid_options(double lo, double hi, long points) {
  return {
      {"q0_min", K::real, lo, "smallest q0 of the sweep"},
      {"q0_max", K::real, hi, "largest q0 of the sweep"},
      {"q0_points", K::integer, points, "number of q0 values"},
      {"q0_spacing", K::text, "geometric", "geometric or linear"},
  };
}

std::vector<OptionSpec> model_options() {
  return {
      {"model", K::text, "hubbard", "hubbard or xy"},
      {"theta", K::real, 0.3, "Hubbard next-neighbour parameter, 0 < theta < 1"},
      {"mu", K::real, 0.0, "chemical potential"},
  };
}

template <class... V>
std::vector<OptionSpec> join(V... groups) {
  std::vector<OptionSpec> all;
  (all.insert(all.end(), groups.begin(), groups.end()), ...);
  return all;
}

// --------------------------------------------------------------- validation

quad::QuadSpec quad_spec(const Config& c) {
  quad::QuadSpec s;
  s.abs_tol = c.real("abs_tol");
  s.rel_tol = c.real("rel_tol");
  s.max_evaluations = c.integer("max_evals");
  s.validate();
  return s;
}

std::vector<double> q0_grid(const Config& c) {
  const double lo = c.real("q0_min"), hi = c.real("q0_max");
  const long n = c.positive_integer("q0_points");
  const auto spacing = c.choice("q0_spacing", {"geometric", "linear"});
  if (lo > hi) throw ConfigError("q0_min must not exceed q0_max");
  if (n == 1 && lo != hi) throw ConfigError("a single q0 point needs q0_min == q0_max");
  std::vector<double> q(n);
  for (long i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
    if (spacing == "geometric") {
      if (!(lo > 0.0)) throw ConfigError("a geometric q0 grid needs q0_min > 0");
      q[i] = std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)));
    } else {
      q[i] = lo + t * (hi - lo);
    }
    if (q[i] == 0.0) throw Error(ErrorKind::ZeroFrequency, "the q0 grid contains q0 = 0");
  }
  return q;
}

matsubara::ThermalState thermal(const Config& c) {
  if (c.flag("zero_temperature")) return matsubara::ThermalState::zero();
  return matsubara::ThermalState::at_beta(c.real("beta"));
}

std::vector<double> beta_list(const Config& c) {
  auto b = c.reals("beta_list");
  for (double x : b)
    if (!(x > 0.0)) throw Error(ErrorKind::InvalidArgument, "every beta must be positive");
  return b;
}

DispersionModel model(const Config& c) {
  const auto kind = c.choice("model", {"hubbard", "xy"});
  if (kind == "xy") return DispersionModel::xy();
  return DispersionModel::hubbard(c.real("theta"), c.real("mu"));
}

// ----------------------------------------------------------------- helpers

json fit_json(const fitlab::LogFit& f) {
  return {{"model", "y = a (ln x)^2 + b ln x + c"},
          {"a", f.a},
          {"b", f.b},
          {"c", f.c},
          {"stderr_a", f.stderr_a},
          {"stderr_b", f.stderr_b},
          {"stderr_c", f.stderr_c},
          {"window_min", f.window_min},
          {"window_max", f.window_max},
          {"half_window_shift_a", f.shift_a},
          {"half_window_shift_b", f.shift_b},
          {"kappa", f.kappa},
          {"rss", f.rss},
          {"samples", f.samples}};
}

// Fit when the sweep is long enough; otherwise say why not.
std::optional<fitlab::LogFit> try_fit(const std::vector<double>& x, const std::vector<double>& y,
                                      json& report, const std::string& key) {
  std::vector<fitlab::Sample> s;
  for (std::size_t i = 0; i < x.size(); ++i) s.push_back({std::abs(x[i]), y[i]});
  try {
    const auto f = fitlab::fit_log_square(s);
    report[key] = fit_json(f);
    return f;
  } catch (const Error& e) {
    report[key] = {{"skipped", e.what()}};
    return std::nullopt;
  }
}

Series fit_curve(const fitlab::LogFit& f, const std::string& label) {
  Series s{label, {}, {}, true};
  const double a = std::log(f.window_min), b = std::log(f.window_max);
  for (int i = 0; i <= 100; ++i) {
    const double u = a + (b - a) * i / 100.0;
    s.x.push_back(std::exp(u));
    s.y.push_back(f.a * u * u + f.b * u + f.c);
  }
  return s;
}

PlotSpec sweep_plot(const std::string& title, const std::string& ylabel, const std::vector<double>& x,
                    const std::vector<double>& y, const std::optional<fitlab::LogFit>& fit) {
  PlotSpec p;
  p.title = title;
  p.x_label = "q0";
  p.y_label = ylabel;
  std::vector<double> ax;
  for (double v : x) ax.push_back(std::abs(v));
  p.series.push_back({"data", ax, y, false});
  if (fit) p.series.push_back(fit_curve(*fit, "fitted a u^2 + b u + c"));
  return p;
}

long flag01(bool b) { return b ? 1 : 0; }

// ---------------------------------------------------------------- commands

Outcome run_sigma2(const Config& c, Phase& ph) {
  const auto q = q0_grid(c);
  const auto spec = quad_spec(c);
  const auto st = thermal(c);
  const Vec2 mom(c.real("xi"), c.real("eta"));
  const long og = c.integer("oracle_grid");
  if (og < 0) throw ConfigError("'oracle_grid' must be >= 0");
  std::vector<int> index(q.size(), 0);
  if (og > 0) {
    if (st.zero_temperature) throw ConfigError("the frequency-sum oracle needs finite beta");
    if (mom.norm() != 0.0) throw ConfigError("the frequency-sum oracle is implemented at q = 0");
    if (og % 2) throw ConfigError("'oracle_grid' must be even");
    c.positive("oracle_cutoff");
    for (std::size_t i = 0; i < q.size(); ++i) {
      const double n = (q[i] * st.beta / kPi - 1.0) / 2.0;
      if (std::abs(n - std::round(n)) > 1e-9)
        throw ConfigError("oracle runs need fermionic Matsubara q0 = (2n+1) pi / beta");
      index[i] = static_cast<int>(std::lround(n));
    }
  }
  ph.begin_compute();
  const double cutoff_factor = og > 0 ? c.real("oracle_cutoff") : 0.0;
  struct Row {
    quad::ComplexQuadResult r;
    se::FrequencySumOracle o;
  };
  const auto rows = parallel_map<Row>(q.size(), [&](std::size_t i) {
    Row row{se::sigma2(q[i], mom, st, spec), {}};
    if (og > 0)
      row.o = se::frequency_sum_oracle(st.beta, index[i], cutoff_factor * kPi / st.beta, static_cast<int>(og));
    return row;
  });
  Outcome out;
  std::vector<double> im;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const auto& r = rows[i].r;
    const double nan = std::nan("");
    const bool has = og > 0;
    out.table.rows.push_back({q[i], r.value.real(), r.value.imag(), r.error_estimate, r.evaluations,
                              flag01(r.converged), has ? rows[i].o.value.real() : nan,
                              has ? rows[i].o.value.imag() : nan, has ? rows[i].o.budget() : nan,
                              has ? flag01(std::abs(rows[i].o.value - r.value) <=
                                           rows[i].o.budget() + r.error_estimate)
                                  : -1L});
    out.converged = out.converged && r.converged;
    out.max_error = std::max(out.max_error, r.error_estimate);
    im.push_back(r.value.imag());
  }
  out.plot = sweep_plot("Im Sigma2(q0, q)", "Im Sigma2", q, im, std::nullopt);
  out.plot->log_x = q.front() > 0.0 && q.back() > 0.0;
  return out;
}

Outcome run_dsigma(const Config& c, Phase& ph) {
  const auto q = q0_grid(c);
  const auto spec = quad_spec(c);
  const auto form_name = c.choice("form", {"dilog_1d", "log_2d", "direct_4d"});
  const auto form = form_name == "dilog_1d" ? se::IForm::dilog_1d
                    : form_name == "log_2d" ? se::IForm::log_2d
                                            : se::IForm::direct_4d;
  ph.begin_compute();
  const auto rows = parallel_map<quad::QuadResult>(
      q.size(), [&](std::size_t i) { return se::frequency_integral(std::abs(q[i]), form, spec); });
  Outcome out;
  std::vector<double> y;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const auto& r = rows[i];
    const double v = -2.0 * r.value, e = 2.0 * r.error_estimate;
    out.table.rows.push_back({q[i], std::log(std::abs(q[i])), v, e, r.evaluations, flag01(r.converged)});
    out.converged = out.converged && r.converged;
    out.max_error = std::max(out.max_error, e);
    y.push_back(v);
  }
  const auto fit = try_fit(q, y, out.report, "fit");
  const double c1 = se::c1_constant();
  out.report["reference"] = {{"a", -4.0 * kLn2}, {"C1", c1}, {"b", 2.0 * c1},
                             {"note", "b is the ln q0 coefficient; -b multiplies |ln q0|"}};
  out.plot = sweep_plot("Im d/dq0 Sigma2(q0, 0), zero temperature", "Im d/dq0 Sigma2", q, y, fit);
  return out;
}

Outcome run_grad(const Config& c, Phase& ph) {
  const auto betas = beta_list(c);
  const double q0 = c.real("q0");
  if (q0 == 0.0) throw Error(ErrorKind::ZeroFrequency, "q0 must be nonzero");
  const auto spec = quad_spec(c);
  const long mc = c.integer("mc_samples");
  if (mc < 0 || (mc > 0 && mc < 2)) throw ConfigError("'mc_samples' must be 0 or at least 2");
  const auto seed = static_cast<std::uint64_t>(c.integer("seed"));
  ph.begin_compute();
  struct Row {
    se::Gradient g, m;
  };
  const auto rows = parallel_map<Row>(betas.size(), [&](std::size_t i) {
    const auto st = matsubara::ThermalState::at_beta(betas[i]);
    Row r{se::grad_sigma2_at_vh(q0, st, spec), {}};
    if (mc > 0) r.m = se::grad_sigma2_mc(q0, st, mc, seed + i);
    return r;
  });
  Outcome out;
  out.seeds["seed"] = c.integer("seed");
  bool all = true;
  for (std::size_t i = 0; i < betas.size(); ++i) {
    const auto& g = rows[i].g;
    const bool ok = std::abs(g.d_xi.value) <= 10.0 * g.d_xi.error_estimate + 1e-14 &&
                    std::abs(g.d_eta.value) <= 10.0 * g.d_eta.error_estimate + 1e-14;
    all = all && ok;
    const double nan = std::nan("");
    const auto& m = rows[i].m;
    out.table.rows.push_back({betas[i], g.d_xi.value.real(), g.d_xi.value.imag(), g.d_xi.error_estimate,
                              g.d_eta.value.real(), g.d_eta.value.imag(), g.d_eta.error_estimate,
                              flag01(ok), mc > 0 ? std::abs(m.d_xi.value) : nan,
                              mc > 0 ? m.d_xi.error_estimate : nan, mc > 0 ? std::abs(m.d_eta.value) : nan,
                              mc > 0 ? m.d_eta.error_estimate : nan,
                              flag01(g.d_xi.converged && g.d_eta.converged)});
    out.converged = out.converged && g.d_xi.converged && g.d_eta.converged;
    out.max_error = std::max({out.max_error, g.d_xi.error_estimate, g.d_eta.error_estimate});
  }
  out.report["all_within_10_error_estimates"] = all;
  return out;
}

Outcome run_d2_xieta(const Config& c, Phase& ph) {
  const auto q = q0_grid(c);
  const auto spec = quad_spec(c);
  ph.begin_compute();
  const auto rows = parallel_map<se::MixedSecond>(
      q.size(), [&](std::size_t i) { return se::d2_sigma2_xi_eta(q[i], spec); });
  Outcome out;
  std::vector<double> total, z12;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const auto& r = rows[i];
    out.table.rows.push_back({q[i], r.real(), r.zeta11.value, r.zeta12.value, r.error(), flag01(r.converged())});
    out.converged = out.converged && r.converged();
    out.max_error = std::max(out.max_error, r.error());
    total.push_back(r.real());
    z12.push_back(r.zeta12.value);
  }
  const auto fit = try_fit(q, total, out.report, "fit");
  try_fit(q, z12, out.report, "fit_zeta12");
  out.report["reference"] = {{"a", 2.0 + 4.0 * kLn2}, {"a_zeta12", 2.0}};
  out.plot = sweep_plot("Re d2 Sigma2 / dxi deta (q0, 0)", "Re d2/dxi deta", q, total, fit);
  return out;
}

Outcome run_d2_xixi(const Config& c, Phase& ph) {
  const auto q = q0_grid(c);
  const auto spec = quad_spec(c);
  const bool imag = c.flag("imaginary");
  ph.begin_compute();
  const auto rows = parallel_map<se::PureSecond>(
      q.size(), [&](std::size_t i) { return se::d2_sigma2_xi_xi(q[i], spec, imag); });
  Outcome out;
  std::vector<double> re;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const auto& r = rows[i];
    out.table.rows.push_back({q[i], r.B0, r.re_I2.value, r.real(), r.imag(), r.error(), flag01(r.converged())});
    out.converged = out.converged && r.converged();
    out.max_error = std::max(out.max_error, r.error());
    re.push_back(r.real());
  }
  const auto fit = try_fit(q, re, out.report, "fit");
  if (fit) out.report["log_square_small"] = std::abs(fit->a) < 0.05 * std::abs(fit->b);
  out.plot = sweep_plot("Re d2 Sigma2 / dxi2 (q0, 0)", "Re d2/dxi2", q, re, fit);
  return out;
}

Outcome run_bubble(const Config& c, Phase& ph, bool pp) {
  const auto betas = beta_list(c);
  ph.begin_compute();
  const auto rows = parallel_map<bubbles::BubbleResult>(betas.size(), [&](std::size_t i) {
    return pp ? bubbles::bubble_pp_result(betas[i]) : bubbles::bubble_ph_result(betas[i]);
  });
  Outcome out;
  PlotSpec p;
  p.title = pp ? "B_pp(beta) and its asymptote" : "B_ph(beta) and its asymptote";
  p.x_label = "beta";
  p.y_label = pp ? "B_pp" : "B_ph";
  Series data{"quadrature", {}, {}, false}, pred{"asymptote", {}, {}, true};
  double worst = 0.0;
  for (const auto& r : rows) {
    out.table.rows.push_back({r.beta, r.value, r.asymptotic_prediction, r.residual, r.tail_residual, r.error});
    out.max_error = std::max(out.max_error, r.error);
    worst = std::max(worst, std::abs(r.residual));
    data.x.push_back(r.beta);
    data.y.push_back(r.value);
  }
  const double lo = *std::min_element(betas.begin(), betas.end());
  const double hi = *std::max_element(betas.begin(), betas.end());
  for (int i = 0; i <= 100; ++i) {
    const double b = lo * std::pow(hi / lo, i / 100.0);
    pred.x.push_back(b);
    pred.y.push_back(pp ? bubbles::pp_prediction(b) : bubbles::ph_prediction(b));
  }
  p.series = {data, pred};
  out.plot = p;
  const auto k = bubbles::k_constant_ph();
  out.report = {{"K", k.value}, {"K_error", k.error}, {"K_closed", bubbles::k_closed()},
                {"max_abs_residual", worst}};
  if (pp) out.report["K_prime"] = bubbles::k_prime_constant().value;
  return out;
}

Outcome run_bubble_ph(const Config& c, Phase& ph) { return run_bubble(c, ph, false); }
Outcome run_bubble_pp(const Config& c, Phase& ph) { return run_bubble(c, ph, true); }

Outcome run_overlap(const Config& c, Phase& ph) {
  const auto m = model(c);
  geometry::OverlapExperiment e;
  e.M = c.real("M");
  if (!(e.M > 1.0)) throw ConfigError("'M' must exceed 1");
  const long jmin = c.integer("j_min"), jmax = c.integer("j_max");
  if (jmax >= 0 || jmin > jmax) throw ConfigError("need j_min <= j_max < 0");
  for (long j = jmax; j >= jmin; --j) e.j_values.push_back(static_cast<int>(j));
  e.num_p = static_cast<int>(c.positive_integer("num_p"));
  e.delta = c.positive("delta");
  e.n0 = static_cast<int>(c.positive_integer("n0"));
  e.seed = static_cast<std::uint64_t>(c.integer("seed"));
  const double D = c.positive("D");
  double step = c.real("step");
  if (step < 0.0) throw ConfigError("'step' must be >= 0 (0 selects M^j_min)");
  if (step == 0.0) step = std::pow(e.M, static_cast<double>(jmin));
  const double excl = c.real("exclusion_radius");
  if (excl < 0.0) throw ConfigError("'exclusion_radius' must be >= 0");
  ph.begin_compute();
  const auto curves = geometry::trace_fermi_curve(m, step, excl);
  const auto r = geometry::overlap_scaling_experiment(m, curves, e);
  Outcome out;
  out.seeds["seed"] = c.integer("seed");
  for (const auto& row : r.rows)
    out.table.rows.push_back({row.p[0], row.p[1], static_cast<long>(row.sign), static_cast<long>(row.j),
                              row.length, row.bound, flag01(row.violated)});
  const double allowed = D * e.delta * e.delta;
  out.report = {{"curve_branches", curves.size()},
                {"curve_length", geometry::total_length(curves)},
                {"violation_fraction_plus", r.violation_fraction[0]},
                {"violation_fraction_minus", r.violation_fraction[1]},
                {"allowed_fraction", allowed},
                {"within_allowed", std::max(r.violation_fraction[0], r.violation_fraction[1]) <= allowed},
                {"monotone", r.monotone},
                {"has_fit", r.has_fit}};
  if (r.has_fit) {
    out.report["fitted_exponent"] = r.fitted_exponent;
    out.report["fitted_exponent_stderr"] = r.fitted_exponent_stderr;
    out.report["fit_samples"] = r.fit_samples;
  }
  PlotSpec p;
  p.title = "median overlap length against the bound";
  p.x_label = "M^j";
  p.y_label = "length";
  Series med{"median length (sign +)", {}, {}, false}, bound{"bound (M^j/delta)^(1/n0)", {}, {}, true};
  for (std::size_t jj = 0; jj < r.j_values.size(); ++jj) {
    std::vector<double> l;
    for (const auto& s : r.measured_lengths[0]) l.push_back(s[jj]);
    std::nth_element(l.begin(), l.begin() + l.size() / 2, l.end());
    const double x = std::pow(e.M, r.j_values[jj]);
    med.x.push_back(x);
    med.y.push_back(l[l.size() / 2]);
    bound.x.push_back(x);
    bound.y.push_back(r.bound(r.j_values[jj]));
  }
  p.series = {med, bound};
  out.plot = p;
  return out;
}

Outcome run_normal_form(const Config& c, Phase& ph) {
  const auto m = model(c);
  dispersion::NormalFormOptions o;
  o.radius = c.positive("radius");
  o.grid = static_cast<int>(c.positive_integer("grid"));
  if (o.grid < 5) throw ConfigError("'grid' must be at least 5");
  ph.begin_compute();
  Outcome out;
  json saddles = json::array();
  for (const auto& sp : dispersion::find_singular_points(m)) {
    const auto nf = dispersion::morse_normal_form(m, sp, o);
    out.table.rows.push_back({sp.location[0], sp.location[1], sp.hessian_eigenvalues[0],
                              sp.hessian_eigenvalues[1], static_cast<long>(nf.nu1), static_cast<long>(nf.nu2),
                              nf.radius, nf.residual, nf.a_min, nf.a_max, nf.b_min, nf.b_max, nf.c_min,
                              nf.c_max, static_cast<long>(nf.attempts)});
    saddles.push_back({{"A", {{nf.A(0, 0), nf.A(0, 1)}, {nf.A(1, 0), nf.A(1, 1)}}},
                       {"b_coeffs", nf.b_coeffs},
                       {"c_coeffs", nf.c_coeffs}});
  }
  out.report = {{"saddles", saddles}};
  return out;
}

Outcome run_interval(const Config& c, Phase& ph) {
  std::string path = c.text("corpus");
  if (path.empty()) path = std::string(VANHOVE_DATA_DIR) + "/interval_corpus.csv";
  const long grid = c.integer("grid");
  if (grid < 10) throw ConfigError("'grid' must be at least 10");
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read corpus '" + path + "'");
  struct Poly {
    int k;
    double eta, eps;
    std::vector<double> coeffs;
  };
  std::vector<Poly> polys;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) {
      try {
        v.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConfigError("corpus row '" + line + "' is not numeric");
      }
    }
    if (v.size() < 4) throw ConfigError("corpus rows need k, eta, eps and coefficients");
    polys.push_back({static_cast<int>(v[0]), v[1], v[2], {v.begin() + 3, v.end()}});
  }
  ph.begin_compute();
  struct Row {
    geometry::IntervalCheck r;
    bool hypothesis = true;
  };
  const auto rows = parallel_map<Row>(polys.size(), [&](std::size_t i) {
    const auto& p = polys[i];
    auto f = [&p](double x) {
      double s = 0.0;
      for (std::size_t k = p.coeffs.size(); k-- > 0;) s = s * x + p.coeffs[k];
      return s;
    };
    try {
      return Row{geometry::interval_lemma_check(f, p.k, p.eta, p.eps, grid), true};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::HypothesisViolated) throw;
      Row r;
      r.hypothesis = false;
      r.r.measured_volume = std::nan("");
      r.r.bound = std::pow(2.0, p.k + 1) * std::pow(p.eps / p.eta, 1.0 / p.k);
      r.r.min_derivative = std::nan("");
      return r;
    }
  });
  Outcome out;
  long counter = 0, skipped = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out.table.rows.push_back({static_cast<long>(i + 1), static_cast<long>(polys[i].k), polys[i].eta,
                              polys[i].eps, r.r.measured_volume, r.r.bound, r.r.min_derivative,
                              flag01(r.hypothesis), flag01(r.hypothesis && r.r.holds)});
    if (!r.hypothesis) ++skipped;
    else if (!r.r.holds) ++counter;
  }
  out.report = {{"corpus", path}, {"polynomials", polys.size()}, {"counterexamples", counter},
                {"hypothesis_failures", skipped}};
  return out;
}

Outcome run_fit(const Config& c, Phase& ph) {
  const std::string path = c.text("input");
  if (path.empty()) throw ConfigError("'input' (a CSV file) is required");
  const std::string xc = c.text("x_column"), yc = c.text("y_column");
  if (yc.empty()) throw ConfigError("'y_column' is required");
  const auto half = c.choice("half", {"upper", "lower"});
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::string line;
  std::getline(in, line);
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string h;
    while (std::getline(ss, h, ',')) header.push_back(h);
  }
  const auto xi = std::find(header.begin(), header.end(), xc) - header.begin();
  const auto yi = std::find(header.begin(), header.end(), yc) - header.begin();
  if (xi >= static_cast<long>(header.size())) throw ConfigError("no column '" + xc + "' in " + path);
  if (yi >= static_cast<long>(header.size())) throw ConfigError("no column '" + yc + "' in " + path);
  std::vector<fitlab::Sample> s;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != header.size()) throw ConfigError("ragged row in " + path);
    try {
      s.push_back({std::stod(cells[xi]), std::stod(cells[yi])});
    } catch (const std::exception&) {
      throw ConfigError("non-numeric value in " + path);
    }
  }
  fitlab::FitOptions opt;
  opt.stability_half = half == "upper" ? fitlab::Half::upper : fitlab::Half::lower;
  const auto f = fitlab::fit_log_square(s, opt);
  ph.begin_compute();
  Outcome out;
  std::vector<double> x, y;
  for (const auto& p : s) {
    const double u = std::log(p.x), fit = f.a * u * u + f.b * u + f.c;
    out.table.rows.push_back({p.x, p.y, fit, p.y - fit});
    x.push_back(p.x);
    y.push_back(p.y);
  }
  out.report = {{"input", path}, {"x_column", xc}, {"y_column", yc}, {"fit", fit_json(f)}};
  out.plot = sweep_plot("log-square fit of " + yc, yc, x, y, f);
  out.plot->x_label = xc;
  return out;
}

// ------------------------------------------------------------------ table

std::vector<CommandDef> build() {
  const std::vector<OptionSpec> thermal_opts = {
      {"beta", K::real, 4.0, "inverse temperature"},
      {"zero_temperature", K::flag, false, "use the zero-temperature kernel instead of beta"},
  };
  std::vector<CommandDef> v;
  v.push_back({"sigma2",
               "Sigma2(q0, q) by 4D adaptive quadrature, optionally checked against the frequency sum",
               {{"q0", "frequency"},
                {"re_sigma2", "real part"},
                {"im_sigma2", "imaginary part"},
                {"error", "quadrature error estimate"},
                {"evaluations", "integrand evaluations"},
                {"converged", "1 if the tolerance was met"},
                {"oracle_re", "real part of the truncated frequency sum (nan without oracle)"},
                {"oracle_im", "imaginary part of the truncated frequency sum"},
                {"oracle_budget", "truncation plus grid error of the oracle"},
                {"oracle_agrees", "1 if |oracle - sigma2| <= budget + error, -1 without oracle"}},
               join(grid_options(0.1, 1.0, 4), thermal_opts,
                    std::vector<OptionSpec>{
                        {"xi", K::real, 0.0, "external momentum, first component"},
                        {"eta", K::real, 0.0, "external momentum, second component"},
                        {"oracle_grid", K::integer, 0L, "even momentum grid of the oracle, 0 to skip"},
                        {"oracle_cutoff", K::real, 200.0, "oracle frequency cutoff in units of pi / beta"}},
                    quad_options(1e-6, 1e-4, 1'000'000), output_options()),
               run_sigma2});
  v.push_back({"dsigma-domega",
               "zero-temperature Im d/dq0 Sigma2(q0, 0) with a log-square fit",
               {{"q0", "frequency"},
                {"ln_q0", "natural log of |q0|"},
                {"im_d0_sigma2", "Im d/dq0 Sigma2 = -2 I(|q0|)"},
                {"error", "quadrature error estimate"},
                {"evaluations", "integrand evaluations"},
                {"converged", "1 if the tolerance was met"}},
               join(grid_options(1e-6, 1e-2, 9),
                    std::vector<OptionSpec>{{"form", K::text, "dilog_1d", "dilog_1d, log_2d or direct_4d"}},
                    quad_options(1e-12, 1e-12, 2'000'000), output_options()),
               run_dsigma});
  v.push_back({"grad-check",
               "gradient of Sigma2 at the Van Hove point for several beta",
               {{"beta", "inverse temperature"},
                {"d_xi_re", "real part of d/dxi"},
                {"d_xi_im", "imaginary part of d/dxi"},
                {"d_xi_error", "quadrature error estimate of d/dxi"},
                {"d_eta_re", "real part of d/deta"},
                {"d_eta_im", "imaginary part of d/deta"},
                {"d_eta_error", "quadrature error estimate of d/deta"},
                {"within_tolerance", "1 if both components are within 10 error estimates of 0"},
                {"mc_d_xi_abs", "|d/dxi| by Monte Carlo (nan when mc_samples = 0)"},
                {"mc_d_xi_sigma", "Monte Carlo standard error of d/dxi"},
                {"mc_d_eta_abs", "|d/deta| by Monte Carlo"},
                {"mc_d_eta_sigma", "Monte Carlo standard error of d/deta"},
                {"converged", "1 if the tolerance was met"}},
               join(std::vector<OptionSpec>{
                        {"beta_list", K::real_list, json::array({2.0, 8.0, 32.0}), "comma-separated beta values"},
                        {"q0", K::real, 0.1, "frequency"},
                        {"mc_samples", K::integer, 0L, "Monte Carlo samples per beta, 0 to skip"},
                        {"seed", K::integer, 1L, "Monte Carlo seed (beta index is added)"}},
                    quad_options(1e-8, 1e-6, 1'000'000), output_options()),
               run_grad});
  v.push_back({"d2-xieta",
               "zero-temperature Re d2 Sigma2 / dxi deta and its zeta12 piece with log-square fits",
               {{"q0", "frequency"},
                {"re_d2_xi_eta", "zeta11 + zeta12"},
                {"zeta11", "restricted Re <Phi>"},
                {"zeta12", "restricted 2 Re <F / z^3>"},
                {"error", "quadrature error estimate"},
                {"converged", "1 if the tolerance was met"}},
               join(grid_options(1e-6, 1e-2, 9), quad_options(1e-10, 1e-10, 2'000'000), output_options()),
               run_d2_xieta});
  v.push_back({"d2-xixi",
               "zero-temperature Re d2 Sigma2 / dxi2 = B0 + Re I2 with a log-square fit",
               {{"q0", "frequency"},
                {"b0", "closed-form B0"},
                {"re_i2", "Re I2"},
                {"re_d2_xi_xi", "B0 + Re I2"},
                {"im_d2_xi_xi", "imaginary part (nan unless imaginary is set)"},
                {"error", "quadrature error estimate of Re I2"},
                {"converged", "1 if the tolerance was met"}},
               join(grid_options(1e-5, 1e-2, 7),
                    std::vector<OptionSpec>{{"imaginary", K::flag, false, "also compute the imaginary part"}},
                    quad_options(1e-10, 1e-10, 2'000'000), output_options()),
               run_d2_xixi});
  const std::vector<Column> bubble_cols = {{"beta", "inverse temperature"},
                                           {"value", "bubble by quadrature"},
                                           {"prediction", "asymptotic form"},
                                           {"residual", "value - prediction"},
                                           {"tail_residual", "residual from the exact tail integral"},
                                           {"error", "quadrature error estimate of value"}};
  const std::vector<OptionSpec> bubble_opts = join(
      std::vector<OptionSpec>{
          {"beta_list", K::real_list, json::array({10.0, 20.0, 40.0, 80.0}), "comma-separated beta values"}},
      output_options());
  v.push_back({"bubble-ph", "particle-hole bubble against -2 ln beta + 2K", bubble_cols, bubble_opts, run_bubble_ph});
  v.push_back({"bubble-pp", "particle-particle bubble against (ln beta)^2 - 2K ln beta + K'", bubble_cols,
               bubble_opts, run_bubble_pp});
  v.push_back({"overlap",
               "overlap-length scaling experiment on the traced Fermi curve",
               {{"p_x", "translation, first component"},
                {"p_y", "translation, second component"},
                {"sign", "+1 or -1"},
                {"j", "scale index; threshold M^j"},
                {"length", "measured overlap length"},
                {"bound", "(M^j / delta)^(1/n0)"},
                {"violated", "1 if length exceeds bound"}},
               join(model_options(),
                    std::vector<OptionSpec>{
                        {"M", K::real, 2.0, "scale base"},
                        {"j_min", K::integer, -14L, "finest scale index"},
                        {"j_max", K::integer, -6L, "coarsest scale index"},
                        {"num_p", K::integer, 500L, "number of sampled translations"},
                        {"delta", K::real, 0.1, "bound parameter"},
                        {"n0", K::integer, 4L, "order in the bound exponent 1/n0"},
                        {"D", K::real, 1.0, "allowed violation fraction is D delta^2"},
                        {"seed", K::integer, 42L, "sampling seed"},
                        {"step", K::real, 0.0, "curve tracing step, 0 for M^j_min"},
                        {"exclusion_radius", K::real, 0.0, "disc around saddles left untraced"}},
                    output_options()),
               run_overlap});
  v.push_back({"normal-form",
               "Van Hove points and their factorized normal forms",
               {{"k1", "saddle location, first component"},
                {"k2", "saddle location, second component"},
                {"eig_min", "smaller Hessian eigenvalue"},
                {"eig_max", "larger Hessian eigenvalue"},
                {"nu1", "order of the first branch"},
                {"nu2", "order of the second branch"},
                {"radius", "disc radius used"},
                {"residual", "max factorization residual on the disc"},
                {"a_min", "min of a"},
                {"a_max", "max of a"},
                {"b_min", "min of |b|"},
                {"b_max", "max of |b|"},
                {"c_min", "min of |c|"},
                {"c_max", "max of |c|"},
                {"attempts", "radius halvings plus one"}},
               join(model_options(),
                    std::vector<OptionSpec>{{"radius", K::real, 0.1, "initial disc radius"},
                                            {"grid", K::integer, 41L, "fit grid per axis"}},
                    output_options()),
               run_normal_form});
  v.push_back({"interval-check",
               "interval lemma over a polynomial corpus",
               {{"row", "corpus row, from 1"},
                {"k", "derivative order"},
                {"eta", "derivative lower bound"},
                {"eps", "sublevel threshold"},
                {"measured_volume", "measure of {|f| <= eps} (nan if the hypothesis fails)"},
                {"bound", "2^(k+1) (eps/eta)^(1/k)"},
                {"min_derivative", "smallest |f^(k)| on the check grid"},
                {"hypothesis_ok", "1 if |f^(k)| >= eta was confirmed"},
                {"holds", "1 if measured_volume <= bound"}},
               join(std::vector<OptionSpec>{
                        {"corpus", K::text, "", "CSV with k,eta,eps,c0,c1,... (default: bundled corpus)"},
                        {"grid", K::integer, 1'000'000L, "midpoint grid size"}},
                    output_options()),
               run_interval});
  v.push_back({"fit",
               "log-square fit y = a (ln x)^2 + b ln x + c of two CSV columns",
               {{"x", "abscissa"}, {"y", "data"}, {"fitted", "fitted value"}, {"residual", "y - fitted"}},
               join(std::vector<OptionSpec>{{"input", K::text, "", "input CSV with a header row"},
                                            {"x_column", K::text, "q0", "column used as x"},
                                            {"y_column", K::text, "", "column used as y"},
                                            {"half", K::text, "upper", "half-window for the stability refit"}},
                    output_options()),
               run_fit});
  return v;
}

}  // namespace

const std::vector<CommandDef>& commands() {
  static const std::vector<CommandDef> table = build();
  return table;
}

}  // namespace vanhove::cli
