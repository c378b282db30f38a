// Acceptance run: one PASS/FAIL line per criterion, diagnostics indented
// below it. Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "vanhove/bubbles.hpp"
#include "vanhove/dispersion.hpp"
#include "vanhove/fitlab.hpp"
#include "vanhove/geometry.hpp"
#include "vanhove/orthant.hpp"
#include "vanhove/quad.hpp"
#include "vanhove/selfenergy.hpp"

using namespace vanhove;
namespace se = vanhove::selfenergy;
using cplx = std::complex<double>;

namespace {

const double kLn2 = std::numbers::ln2;
const double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::vector<std::string> notes;
};

template <class... A>
std::string fmt(const char* f, A... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

quad::QuadSpec spec(double abs_tol, double rel_tol, long evals) {
  quad::QuadSpec s;
  s.abs_tol = abs_tol;
  s.rel_tol = rel_tol;
  s.max_evaluations = evals;
  return s;
}

std::vector<double> q0_grid(int n) {
  std::vector<double> q;
  for (int i = 0; i < n; ++i) q.push_back(std::pow(10.0, -2.0 - 0.5 * i));
  return q;
}

fitlab::LogFit fit_over(const std::vector<double>& q, const std::function<double(double)>& f) {
  std::vector<fitlab::Sample> s;
  for (double x : q) s.push_back({x, f(x)});
  return fitlab::fit_log_square(s);
}

std::string describe(const fitlab::LogFit& f) {
  return fmt("fit y = a u^2 + b u + c, u = ln q0: a = %.6f +- %.1e, b = %.6f +- %.1e, c = %.4f, "
             "kappa = %.3g, half-window shift = %.3g",
             f.a, f.stderr_a, f.b, f.stderr_b, f.c, f.kappa, f.stability_shift);
}

// ------------------------------------------------------------------ 1, 2

fitlab::LogFit im_d0_fit() {
  static const fitlab::LogFit fit = fit_over(q0_grid(9), [](double q) {
    return se::im_d0_sigma2(q, spec(1e-12, 1e-12, 2'000'000)).value;
  });
  return fit;
}

Outcome criterion1() {
  const auto f = im_d0_fit();
  const double target = -4.0 * kLn2;
  Outcome o;
  o.pass = std::abs(f.a - target) <= 0.05 * std::abs(target);
  o.notes.push_back(describe(f));
  o.notes.push_back(fmt("a = %.6f vs -4 ln2 = %.6f (rel. dev. %.2e, tolerance 5%%)", f.a, target,
                        std::abs(f.a / target - 1.0)));
  return o;
}

Outcome criterion2() {
  const auto f = im_d0_fit();
  const double c1 = se::c1_constant(spec(1e-14, 1e-14, 100'000));
  // In L = |ln q0| the linear coefficient is -b.
  const double bL = -f.b, target = -2.0 * c1;
  Outcome o;
  o.pass = std::abs(bL - target) <= 0.15 * std::abs(target);
  o.notes.push_back(fmt("C1 = %.15f from the 1D oracle", c1));
  o.notes.push_back(fmt("coefficient of |ln q0| = %.6f vs -2 C1 = %.6f (rel. dev. %.2e, tolerance 15%%)",
                        bL, target, std::abs(bL / target - 1.0)));
  return o;
}

// --------------------------------------------------------------------- 3

Outcome criterion3() {
  const auto q = q0_grid(9);
  std::vector<fitlab::Sample> mixed, z12;
  for (double x : q) {
    const auto m = se::d2_sigma2_xi_eta(x, spec(1e-10, 1e-10, 2'000'000));
    mixed.push_back({x, m.real()});
    z12.push_back({x, m.zeta12.value});
  }
  const auto fm = fitlab::fit_log_square(mixed);
  const auto fz = fitlab::fit_log_square(z12);
  const double tm = 2.0 + 4.0 * kLn2, tz = 2.0;
  const bool ok_m = std::abs(fm.a - tm) <= 0.05 * tm;
  const bool ok_z = std::abs(fz.a - tz) <= 0.10 * tz;
  Outcome o;
  o.pass = ok_m && ok_z;
  o.notes.push_back("Re d2/dxi deta: " + describe(fm));
  o.notes.push_back(fmt("  a = %.6f vs 2 + 4 ln2 = %.6f: %s (4 ln2 - 2 = %.6f)", fm.a, tm,
                        ok_m ? "within 5%" : "outside 5%", 4.0 * kLn2 - 2.0));
  o.notes.push_back("zeta12: " + describe(fz));
  o.notes.push_back(fmt("  a = %.6f vs 2: %s", fz.a, ok_z ? "within 10%" : "outside 10%"));
  if (!o.pass) {
    o.notes.push_back("  the zeta12 coefficient comes out as -2: sign of the 2(ln q0)^2 term is");
    o.notes.push_back("  reversed, and 2 + 4 ln2 becomes -2 + 4 ln2 for the sum");
  }
  return o;
}

// --------------------------------------------------------------------- 4

Outcome criterion4() {
  const auto q = q0_grid(7);
  const auto f = fit_over(q, [](double x) {
    return se::d2_sigma2_xi_xi(x, spec(1e-10, 1e-10, 2'000'000)).real();
  });
  Outcome o;
  o.pass = std::abs(f.a) < 0.05 * std::abs(f.b);
  o.notes.push_back("Re d2/dxi2: " + describe(f));
  o.notes.push_back(fmt("|a| = %.3e vs 0.05 |b| = %.3e", std::abs(f.a), 0.05 * std::abs(f.b)));
  return o;
}

// --------------------------------------------------------------------- 5

Outcome criterion5() {
  Outcome o;
  o.pass = true;
  for (double beta : {2.0, 8.0, 32.0}) {
    const auto st = matsubara::ThermalState::at_beta(beta);
    const auto g = se::grad_sigma2_at_vh(0.1, st, spec(1e-8, 1e-6, 1'000'000));
    const auto m = se::grad_sigma2_mc(0.1, st, 2'000'000, 1234 + static_cast<int>(beta));
    const double floor = 1e-14;
    const bool ok = std::abs(g.d_xi.value) <= 10.0 * g.d_xi.error_estimate + floor &&
                    std::abs(g.d_eta.value) <= 10.0 * g.d_eta.error_estimate + floor;
    const bool ok_mc = std::abs(m.d_xi.value) <= 10.0 * m.d_xi.error_estimate &&
                       std::abs(m.d_eta.value) <= 10.0 * m.d_eta.error_estimate;
    o.pass = o.pass && ok && ok_mc;
    o.notes.push_back(fmt("beta = %g: adaptive |d_xi| = %.2e (err %.2e), |d_eta| = %.2e (err %.2e); "
                          "MC |d_xi| = %.2e +- %.2e, |d_eta| = %.2e +- %.2e",
                          beta, std::abs(g.d_xi.value), g.d_xi.error_estimate,
                          std::abs(g.d_eta.value), g.d_eta.error_estimate, std::abs(m.d_xi.value),
                          m.d_xi.error_estimate, std::abs(m.d_eta.value), m.d_eta.error_estimate));
  }
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int broken = 0;
  const auto st = matsubara::ThermalState::at_beta(8.0);
  for (int i = 0; i < 10'000; ++i) {
    const std::array<double, 4> X = {u(rng), u(rng), u(rng), u(rng)};
    const std::array<double, 4> R = {-X[0], -X[1], -X[2], -X[3]};
    for (int c = 0; c < 2; ++c)
      if (se::grad_integrand(0.1, st, c, X) != -se::grad_integrand(0.1, st, c, R)) ++broken;
  }
  o.pass = o.pass && broken == 0;
  o.notes.push_back(fmt("reflection antisymmetry broken at %d of 20000 component evaluations", broken));
  return o;
}

// --------------------------------------------------------------------- 6

Outcome criterion6() {
  Outcome o;
  const auto kph = bubbles::k_constant_ph(), kpp = bubbles::k_constant_pp();
  const auto kp = bubbles::k_prime_constant();
  const double K = kph.value;
  const double dph = std::abs(bubbles::bubble_ph(50.0) - (-2.0 * std::log(50.0) + 2.0 * K));
  const double l = std::log(50.0);
  const double dpp = std::abs(bubbles::bubble_pp(50.0) - (l * l - 2.0 * K * l + kp.value));
  const bool ok_k = std::abs(kph.value - kpp.value) < 1e-10;
  o.notes.push_back(fmt("K = %.15f (ph form), %.15f (pp form), K' = %.15f", kph.value, kpp.value, kp.value));
  o.notes.push_back(fmt("beta = 50: |B_ph - prediction| = %.2e, |B_pp - prediction| = %.2e", dph, dpp));
  bool ok_slope = true;
  for (int kind = 0; kind < 2; ++kind) {
    std::vector<double> b = {10, 20, 40, 80}, y;
    for (double x : b)
      y.push_back(std::log(std::abs(kind == 0 ? bubbles::ph_tail_residual(x) : bubbles::pp_tail_residual(x))));
    double mb = 0, my = 0;
    for (int i = 0; i < 4; ++i) mb += b[i] / 4, my += y[i] / 4;
    double sxy = 0, sxx = 0;
    for (int i = 0; i < 4; ++i) sxy += (b[i] - mb) * (y[i] - my), sxx += (b[i] - mb) * (b[i] - mb);
    const double slope = sxy / sxx;
    ok_slope = ok_slope && slope <= -0.5;
    o.notes.push_back(fmt("%s: slope of ln|residual| over beta in {10,20,40,80} = %.4f",
                          kind == 0 ? "B_ph" : "B_pp", slope));
  }
  o.pass = dph < 1e-6 && dpp < 1e-6 && ok_k && ok_slope;
  return o;
}

// --------------------------------------------------------------------- 7

Outcome criterion7() {
  using namespace vanhove::orthant;
  Outcome o;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int bad_reflect = 0, bad_13 = 0, bad_12 = 0;
  for (int i = 0; i < 10'000; ++i) {
    const Point p{u(rng), u(rng), u(rng), u(rng)};
    for (int n = 1; n <= 8; ++n) {
      const auto &a = term(n), &b = term(n + 8);
      if (b.epsilon(p) != a.epsilon(p)) ++bad_reflect;
      if (a.has_D && (b.D(p) != -a.D(p) || b.F(p) != a.F(p) || b.rho(p) != a.rho(p))) ++bad_reflect;
    }
    if (std::abs(term(1).epsilon(p) + term(3).epsilon(p)) > 1e-14 ||
        std::abs(term(2).epsilon(p) + term(4).epsilon(p)) > 1e-14)
      ++bad_13;
    const Point s{p.Y, p.X, p.Yp, p.Xp};
    if (std::abs(term(2).epsilon(s) - term(1).epsilon(p)) > 1e-14 || term(2).rho(s) != term(1).rho(p))
      ++bad_12;
  }
  bool ok = bad_reflect == 0 && bad_13 == 0 && bad_12 == 0;
  o.notes.push_back(fmt("identity failures at 10^4 points: n+8 %d, 1-3 %d, 1-2 %d", bad_reflect, bad_13, bad_12));

  std::normal_distribution<double> g(0.0, 0.5);
  for (int k = 0; k < 5; ++k) {
    std::array<double, 4> a;
    std::array<double, 6> c;
    for (auto& v : a) v = g(rng);
    for (auto& v : c) v = g(rng);
    auto f = [a, c](const std::array<double, 4>& x) {
      const double lin = a[0] * x[0] + a[1] * x[1] + a[2] * x[2] + a[3] * x[3];
      return std::exp(lin + c[0] * x[0] * x[2]) * std::cos(c[1] * x[1] + c[2] * x[3] * x[0]) +
             c[3] * x[0] * x[1] * x[2] * x[3] + c[4] * x[1] * x[1] + c[5];
    };
    const auto s = spec(1e-10, 1e-10, 2'000'000);
    const auto direct = quad::integrate(
        [&](std::span<const double> v) { return f({v[0], v[1], v[2], v[3]}); }, quad::Box::symmetric(4), s);
    const auto folded = quad::integrate(fold_to_positive(f, all_cases()), quad::Box::unit(4), s);
    const double d = std::abs(direct.value - folded.value);
    const double bar = direct.error_estimate + folded.error_estimate;
    ok = ok && d <= 3.0 * bar;
    o.notes.push_back(fmt("integrand %d: direct %.12f, folded %.12f, |diff| = %.1e, 3 error bars = %.1e", k + 1,
                          direct.value, folded.value, d, 3.0 * bar));
  }

  for (double q0 : {0.1, 0.01}) {
    const auto mc = se::im_d0_sigma2_direct(q0, 4'000'000, 2024);
    const auto ref = se::frequency_integral(q0, se::IForm::dilog_1d, spec(1e-12, 1e-12, 100'000));
    const double target = -2.0 * ref.value;
    const double bar = mc.error_estimate + 2.0 * ref.error_estimate;
    ok = ok && std::abs(mc.value - target) <= 3.0 * bar;
    o.notes.push_back(fmt("q0 = %g: 4D Monte Carlo %.5f +- %.5f vs -2 I = %.8f (%.2f error bars)", q0, mc.value,
                          mc.error_estimate, target, std::abs(mc.value - target) / bar));
  }
  o.pass = ok;
  return o;
}

// --------------------------------------------------------------------- 8

Outcome criterion8() {
  const double beta = 4.0;
  const double q0 = kPi / beta;
  const auto o8 = se::frequency_sum_oracle(beta, 0, 200.0 * kPi / beta, 20);
  const auto s = se::sigma2(q0, se::Vec2::Zero(), matsubara::ThermalState::at_beta(beta),
                            spec(1e-6, 1e-6, 2'000'000));
  const double d = std::abs(o8.value - s.value);
  const double budget = o8.budget() + s.error_estimate;
  Outcome o;
  o.pass = d <= budget;
  o.notes.push_back("beta = 4, q0 = pi/4, cutoff 200 pi/beta, 20^4 grid");
  o.notes.push_back(fmt("oracle %.6f %+.6fi, sigma2 %.6f %+.6fi (err %.1e)", o8.value.real(), o8.value.imag(),
                        s.value.real(), s.value.imag(), s.error_estimate));
  o.notes.push_back(fmt("|diff| = %.2e vs budget %.2e (truncation %.2e, grid %.2e)", d, budget,
                        o8.truncation_error, o8.grid_error));
  return o;
}

// --------------------------------------------------------------------- 9

Outcome criterion9() {
  using namespace vanhove::dispersion;
  Outcome o;
  const double theta = 0.3;
  const auto h = DispersionModel::hubbard(theta, 0.0);
  const auto sp = find_singular_points(h);
  bool ok = sp.size() == 2;
  bool at_x = false, at_y = false;
  double worst_eig = 0.0, worst_res = 0.0;
  for (const auto& p : sp) {
    const Vec2 w = p.location;
    auto near = [&](double a, double b) {
      return h.displacement(w, Vec2(a, b)).norm() < 1e-8;
    };
    at_x = at_x || near(kPi, 0.0);
    at_y = at_y || near(0.0, kPi);
    worst_eig = std::max({worst_eig, std::abs(p.hessian_eigenvalues[0] - (theta - 1.0)),
                          std::abs(p.hessian_eigenvalues[1] - (1.0 + theta))});
    const auto nf = morse_normal_form(h, p);
    worst_res = std::max(worst_res, nf.residual);
    o.notes.push_back(fmt("saddle (%.12f, %.12f): eigenvalues %.12f, %.12f; normal form nu = (%d, %d), "
                          "radius %.3g, residual %.2e",
                          w[0], w[1], p.hessian_eigenvalues[0], p.hessian_eigenvalues[1], nf.nu1, nf.nu2,
                          nf.radius, nf.residual));
  }
  ok = ok && at_x && at_y && worst_eig < 1e-8 && worst_res < 1e-6;

  const auto curves = geometry::trace_fermi_curve(h, std::pow(2.0, -14), 0.0);
  geometry::OverlapExperiment e;
  for (int j = -6; j >= -14; --j) e.j_values.push_back(j);
  e.num_p = 500;
  e.delta = 0.1;
  e.seed = 42;
  e.n0 = 4;
  const auto r = geometry::overlap_scaling_experiment(h, curves, e);
  const double D = 1.0, allowed = D * e.delta * e.delta;
  const double worst = std::max(r.violation_fraction[0], r.violation_fraction[1]);
  ok = ok && worst <= allowed && r.has_fit && r.fitted_exponent >= 0.25 - 0.05;
  o.notes.push_back(fmt("curve: %zu branches, length %.10f", curves.size(), geometry::total_length(curves)));
  o.notes.push_back(fmt("fitted exponent %.4f +- %.4f over %d samples (needs >= 0.20), lengths monotone: %s",
                        r.fitted_exponent, r.fitted_exponent_stderr, r.fit_samples, r.monotone ? "yes" : "no"));
  o.notes.push_back(fmt("violation fraction: sign + %.4f, sign - %.4f; allowed D delta^2 = %.4f with D = %g",
                        r.violation_fraction[0], r.violation_fraction[1], allowed, D));
  std::vector<int> per_j(e.j_values.size(), 0);
  for (const auto& row : r.rows)
    if (row.violated) ++per_j[-6 - row.j];
  std::string dist = "violating (p, sign) rows per j:";
  for (std::size_t k = 0; k < per_j.size(); ++k) dist += fmt(" j=%d:%d", e.j_values[k], per_j[k]);
  o.notes.push_back(dist);
  o.pass = ok;
  return o;
}

// -------------------------------------------------------------------- 10

Outcome criterion10() {
  Outcome o;
  std::ifstream in(std::string(VANHOVE_DATA_DIR) + "/interval_corpus.csv");
  if (!in) {
    o.notes.push_back("corpus file missing");
    return o;
  }
  std::string line;
  std::getline(in, line);
  int rows = 0, counter = 0;
  int per_k[4] = {0, 0, 0, 0};
  double worst_ratio = 0.0;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    if (v.size() != 8) continue;
    const std::vector<double> c(v.begin() + 3, v.end());
    auto f = [&c](double x) { return c[0] + x * (c[1] + x * (c[2] + x * (c[3] + x * c[4]))); };
    const int k = static_cast<int>(v[0]);
    const auto r = geometry::interval_lemma_check(f, k, v[1], v[2], 1'000'000);
    if (!r.holds) ++counter;
    worst_ratio = std::max(worst_ratio, r.measured_volume / r.bound);
    ++rows;
    if (k >= 1 && k <= 3) ++per_k[k];
  }
  o.pass = counter == 0 && per_k[1] == 100 && per_k[2] == 100 && per_k[3] == 100;
  o.notes.push_back(fmt("%d polynomials (k=1: %d, k=2: %d, k=3: %d), counterexamples %d, "
                        "largest measured/bound = %.4f",
                        rows, per_k[1], per_k[2], per_k[3], counter, worst_ratio));
  return o;
}

// -------------------------------------------------------------------- 11

Outcome criterion11() {
  Outcome o;
  o.pass = true;
  const auto s = spec(1e-5, 1e-4, 200'000);
  for (auto term : {se::FiniteBetaTerm::zeta2, se::FiniteBetaTerm::zeta3}) {
    double prev = INFINITY;
    bool mono = true;
    std::string line = term == se::FiniteBetaTerm::zeta2 ? "|zeta2|:" : "|zeta3|:";
    for (double beta : {4.0, 8.0, 16.0, 32.0}) {
      const auto r = se::finite_beta_term(term, 0.1, matsubara::ThermalState::at_beta(beta), s);
      const double a = std::abs(r.value);
      line += fmt(" beta=%g %.4f (+-%.1e)", beta, a, r.error_estimate);
      mono = mono && a < prev;
      prev = a;
    }
    o.pass = o.pass && mono;
    o.notes.push_back(line + (mono ? "  decreasing" : "  not monotone"));
  }
  if (!o.pass)
    o.notes.push_back("decay only sets in once 1/beta is well below q0 = 0.1");
  return o;
}

}  // namespace

int main() {
  struct Item {
    int id;
    const char* title;
    Outcome (*run)();
  };
  const Item items[] = {
      {1, "leading coefficient of Im d/dq0 Sigma2 is -4 ln2", criterion1},
      {2, "subleading coefficient of Im d/dq0 Sigma2 is -2 C1", criterion2},
      {3, "mixed second derivative coefficient 2 + 4 ln2, zeta12 coefficient 2", criterion3},
      {4, "pure second derivative is at most logarithmic", criterion4},
      {5, "gradient vanishes at the Van Hove point", criterion5},
      {6, "bubble asymptotics and K constants", criterion6},
      {7, "orthant identities, folding and the 4D frequency integral", criterion7},
      {8, "closed kernel matches the truncated frequency sum", criterion8},
      {9, "Hubbard saddles, normal form and overlap bound", criterion9},
      {10, "interval lemma over the bundled corpus", criterion10},
      {11, "finite-beta zeta2, zeta3 decay monotonically", criterion11},
  };
  int failed = 0;
  for (const auto& it : items) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = it.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.notes.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %d: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", it.id, it.title, secs);
    for (const auto& n : o.notes) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d of 11 criteria passed\n", 11 - failed);
  return failed == 0 ? 0 : 1;
}
