#include "vanhove/bubbles.hpp"

#include <cmath>
#include <numbers>

#include "vanhove/error.hpp"
#include "vanhove/special.hpp"

namespace vanhove::bubbles {

namespace {

constexpr double kCut = 200.0;  // truncation point in u = 2v

// sech^2(t) without overflow.
double sech2(double t) {
  const double e = std::exp(-2.0 * std::abs(t));
  return 4.0 * e / ((1.0 + e) * (1.0 + e));
}

// Bound on the integrand mass beyond the cut: 4 e^{-u/2} (|ln u| + 1)^2.
double tail_bound() {
  const double l = std::abs(std::log(kCut)) + 1.0;
  return 4.0 * std::exp(-kCut / 2.0) * l * l;
}

void require_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw Error(ErrorKind::InvalidArgument, "beta must be positive and finite");
}

quad::QuadSpec tight(std::vector<double> breaks = {}) {
  quad::QuadSpec s;
  s.abs_tol = 1e-15;
  s.rel_tol = 1e-14;
  s.max_evaluations = 400'000;
  s.breakpoints = std::move(breaks);
  return s;
}

double integrate1(const std::function<double(double)>& f, double a, double b,
                  std::vector<double> breaks, double* err) {
  auto g = [&](std::span<const double> v) { return f(v[0]); };
  std::vector<double> inside;
  for (double p : breaks)
    if (p > a && p < b) inside.push_back(p);
  const auto r = quad::integrate(g, quad::Box::interval(a, b), tight(inside));
  if (err) *err += r.error_estimate;
  return r.value;
}

// \int_0^inf w(u) sech^2(u/2) du for w growing at most like a power of ln u:
// u in (0,1] as u = e^{-s}, then [1, 200], plus the tail bound.
Constant sech_moment(const std::function<double(double)>& w) {
  Constant c;
  const double near = integrate1(
      [&](double s) {
        const double u = std::exp(-s);
        return w(u) * u * sech2(0.5 * u);
      },
      0.0, 80.0, {1.0, 4.0, 10.0, 25.0}, &c.error);
  const double far = integrate1([&](double u) { return w(u) * sech2(0.5 * u); }, 1.0, kCut,
                                {2.0, 5.0, 10.0, 20.0, 40.0, 80.0}, &c.error);
  c.value = near + far;
  c.error += tail_bound();
  return c;
}

}  // namespace

Constant k_constant_ph() {
  Constant c = sech_moment([](double u) { return std::log(u); });
  c.value *= 0.5;
  c.error *= 0.5;
  return c;
}

Constant k_constant_pp() {
  // v in (0, 1/2] as v = e^{-s}/2, then [1/2, 100].
  Constant c;
  const double near = integrate1(
      [](double s) {
        const double v = 0.5 * std::exp(-s);
        return -s * v * sech2(v);
      },
      0.0, 80.0, {1.0, 4.0, 10.0, 25.0}, &c.error);
  const double far = integrate1([](double v) { return std::log(2.0 * v) * sech2(v); }, 0.5,
                                kCut / 2.0, {1.0, 2.5, 5.0, 10.0, 20.0, 40.0}, &c.error);
  c.value = near + far;
  c.error += tail_bound();
  return c;
}

Constant k_prime_constant() {
  Constant c;
  const double near = integrate1(
      [](double s) {
        const double v = 0.5 * std::exp(-s);
        return s * s * v * sech2(v);
      },
      0.0, 80.0, {1.0, 4.0, 10.0, 25.0}, &c.error);
  const double far = integrate1(
      [](double v) {
        const double l = std::log(2.0 * v);
        return l * l * sech2(v);
      },
      0.5, kCut / 2.0, {1.0, 2.5, 5.0, 10.0, 20.0, 40.0}, &c.error);
  c.value = near + far;
  c.error += tail_bound();
  return c;
}

double k_closed() { return std::log(std::numbers::pi / 2.0) - special::euler_gamma; }

double ph_prediction(double beta) {
  require_beta(beta);
  return -2.0 * std::log(beta) + 2.0 * k_constant_ph().value;
}

double pp_prediction(double beta) {
  require_beta(beta);
  const double l = std::log(beta);
  return l * l - 2.0 * k_constant_pp().value * l + k_prime_constant().value;
}

namespace {

// u = beta e^{-s}: B_ph = -\int_0^inf s u sech^2(u/2) ds.
double ph_value(double beta, double* err) {
  const double smax = std::max(std::log(beta), 0.0) + 50.0;
  std::vector<double> breaks;
  for (double s = 1.0; s < smax; s *= 2.0) breaks.push_back(s);
  if (beta > 1.0) breaks.push_back(std::log(beta));
  return -integrate1(
      [beta](double s) {
        const double u = beta * std::exp(-s);
        return s * u * sech2(0.5 * u);
      },
      0.0, smax, breaks, err);
}

// v = (beta/2) e^{-s}: B_pp = \int_0^inf s^2 v sech^2(v) ds.
double pp_value(double beta, double* err) {
  const double smax = std::max(std::log(beta), 0.0) + 50.0;
  std::vector<double> breaks;
  for (double s = 1.0; s < smax; s *= 2.0) breaks.push_back(s);
  if (beta > 2.0) breaks.push_back(std::log(beta / 2.0));
  return integrate1(
      [beta](double s) {
        const double v = 0.5 * beta * std::exp(-s);
        return s * s * v * sech2(v);
      },
      0.0, smax, breaks, err);
}

}  // namespace

double bubble_ph(double beta) {
  require_beta(beta);
  return ph_value(beta, nullptr);
}

double bubble_pp(double beta) {
  require_beta(beta);
  return pp_value(beta, nullptr);
}

double ph_tail_residual(double beta) {
  require_beta(beta);
  // -\int_beta^inf ln(u/beta) sech^2(u/2) du with u = beta + w
  const double tail = integrate1(
      [beta](double w) {
        const double e = std::exp(-(beta + w));
        return std::log1p(w / beta) * std::exp(-w) / ((1.0 + e) * (1.0 + e));
      },
      0.0, 200.0, {1.0, 5.0, 20.0, 60.0}, nullptr);
  return -4.0 * std::exp(-beta) * tail;
}

double pp_tail_residual(double beta) {
  require_beta(beta);
  // -\int_{beta/2}^inf ln^2(2v/beta) sech^2(v) dv with v = beta/2 + w
  const double h = 0.5 * beta;
  const double tail = integrate1(
      [h](double w) {
        const double l = std::log1p(w / h);
        const double e = std::exp(-2.0 * (h + w));
        return l * l * std::exp(-2.0 * w) / ((1.0 + e) * (1.0 + e));
      },
      0.0, 100.0, {0.5, 2.5, 10.0, 30.0}, nullptr);
  return -4.0 * std::exp(-beta) * tail;
}

BubbleResult bubble_ph_result(double beta) {
  require_beta(beta);
  BubbleResult r;
  r.kind = BubbleKind::ph;
  r.beta = beta;
  r.value = ph_value(beta, &r.error);
  r.asymptotic_prediction = ph_prediction(beta);
  r.residual = r.value - r.asymptotic_prediction;
  r.tail_residual = ph_tail_residual(beta);
  return r;
}

BubbleResult bubble_pp_result(double beta) {
  require_beta(beta);
  BubbleResult r;
  r.kind = BubbleKind::pp;
  r.beta = beta;
  r.value = pp_value(beta, &r.error);
  r.asymptotic_prediction = pp_prediction(beta);
  r.residual = r.value - r.asymptotic_prediction;
  r.tail_residual = pp_tail_residual(beta);
  return r;
}

quad::QuadResult bubble_ph_2d(double beta, const quad::QuadSpec& spec) {
  require_beta(beta);
  auto f = [beta](std::span<const double> v) {
    return -0.25 * beta * sech2(0.5 * beta * v[0] * v[1]);
  };
  quad::QuadSpec s = spec;
  s.initial_splits = std::max(s.initial_splits, 2);
  return quad::integrate(f, quad::Box::symmetric(2), s);
}

}  // namespace vanhove::bubbles
