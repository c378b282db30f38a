#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "vanhove/fitlab.hpp"

using namespace vanhove;
using namespace vanhove::fitlab;

namespace {

std::vector<Sample> model(double a, double b, double c, int n = 9) {
  std::vector<Sample> s;
  for (int i = 0; i < n; ++i) {
    const double x = std::pow(10.0, -2.0 - 0.5 * i);
    const double u = std::log(x);
    s.push_back({x, a * u * u + b * u + c});
  }
  return s;
}

}  // namespace

TEST_CASE("exact model is recovered") {
  const auto f = fit_log_square(model(2.0, -3.0, 1.0));
  CHECK(f.a == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(f.b == doctest::Approx(-3.0).epsilon(1e-10));
  CHECK(f.c == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(f.stderr_a >= 0.0);
  CHECK(f.window_min < f.window_max);
  CHECK(f.stability_shift < 1e-8);
}

TEST_CASE("constant data") {
  const auto f = fit_log_square(model(0.0, 0.0, 5.0));
  CHECK(std::abs(f.a) < 1e-10);
  CHECK(std::abs(f.b) < 1e-10);
  CHECK(f.c == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("bounded noise stays within three standard errors") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> eta(-0.1, 0.1);
  auto s = model(2.0, -3.0, 1.0, 25);
  for (auto& p : s) p.y += eta(rng);
  const auto f = fit_log_square(s);
  CHECK(std::abs(f.a - 2.0) <= 3.0 * f.stderr_a);
}

TEST_CASE("kappa bounds the effect of a bounded remainder") {
  const double R = 0.3;
  auto s = model(-4.0, 1.5, 0.2);
  for (auto& p : s) p.y += R * std::sin(7.0 * std::log(p.x));
  const auto f = fit_log_square(s);
  CHECK(std::abs(f.a + 4.0) <= R * f.kappa);
  std::vector<double> xs;
  for (const auto& p : s) xs.push_back(p.x);
  CHECK(kappa(xs) == doctest::Approx(f.kappa));
}

TEST_CASE("order invariance and predicted point") {
  std::mt19937_64 rng(19);
  auto s = model(1.0, 2.0, 3.0);
  for (auto& p : s) p.y += 0.01 * std::cos(13.0 * std::log(p.x));
  const auto f = fit_log_square(s);
  auto shuffled = s;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const auto g = fit_log_square(shuffled);
  CHECK(f.a == g.a);
  CHECK(f.b == g.b);
  CHECK(f.c == g.c);
  const double x = 3e-4, u = std::log(x);
  s.push_back({x, f.a * u * u + f.b * u + f.c});
  const auto h = fit_log_square(s);
  CHECK(h.a == doctest::Approx(f.a).epsilon(1e-10));
  CHECK(h.b == doctest::Approx(f.b).epsilon(1e-10));
  CHECK(h.c == doctest::Approx(f.c).epsilon(1e-10));
}

TEST_CASE("stability half selection") {
  auto s = model(1.0, 0.0, 0.0);
  for (auto& p : s) p.y += 0.05 * std::sin(3.0 * std::log(p.x));
  FitOptions lower;
  lower.stability_half = Half::lower;
  const auto up = fit_log_square(s);
  const auto lo = fit_log_square(s, lower);
  CHECK(up.a == lo.a);
  CHECK(std::isfinite(up.shift_a));
  CHECK(std::isfinite(lo.shift_a));
  CHECK(up.shift_a != lo.shift_a);
  const auto small = fit_log_square(model(1.0, 0.0, 0.0, 5));
  CHECK(std::isnan(small.stability_shift));
}

TEST_CASE("invalid samples") {
  CHECK(error_kind([] { fit_log_square(model(1, 1, 1, 4)); }) == ErrorKind::InvalidArgument);
  auto neg = model(1, 1, 1);
  neg[2].x = -1.0;
  CHECK(error_kind([&] { fit_log_square(neg); }) == ErrorKind::InvalidArgument);
  std::vector<Sample> collapsed = {{0.1, 1}, {0.1, 2}, {0.01, 3}, {0.01, 4}, {0.001, 5}, {0.001, 6}};
  CHECK(error_kind([&] { fit_log_square(collapsed); }) == ErrorKind::SingularDesign);
}
