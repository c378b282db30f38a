#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "vanhove/matsubara.hpp"
#include "vanhove/orthant.hpp"
#include "vanhove/quad.hpp"
#include "vanhove/selfenergy.hpp"

using namespace vanhove;
using namespace vanhove::orthant;

namespace {

std::vector<Point> random_points(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> v(n);
  for (auto& p : v) p = {u(rng), u(rng), u(rng), u(rng)};
  return v;
}

bool in_M(int n) {
  for (int m : kRestricted)
    if (m == n) return true;
  return false;
}

}  // namespace

TEST_CASE("table shape") {
  REQUIRE(table().size() == 16);
  for (int n = 1; n <= 16; ++n) {
    const auto& t = term(n);
    CHECK(t.n == n);
    CHECK(t.has_rho() == in_M(n));
    CHECK(t.has_D == in_M(n));
    CHECK(t.has_F == in_M(n));
  }
  CHECK(error_kind([] { term(0); }) == ErrorKind::InvalidArgument);
  CHECK(error_kind([] { term(5).D({0.1, 0.2, 0.3, 0.4}); }) == ErrorKind::InvalidArgument);
  CHECK(error_kind([] { term(6).rho({0.1, 0.2, 0.3, 0.4}); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("row 1 example") {
  const Point p{0.0, 0.0, 1.0, 1.0};
  CHECK(term(1).epsilon(p) == 2.0);
  CHECK(term(1).rho(p));
}

TEST_CASE("every row agrees with the generic formula at signed coordinates") {
  for (const auto& t : table()) {
    for (const auto& p : random_points(10000, 100 + t.n)) {
      const auto s = t.signed_coords(p);
      const double gen = generic_epsilon(s[0], s[1], s[2], s[3]);
      REQUIRE(t.epsilon(p) == doctest::Approx(gen).epsilon(1e-14).scale(1.0));
      if (t.has_D) REQUIRE(t.D(p) == doctest::Approx(s[1] - s[3]).epsilon(1e-14).scale(1.0));
      if (t.has_F)
        REQUIRE(t.F(p) ==
                doctest::Approx((s[0] - s[2]) * (s[1] - s[3])).epsilon(1e-14).scale(1.0));
    }
  }
}

TEST_CASE("reflection identity n+8") {
  for (int n = 1; n <= 8; ++n) {
    const auto& a = term(n);
    const auto& b = term(n + 8);
    for (const auto& p : random_points(10000, n)) {
      REQUIRE(b.epsilon(p) == a.epsilon(p));
      if (a.has_D) {
        REQUIRE(b.D(p) == -a.D(p));
        REQUIRE(b.F(p) == a.F(p));
        REQUIRE(b.rho(p) == a.rho(p));
      }
    }
  }
}

TEST_CASE("identity eps1 = -eps3 and eps2 = -eps4") {
  for (const auto& p : random_points(10000, 13)) {
    REQUIRE(term(1).epsilon(p) == doctest::Approx(-term(3).epsilon(p)).scale(1.0));
    REQUIRE(term(2).epsilon(p) == doctest::Approx(-term(4).epsilon(p)).scale(1.0));
  }
}

TEST_CASE("exchange identity between rows 1 and 2") {
  for (const auto& p : random_points(10000, 12)) {
    const Point swapped{p.Y, p.X, p.Yp, p.Xp};
    REQUIRE(term(2).epsilon(swapped) == doctest::Approx(term(1).epsilon(p)).scale(1.0));
    REQUIRE(term(2).rho(swapped) == term(1).rho(p));
  }
}

TEST_CASE("restricted rows are exactly the support of the zero-temperature numerator") {
  const auto zero = matsubara::ThermalState::zero();
  for (const auto& t : table()) {
    for (const auto& p : random_points(2000, 200 + t.n)) {
      const auto s = t.signed_coords(p);
      const double E1 = (s[0] - s[2]) * (s[1] - s[3]), E2 = s[0] * s[1], E3 = s[2] * s[3];
      const double N = matsubara::kernel_numerator(zero, E1, E2, E3);
      const bool inside = t.has_rho() && t.rho(p);
      REQUIRE(N == (inside ? -1.0 : 0.0));
    }
  }
}

TEST_CASE("fold of the constant 1 over all cases is 16") {
  const auto g = fold_to_positive([](const std::array<double, 4>&) { return 1.0; }, all_cases());
  for (const auto& p : random_points(100, 7)) {
    const double v[4] = {p.X, p.Y, p.Xp, p.Yp};
    CHECK(g(v) == 16.0);
  }
  CHECK(error_kind([] { fold_to_positive([](const std::array<double, 4>&) { return 1.0; }, {1, 1}); }) ==
        ErrorKind::InvalidArgument);
  CHECK(error_kind([] { fold_to_positive([](const std::array<double, 4>&) { return 1.0; }, {17}); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("fold of a smooth integrand equals the direct integral") {
  auto f = [](const std::array<double, 4>& x) {
    return std::exp(0.3 * x[0] - 0.2 * x[1] * x[2] + 0.5 * x[3]) * std::cos(x[0] + x[2]);
  };
  quad::QuadSpec s;
  s.abs_tol = 1e-10;
  s.rel_tol = 1e-10;
  const auto direct = quad::integrate(
      [&](std::span<const double> v) { return f({v[0], v[1], v[2], v[3]}); },
      quad::Box::symmetric(4), s);
  const auto folded = quad::integrate(fold_to_positive(f, all_cases()), quad::Box::unit(4), s);
  CHECK(std::abs(direct.value - folded.value) <=
        3.0 * (direct.error_estimate + folded.error_estimate));
}

TEST_CASE("restricted fold of Phi integrates to twice the frequency integral") {
  const double q0 = 0.3;
  auto phi = [q0](const std::array<double, 4>& x) {
    const double e = generic_epsilon(x[0], x[1], x[2], x[3]);
    const double d = e * e + q0 * q0;
    return (e * e - q0 * q0) / (d * d);
  };
  std::vector<int> M(kRestricted.begin(), kRestricted.end());
  const auto g = fold_to_positive(phi, M, Restriction::apply_rho);
  const auto mc = quad::integrate_mc(g, quad::Box::unit(4), 1'000'000, 11);
  const double I = selfenergy::frequency_integral(q0, selfenergy::IForm::dilog_1d, {}).value;
  CHECK(std::abs(mc.value - 2.0 * I) < 4.0 * mc.error_estimate);
}
