#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "vanhove/dispersion.hpp"

using namespace vanhove;
using namespace vanhove::dispersion;
constexpr double kPi = std::numbers::pi;

TEST_CASE("evaluate examples") {
  const auto h = DispersionModel::hubbard(0.3, 0.0);
  CHECK(std::abs(h.evaluate({kPi, 0.0})) < 1e-15);
  CHECK(h.evaluate({0.0, 0.0}) == doctest::Approx(-1.4).epsilon(1e-15));
  CHECK(DispersionModel::xy().evaluate({0.5, -0.2}) == -0.1);
  CHECK(error_kind([] { DispersionModel::hubbard(1.0, 0.0); }) == ErrorKind::InvalidArgument);
  CHECK(error_kind([] { DispersionModel::hubbard(0.0, 0.0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("analytic derivatives match finite differences") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-kPi, kPi), v(-1.0, 1.0);
  for (const auto& m : {DispersionModel::hubbard(0.3, 0.0), DispersionModel::hubbard(0.7, -0.4),
                        DispersionModel::xy()}) {
    for (int i = 0; i < 100; ++i) {
      const Vec2 k = m.kind() == ModelKind::xy ? Vec2(v(rng), v(rng)) : Vec2(u(rng), u(rng));
      const double h = 1e-5;
      const Vec2 g = m.gradient(k);
      const Mat2 H = m.hessian(k);
      CHECK(H(0, 1) == H(1, 0));
      for (int a = 0; a < 2; ++a) {
        Vec2 dk = Vec2::Zero();
        dk[a] = h;
        const double fd = (m.evaluate(k + dk) - m.evaluate(k - dk)) / (2 * h);
        CHECK(std::abs(fd - g[a]) <= 1e-6 * std::max(1.0, std::abs(g[a])));
        const Vec2 gd = (m.gradient(k + dk) - m.gradient(k - dk)) / (2 * h);
        CHECK((gd - H.col(a)).norm() <= 1e-6 * std::max(1.0, H.col(a).norm()));
      }
    }
  }
}

TEST_CASE("Hubbard symmetries") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  const auto m = DispersionModel::hubbard(0.45, 0.2);
  for (int i = 0; i < 1000; ++i) {
    const Vec2 k(u(rng), u(rng));
    CHECK(m.evaluate(k) == m.evaluate(Vec2(k[1], k[0])));
    CHECK(m.evaluate(k) == m.evaluate(-k));
  }
}

TEST_CASE("torus displacement uses the minimum image") {
  const auto m = DispersionModel::hubbard(0.3, 0.0);
  const Vec2 d = m.displacement({3.0, -3.0}, {-3.0, 3.0});
  CHECK(d[0] == doctest::Approx(6.0 - 2 * kPi));
  CHECK(d[1] == doctest::Approx(-6.0 + 2 * kPi));
  CHECK(m.domain() == Domain::torus);
  CHECK(DispersionModel::xy().domain() == Domain::square);
}

TEST_CASE("Hubbard Van Hove points at mu = 0") {
  const auto sps = find_singular_points(DispersionModel::hubbard(0.3, 0.0));
  REQUIRE(sps.size() == 2);
  bool seen_x = false, seen_y = false;
  for (const auto& sp : sps) {
    const Vec2 a = sp.location;
    if (std::abs(std::abs(a[0]) - kPi) < 1e-10 && std::abs(a[1]) < 1e-10) seen_x = true;
    if (std::abs(a[0]) < 1e-10 && std::abs(std::abs(a[1]) - kPi) < 1e-10) seen_y = true;
    CHECK(sp.hessian_eigenvalues[0] == doctest::Approx(-0.7).epsilon(1e-10));
    CHECK(sp.hessian_eigenvalues[1] == doctest::Approx(1.3).epsilon(1e-10));
    CHECK(sp.hessian_eigenvalues[0] * sp.hessian_eigenvalues[1] < 0.0);
  }
  CHECK(seen_x);
  CHECK(seen_y);
}

TEST_CASE("saddles off the Fermi curve are not reported") {
  CHECK(find_singular_points(DispersionModel::hubbard(0.3, 0.5)).empty());
}

TEST_CASE("xy model singular point") {
  const auto sps = find_singular_points(DispersionModel::xy());
  REQUIRE(sps.size() == 1);
  CHECK(sps[0].location.norm() < 1e-14);
  CHECK(sps[0].hessian_eigenvalues[0] == doctest::Approx(-1.0));
  CHECK(sps[0].hessian_eigenvalues[1] == doctest::Approx(1.0));
}

TEST_CASE("eigenvalue product is negative across theta") {
  for (double th : {0.1, 0.2, 0.5, 0.8, 0.95})
    for (const auto& sp : find_singular_points(DispersionModel::hubbard(th, 0.0)))
      CHECK(sp.hessian_eigenvalues[0] * sp.hessian_eigenvalues[1] < 0.0);
}

TEST_CASE("degenerate Hessian is reported") {
  CustomBand band;
  band.name = "monkey";
  band.value = [](const Vec2& k) { return k[0] * k[0] * k[0] - 3.0 * k[0] * k[1] * k[1]; };
  band.gradient = [](const Vec2& k) {
    return Vec2(3.0 * k[0] * k[0] - 3.0 * k[1] * k[1], -6.0 * k[0] * k[1]);
  };
  band.hessian = [](const Vec2& k) {
    Mat2 h;
    h << 6.0 * k[0], -6.0 * k[1], -6.0 * k[1], -6.0 * k[0];
    return h;
  };
  band.seeds = {Vec2(0.0, 0.0)};
  band.domain = Domain::square;
  const auto m = DispersionModel::custom(band);
  CHECK(error_kind([&] { find_singular_points(m); }) == ErrorKind::DegenerateHessian);
}

TEST_CASE("Hubbard normal form") {
  const auto m = DispersionModel::hubbard(0.3, 0.0);
  for (const auto& sp : find_singular_points(m)) {
    const auto nf = morse_normal_form(m, sp);
    CHECK(nf.residual < 1e-6);
    CHECK(std::abs(nf.A.determinant()) > 1e-6);
    CHECK(nf.nu1 == 3);
    CHECK(nf.nu2 == 3);
    CHECK(nf.a_min > 0.0);
    CHECK(nf.b_min > 0.0);
    CHECK(nf.c_min > 0.0);
    // the product reproduces e(center + A k) inside the disc
    for (double t = -0.9; t <= 0.9; t += 0.3) {
      const Vec2 k(nf.radius * t * 0.7, nf.radius * t * -0.5);
      CHECK(std::abs(nf.product(k) - m.evaluate(nf.center + nf.A * k)) < 1e-6);
    }
  }
}

TEST_CASE("Hubbard normal form at theta = 0.5 meets 1e-8") {
  const auto m = DispersionModel::hubbard(0.5, 0.0);
  const auto sps = find_singular_points(m);
  REQUIRE_FALSE(sps.empty());
  NormalFormOptions o;
  o.radius = 0.1;
  o.grid = 41;
  const auto nf = morse_normal_form(m, sps[0], o);
  CHECK(nf.residual < 1e-8);
  CHECK(nf.attempts == 1);
}

TEST_CASE("xy normal form is the exact product") {
  const auto m = DispersionModel::xy();
  const auto nf = morse_normal_form(m, find_singular_points(m)[0]);
  CHECK(nf.nu1 == 0);
  CHECK(nf.nu2 == 0);
  CHECK(nf.residual < 1e-14);
  CHECK(nf.a_min == doctest::Approx(1.0));
  CHECK(nf.a_max == doctest::Approx(1.0));
}

TEST_CASE("normal form option validation") {
  const auto m = DispersionModel::hubbard(0.3, 0.0);
  NormalFormOptions o;
  o.radius = -1.0;
  CHECK(error_kind([&] { morse_normal_form(m, find_singular_points(m)[0], o); }) ==
        ErrorKind::InvalidArgument);
}
