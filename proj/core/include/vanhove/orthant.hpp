#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace vanhove::orthant {

/// Magnitudes (X, Y, X', Y') in [0,1]^4; the signed point is
/// (s_x X, s_y Y, s_x' X', s_y' Y').
struct Point {
  double X, Y, Xp, Yp;
};

/// Which pair a restriction compares: X < X' or Y < Y'.
enum class RhoAxis { none, x, y };

struct OrthantTerm {
  int n = 0;
  std::array<int, 4> sign{};  // signs of (x, y, x', y')
  bool has_D = false;
  bool has_F = false;
  RhoAxis rho_axis = RhoAxis::none;

  double (*epsilon_fn)(const Point&) = nullptr;
  double (*D_fn)(const Point&) = nullptr;
  double (*F_fn)(const Point&) = nullptr;

  double epsilon(const Point& p) const { return epsilon_fn(p); }
  double D(const Point& p) const;  // throws InvalidArgument when absent
  double F(const Point& p) const;  // throws InvalidArgument when absent
  bool has_rho() const { return rho_axis != RhoAxis::none; }
  bool rho(const Point& p) const;  // throws InvalidArgument when absent
  std::array<double, 4> signed_coords(const Point& p) const;
};

/// The 16 sign cases, hard-coded row by row.
const std::vector<OrthantTerm>& table();
const OrthantTerm& term(int n);

/// xy' + x'y - 2x'y' at signed coordinates.
inline double generic_epsilon(double x, double y, double xp, double yp) {
  return x * yp + xp * y - 2.0 * xp * yp;
}

/// Cases where the zero-temperature numerator is nonzero.
inline constexpr std::array<int, 8> kRestricted = {1, 2, 3, 4, 9, 10, 11, 12};

enum class Restriction {
  none,       // plain change of variables: sum_n f(signed point)
  apply_rho,  // additionally multiply by 1{rho_n} where rho_n exists
};

using Integrand4 = std::function<double(const std::array<double, 4>&)>;

/// Pulls an integrand on [-1,1]^4 (arguments x, y, x', y') back to [0,1]^4.
/// With Restriction::none and all 16 cases, the integral over [0,1]^4 of the
/// result equals the integral of f over [-1,1]^4.
std::function<double(std::span<const double>)> fold_to_positive(
    Integrand4 f, std::vector<int> selection, Restriction restriction = Restriction::none);

std::vector<int> all_cases();

}  // namespace vanhove::orthant
