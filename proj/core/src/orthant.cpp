#include "vanhove/orthant.hpp"

#include <algorithm>

#include "vanhove/error.hpp"

namespace vanhove::orthant {

namespace {

// Rows 1-4 (and their reflections 9-12).
double eps1(const Point& p) { return p.Xp * p.Y + (2.0 * p.Xp - p.X) * p.Yp; }
double eps2(const Point& p) { return p.X * p.Yp + (2.0 * p.Yp - p.Y) * p.Xp; }
double eps3(const Point& p) { return p.X * p.Yp - (2.0 * p.Yp + p.Y) * p.Xp; }
double eps4(const Point& p) { return p.Xp * p.Y - (2.0 * p.Xp + p.X) * p.Yp; }
// Rows 5-8 (and 13-16).
double eps5(const Point& p) { return p.X * p.Yp + p.Xp * p.Y - 2.0 * p.Xp * p.Yp; }
double eps6(const Point& p) { return -p.X * p.Yp - p.Xp * p.Y - 2.0 * p.Xp * p.Yp; }
double eps7(const Point& p) { return -p.X * p.Yp - p.Xp * p.Y + 2.0 * p.Xp * p.Yp; }
double eps8(const Point& p) { return p.X * p.Yp + p.Xp * p.Y + 2.0 * p.Xp * p.Yp; }

double D1(const Point& p) { return p.Y + p.Yp; }
double D2(const Point& p) { return p.Y - p.Yp; }
double D3(const Point& p) { return -(p.Y + p.Yp); }
double D4(const Point& p) { return -(p.Y - p.Yp); }
double D9(const Point& p) { return -D1(p); }
double D10(const Point& p) { return -D2(p); }
double D11(const Point& p) { return -D3(p); }
double D12(const Point& p) { return -D4(p); }

double F1(const Point& p) { return (p.X - p.Xp) * (p.Y + p.Yp); }
double F2(const Point& p) { return (p.X + p.Xp) * (p.Y - p.Yp); }
double F3(const Point& p) { return -F1(p); }
double F4(const Point& p) { return -F2(p); }

OrthantTerm row(int n, std::array<int, 4> sign, double (*eps)(const Point&),
                double (*d)(const Point&), double (*f)(const Point&), RhoAxis rho) {
  OrthantTerm t;
  t.n = n;
  t.sign = sign;
  t.epsilon_fn = eps;
  t.D_fn = d;
  t.F_fn = f;
  t.has_D = d != nullptr;
  t.has_F = f != nullptr;
  t.rho_axis = rho;
  return t;
}

std::vector<OrthantTerm> build() {
  using R = RhoAxis;
  return {
      row(1, {+1, +1, +1, -1}, eps1, D1, F1, R::x),
      row(2, {+1, +1, -1, +1}, eps2, D2, F2, R::y),
      row(3, {+1, -1, +1, +1}, eps3, D3, F3, R::x),
      row(4, {+1, -1, -1, -1}, eps4, D4, F4, R::y),
      row(5, {+1, +1, +1, +1}, eps5, nullptr, nullptr, R::none),
      row(6, {+1, +1, -1, -1}, eps6, nullptr, nullptr, R::none),
      row(7, {+1, -1, +1, -1}, eps7, nullptr, nullptr, R::none),
      row(8, {+1, -1, -1, +1}, eps8, nullptr, nullptr, R::none),
      row(9, {-1, -1, -1, +1}, eps1, D9, F1, R::x),
      row(10, {-1, -1, +1, -1}, eps2, D10, F2, R::y),
      row(11, {-1, +1, -1, -1}, eps3, D11, F3, R::x),
      row(12, {-1, +1, +1, +1}, eps4, D12, F4, R::y),
      row(13, {-1, -1, -1, -1}, eps5, nullptr, nullptr, R::none),
      row(14, {-1, -1, +1, +1}, eps6, nullptr, nullptr, R::none),
      row(15, {-1, +1, -1, +1}, eps7, nullptr, nullptr, R::none),
      row(16, {-1, +1, +1, -1}, eps8, nullptr, nullptr, R::none),
  };
}

}  // namespace

double OrthantTerm::D(const Point& p) const {
  if (!D_fn) throw Error(ErrorKind::InvalidArgument, "D is absent for this case");
  return D_fn(p);
}

double OrthantTerm::F(const Point& p) const {
  if (!F_fn) throw Error(ErrorKind::InvalidArgument, "F is absent for this case");
  return F_fn(p);
}

bool OrthantTerm::rho(const Point& p) const {
  switch (rho_axis) {
    case RhoAxis::x: return p.X < p.Xp;
    case RhoAxis::y: return p.Y < p.Yp;
    case RhoAxis::none: break;
  }
  throw Error(ErrorKind::InvalidArgument, "rho is absent for this case");
}

std::array<double, 4> OrthantTerm::signed_coords(const Point& p) const {
  return {sign[0] * p.X, sign[1] * p.Y, sign[2] * p.Xp, sign[3] * p.Yp};
}

const std::vector<OrthantTerm>& table() {
  static const std::vector<OrthantTerm> t = build();
  return t;
}

const OrthantTerm& term(int n) {
  if (n < 1 || n > 16) throw Error(ErrorKind::InvalidArgument, "case index must be 1..16");
  return table()[n - 1];
}

std::vector<int> all_cases() {
  std::vector<int> v(16);
  for (int i = 0; i < 16; ++i) v[i] = i + 1;
  return v;
}

std::function<double(std::span<const double>)> fold_to_positive(Integrand4 f,
                                                                 std::vector<int> selection,
                                                                 Restriction restriction) {
  for (int n : selection)
    if (n < 1 || n > 16) throw Error(ErrorKind::InvalidArgument, "case index must be 1..16");
  std::sort(selection.begin(), selection.end());
  if (std::adjacent_find(selection.begin(), selection.end()) != selection.end())
    throw Error(ErrorKind::InvalidArgument, "selection lists a case twice");
  return [f = std::move(f), selection = std::move(selection),
          restriction](std::span<const double> v) {
    const Point p{v[0], v[1], v[2], v[3]};
    double sum = 0.0;
    for (int n : selection) {
      const OrthantTerm& t = term(n);
      if (restriction == Restriction::apply_rho && t.has_rho() && !t.rho(p)) continue;
      sum += f(t.signed_coords(p));
    }
    return sum;
  };
}

}  // namespace vanhove::orthant
