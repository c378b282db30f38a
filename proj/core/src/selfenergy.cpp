#include "vanhove/selfenergy.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <unordered_map>

#include "vanhove/error.hpp"
#include "vanhove/orthant.hpp"
#include "vanhove/special.hpp"

namespace vanhove::selfenergy {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;

void require_q0(double q0) {
  if (q0 == 0.0) throw Error(ErrorKind::ZeroFrequency, "q0 must be nonzero");
  if (!std::isfinite(q0)) throw Error(ErrorKind::InvalidArgument, "q0 must be finite");
}

// 1D spec with breakpoints at the q0 scale.
QuadSpec scaled_1d(const QuadSpec& base, double q0, double a, double b,
                   std::initializer_list<double> anchors) {
  QuadSpec s = base;
  s.refinement = quad::Refinement::uniform;
  s.breakpoints.clear();
  for (double f : {0.25, 1.0, 4.0, 16.0})
    for (double anchor : anchors) {
      const double p = anchor + f * q0;
      if (p > a && p < b) s.breakpoints.push_back(p);
      const double m = anchor - f * q0;
      if (m > a && m < b) s.breakpoints.push_back(m);
    }
  return s;
}

inline cplx zden(double q0, double eps) { return cplx(eps, q0); }

inline double phi(double q0, double e) {
  const double e2 = e * e, q2 = q0 * q0;
  const double d = e2 + q2;
  return (e2 - q2) / (d * d);
}

// Zero-temperature numerator of the kernel with the Theta_{1/2} convention.
inline double numerator0(double E1, double E2, double E3) {
  static const ThermalState zero = ThermalState::zero();
  return matsubara::kernel_numerator(zero, E1, E2, E3);
}

// Sum over the eight restricted cases of the folded integrand, with the
// restriction rho removed by X = X' t (or Y = Y' t).
template <class T, class G>
T restricted_sum(std::span<const double> u, const G& g) {
  T sum{};
  for (int n : orthant::kRestricted) {
    const auto& t = orthant::term(n);
    orthant::Point p;
    double jac;
    if (t.rho_axis == orthant::RhoAxis::x) {
      p = {u[0] * u[2], u[1], u[2], u[3]};
      jac = u[2];
    } else {
      p = {u[0], u[1] * u[3], u[2], u[3]};
      jac = u[3];
    }
    sum += jac * g(t, p);
  }
  return sum;
}

QuadResult real_part(const ComplexQuadResult& c) {
  return {c.value.real(), c.error_estimate, c.evaluations, c.converged};
}

QuadResult scaled(QuadResult r, double f) {
  r.value *= f;
  r.error_estimate *= std::abs(f);
  return r;
}

QuadResult combine(std::initializer_list<std::pair<double, QuadResult>> parts, double constant) {
  QuadResult out;
  out.value = constant;
  out.converged = true;
  for (const auto& [w, r] : parts) {
    out.value += w * r.value;
    out.error_estimate += std::abs(w) * r.error_estimate;
    out.evaluations += r.evaluations;
    out.converged = out.converged && r.converged;
  }
  return out;
}

}  // namespace

// ------------------------------------------------------------------- Sigma2

ComplexQuadResult sigma2(double q0, const Vec2& q, const ThermalState& state,
                         const QuadSpec& spec) {
  require_q0(q0);
  state.validate();
  const double xi = q[0], eta = q[1];
  auto f = [&](std::span<const double> v) {
    const double x = v[0], y = v[1], xp = v[2], yp = v[3];
    return matsubara::sigma2_kernel(state, (xi + x - xp) * (eta + y - yp), x * y, xp * yp, q0);
  };
  QuadSpec s = spec;
  if (state.zero_temperature) s.initial_splits = std::max(s.initial_splits, 2);
  return quad::integrate_complex(f, quad::Box::symmetric(4), s);
}

std::complex<double> sigma2_midpoint(double q0, const Vec2& q, const ThermalState& state,
                                     int n) {
  require_q0(q0);
  state.validate();
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "grid must be positive");
  const double h = 2.0 / n;
  std::vector<double> c(n);
  for (int i = 0; i < n; ++i) c[i] = -1.0 + (i + 0.5) * h;
  cplx sum = 0.0;
  for (double x : c)
    for (double y : c)
      for (double xp : c)
        for (double yp : c)
          sum += matsubara::sigma2_kernel(state, (q[0] + x - xp) * (q[1] + y - yp), x * y,
                                          xp * yp, q0);
  return sum * std::pow(h, 4);
}

FrequencySumOracle frequency_sum_oracle(double beta, int matsubara_index, double cutoff,
                                        int grid) {
  if (!(beta > 0.0) || !(cutoff > 0.0) || grid < 2 || grid % 2 != 0)
    throw Error(ErrorKind::InvalidArgument, "oracle needs beta > 0, cutoff > 0, even grid");
  const double w0 = kPi / beta;
  const double q0 = w0 * (2 * matsubara_index + 1);

  // Group grid points by (E1, E3); energies are integers over grid^2.
  struct Key {
    long e1, e3;
    bool operator<(const Key& o) const { return e1 != o.e1 ? e1 < o.e1 : e3 < o.e3; }
  };
  std::map<Key, std::map<long, long>> groups;  // (E1,E3) -> E2 -> multiplicity
  std::vector<long> p(grid);
  for (int i = 0; i < grid; ++i) p[i] = 2 * i + 1 - grid;  // x = p / grid
  for (long x : p)
    for (long y : p)
      for (long xp : p)
        for (long yp : p) groups[{(x - xp) * (y - yp), xp * yp}][x * y] += 1;
  const double scale = 1.0 / (static_cast<double>(grid) * grid);
  const double cell = std::pow(2.0 / grid, 4);

  auto summed = [&](double omega_max) {
    const int N = static_cast<int>(std::floor((omega_max / w0 + 1.0) / 2.0));
    const int M = 2 * N;  // n in [-N, N)
    auto G = [&](int n, double E) { return 1.0 / cplx(-E, w0 * (2 * n + 1)); };
    cplx total = 0.0;
    std::vector<cplx> g1(M), g3(2 * M + 1), h(M);
    for (const auto& [key, e2s] : groups) {
      const double E1 = key.e1 * scale, E3 = key.e3 * scale;
      for (int a = 0; a < M; ++a) g1[a] = G(a - N, E1);
      // third index k + m - n ranges over [k - (M-1), k + (M-1)]
      for (int d = -(M - 1); d <= M - 1; ++d) g3[d + M] = G(matsubara_index + d, E3);
      for (int b = 0; b < M; ++b) {
        cplx acc = 0.0;
        for (int a = 0; a < M; ++a) acc += g1[a] * g3[b - a + M];
        h[b] = acc;
      }
      for (const auto& [e2, mult] : e2s) {
        const double E2 = e2 * scale;
        cplx acc = 0.0;
        for (int b = 0; b < M; ++b) acc += G(b - N, E2) * h[b];
        total += static_cast<double>(mult) * acc;
      }
    }
    return -total * cell / (beta * beta);
  };

  FrequencySumOracle o;
  o.value = summed(cutoff);
  o.half_cutoff = summed(0.5 * cutoff);
  o.truncation_error = std::abs(o.value - o.half_cutoff);
  const ThermalState st = ThermalState::at_beta(beta);
  o.grid_error = std::abs(sigma2_midpoint(q0, Vec2::Zero(), st, grid) -
                          sigma2_midpoint(q0, Vec2::Zero(), st, grid / 2));
  return o;
}

// ------------------------------------------------------- frequency derivative

QuadResult frequency_integral(double q0, IForm form, const QuadSpec& spec) {
  require_q0(q0);
  q0 = std::abs(q0);
  const double q2 = q0 * q0;
  switch (form) {
    case IForm::dilog_1d: {
      auto H = [&](double s) { return -0.25 * special::dilog(-s * s / q2); };
      auto h = [&](double a) { return std::log1p(a * a / q2) / (2.0 * a); };
      auto f = [&](std::span<const double> v) {
        const double yp = v[0];
        const double inner = H(2.0 * yp) - H(yp);
        double outer;
        if (yp < 0.1)
          outer = quad::gauss_kronrod15(h, 1.0 + yp, 1.0 + 2.0 * yp).value;
        else
          outer = H(1.0 + 2.0 * yp) - H(1.0 + yp);
        return (inner - outer) / yp;
      };
      return scaled(quad::integrate(f, quad::Box::interval(0.0, 1.0),
                                    scaled_1d(spec, q0, 0.0, 1.0, {0.0})),
                    4.0);
    }
    case IForm::log_2d: {
      auto h = [&](double a) { return std::log1p(a * a / q2) / (2.0 * a); };
      auto f = [&](std::span<const double> v) {
        const double y = v[0], yp = v[1];
        return (h(y + yp) - h(y + 2.0 * yp)) / yp;
      };
      return scaled(quad::integrate(f, quad::Box::unit(2), spec), 4.0);
    }
    case IForm::direct_4d: {
      // x = x' t
      auto f = [&](std::span<const double> v) {
        const double t = v[0], y = v[1], xp = v[2], yp = v[3];
        const double x = xp * t;
        return xp * phi(q0, (2.0 * xp - x) * yp + y * xp);
      };
      QuadSpec s = spec;
      if (s.refinement == quad::Refinement::singularity_guided && !s.manifold) {
        s.manifold = [](std::span<const double> v) {
          const double x = v[2] * v[0];
          return (2.0 * v[2] - x) * v[3] + v[1] * v[2];
        };
        s.q0 = q0;
      }
      return scaled(quad::integrate(f, quad::Box::unit(4), s), 4.0);
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown form");
}

QuadResult im_d0_sigma2(double q0, const QuadSpec& spec) {
  return scaled(frequency_integral(q0, IForm::dilog_1d, spec), -2.0);
}

QuadResult im_d0_sigma2_direct(double q0, long samples, std::uint64_t seed) {
  require_q0(q0);
  auto f = [q0](std::span<const double> v) {
    const double x = v[0], y = v[1], xp = v[2], yp = v[3];
    const double E1 = (x - xp) * (y - yp), E2 = x * y, E3 = xp * yp;
    return numerator0(E1, E2, E3) * phi(q0, E2 - E3 - E1);
  };
  return quad::integrate_mc(f, quad::Box::symmetric(4), samples, seed);
}

double c1_constant(const QuadSpec& spec) {
  auto f = [](std::span<const double> v) {
    const double x = v[0];
    return std::log1p(x / (1.0 + x)) / x;
  };
  QuadSpec s = spec;
  s.abs_tol = 1e-15;
  s.rel_tol = 1e-14;
  const auto r = quad::integrate(f, quad::Box::interval(0.0, 1.0), s);
  return 2.0 * kLn2 * kLn2 - 4.0 * r.value;
}

// ------------------------------------------------------------------ gradient

std::complex<double> grad_integrand(double q0, const ThermalState& s, int component,
                                    const std::array<double, 4>& X) {
  const double x = X[0], y = X[1], xp = X[2], yp = X[3];
  const double E1 = (x - xp) * (y - yp), E2 = x * y, E3 = xp * yp;
  const cplx z = zden(q0, E2 - E3 - E1);
  const double g = matsubara::fermi(s, E2) - matsubara::fermi(s, E3);
  const double N = matsubara::kernel_numerator(s, E1, E2, E3);
  const double lever = component == 0 ? (y - yp) : (x - xp);
  // dK/dE1 = delta(E1) g / z - N / z^2
  return lever * (matsubara::approx_delta(s, E1) * g / z - N / (z * z));
}

Gradient grad_sigma2_at_vh(double q0, const ThermalState& state, const QuadSpec& spec) {
  require_q0(q0);
  state.validate();
  if (state.zero_temperature)
    throw Error(ErrorKind::InvalidArgument, "gradient check needs finite beta");
  Gradient g;
  for (int c = 0; c < 2; ++c) {
    auto f = [&, c](std::span<const double> v) {
      return grad_integrand(q0, state, c, {v[0], v[1], v[2], v[3]});
    };
    (c == 0 ? g.d_xi : g.d_eta) = quad::integrate_complex(f, quad::Box::symmetric(4), spec);
  }
  return g;
}

Gradient grad_sigma2_mc(double q0, const ThermalState& state, long samples,
                        std::uint64_t seed) {
  require_q0(q0);
  state.validate();
  if (state.zero_temperature)
    throw Error(ErrorKind::InvalidArgument, "gradient check needs finite beta");
  Gradient g;
  for (int c = 0; c < 2; ++c) {
    auto f = [&, c](std::span<const double> v) {
      return grad_integrand(q0, state, c, {v[0], v[1], v[2], v[3]});
    };
    (c == 0 ? g.d_xi : g.d_eta) =
        quad::integrate_mc_complex(f, quad::Box::symmetric(4), samples, seed + c);
  }
  return g;
}

// ------------------------------------------------------------- mixed second

QuadResult zeta12(double q0, Zeta12Form form, const QuadSpec& spec) {
  require_q0(q0);
  q0 = std::abs(q0);
  const double q2 = q0 * q0;
  spec.validate();
  switch (form) {
    case Zeta12Form::reduced_1d: {
      auto P = [&](std::span<const double> v) {
        const double y = v[0];
        return -std::log((q2 + (y + 1) * (y + 1)) / (q2 + (y + 2) * (y + 2))) -
               std::log1p((y + 2) * (y + 2) / q2) / (2.0 * (y + 2));
      };
      auto E = [&](std::span<const double> v) {
        const double e = v[0];
        return (std::log1p(3 * e * e / (q2 + e * e)) -
                std::log1p((2 * e + 3 * e * e) / (q2 + (1 + e) * (1 + e)))) /
               e;
      };
      const QuadSpec s1 = scaled_1d(spec, q0, 0.0, 1.0, {0.0});
      const auto a = quad::integrate(P, quad::Box::interval(0.0, 1.0), s1);
      const auto b = quad::integrate(E, quad::Box::interval(0.0, 1.0), s1);
      const double mid = 4.0 * std::log1p(1.0 / q2) + special::dilog(-1.0 / q2);
      return combine({{-4.0, a}, {-4.0, b}}, mid);
    }
    case Zeta12Form::reduced_3d: {
      auto f = [&](std::span<const double> v) {
        const double y = v[0], yp = v[1], z = v[2];
        const cplx d1(z * (y + yp), q0), d2(z * (y + 2 * yp), q0);
        return -8.0 * ((y + yp) * z * z / (d1 * d2 * d2)).real();
      };
      return quad::integrate(f, quad::Box::unit(3), spec);
    }
    case Zeta12Form::orthant_4d: {
      auto f = [&](std::span<const double> u) {
        return restricted_sum<double>(u, [&](const orthant::OrthantTerm& t,
                                             const orthant::Point& p) {
          const cplx z = zden(q0, t.epsilon(p));
          return 2.0 * (t.F(p) / (z * z * z)).real();
        });
      };
      return quad::integrate(f, quad::Box::unit(4), spec);
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown form");
}

MixedSecond d2_sigma2_xi_eta(double q0, const QuadSpec& spec) {
  MixedSecond m;
  m.zeta11 = scaled(frequency_integral(q0, IForm::dilog_1d, spec), 2.0);
  m.zeta12 = zeta12(q0, Zeta12Form::reduced_1d, spec);
  return m;
}

QuadResult d2_xi_eta_folded(double q0, const QuadSpec& spec) {
  require_q0(q0);
  q0 = std::abs(q0);
  auto f = [&](std::span<const double> u) {
    return restricted_sum<double>(u, [&](const orthant::OrthantTerm& t, const orthant::Point& p) {
      const cplx z = zden(q0, t.epsilon(p));
      return ((1.0 + 2.0 * t.F(p) / z) / (z * z)).real();
    });
  };
  return quad::integrate(f, quad::Box::unit(4), spec);
}

QuadResult d2_xi_eta_direct(double q0, long samples, std::uint64_t seed) {
  require_q0(q0);
  auto f = [q0](std::span<const double> v) {
    const double x = v[0], y = v[1], xp = v[2], yp = v[3];
    const double E1 = (x - xp) * (y - yp), E2 = x * y, E3 = xp * yp;
    const cplx z = zden(q0, E2 - E3 - E1);
    return (-numerator0(E1, E2, E3) * (1.0 + 2.0 * E1 / z) / (z * z)).real();
  };
  return quad::integrate_mc(f, quad::Box::symmetric(4), samples, seed);
}

std::complex<double> d2_xi_eta_integrand(double q0, const ThermalState& s,
                                         const std::array<double, 4>& X) {
  const double x = X[0], y = X[1], xp = X[2], yp = X[3];
  const double E1 = (x - xp) * (y - yp), E2 = x * y, E3 = xp * yp;
  const cplx z = zden(q0, E2 - E3 - E1);
  const double N = matsubara::kernel_numerator(s, E1, E2, E3);
  const double g = matsubara::fermi(s, E2) - matsubara::fermi(s, E3);
  const double d = matsubara::approx_delta(s, E1);
  const double dp = matsubara::approx_delta_prime(s, E1);
  const cplx z1 = (1.0 + 2.0 * E1 / z) * N / (z * z);
  const cplx z2 = (-E1 * dp - d) * g / z;
  const cplx z3 = -2.0 * E1 * d * g / (z * z);
  return -(z1 + z2 + z3);
}

// ------------------------------------------------------- finite-beta pieces

ComplexQuadResult finite_beta_term(FiniteBetaTerm term, double q0, const ThermalState& state,
                                   const QuadSpec& spec) {
  require_q0(q0);
  state.validate();
  if (state.zero_temperature)
    throw Error(ErrorKind::InvalidArgument, "finite-beta terms need finite beta");
  spec.validate();

  auto point = [&, term](double x, double y, double xp, double yp) -> cplx {
    const double E1 = (x - xp) * (y - yp), E2 = x * y, E3 = xp * yp;
    const cplx z = zden(q0, E2 - E3 - E1);
    const double g = matsubara::fermi(state, E2) - matsubara::fermi(state, E3);
    const double dy2 = (y - yp) * (y - yp);
    switch (term) {
      case FiniteBetaTerm::zeta2: {
        const double d = matsubara::approx_delta(state, E1);
        const double dp = matsubara::approx_delta_prime(state, E1);
        return (-E1 * dp - d) * g / z;
      }
      case FiniteBetaTerm::zeta3:
        return -2.0 * E1 * matsubara::approx_delta(state, E1) * g / (z * z);
      case FiniteBetaTerm::xi_delta:
        return 2.0 * matsubara::approx_delta(state, E1) * g * dy2 / (z * z);
      case FiniteBetaTerm::xi_delta_prime:
        return matsubara::approx_delta_prime(state, E1) * g * dy2 / z;
      case FiniteBetaTerm::xi_numerator: {
        const double N = matsubara::kernel_numerator(state, E1, E2, E3);
        return -2.0 * N * dy2 / (z * z * z);
      }
    }
    return 0.0;
  };

  QuadSpec inner = spec;
  inner.refinement = quad::Refinement::uniform;
  inner.abs_tol = spec.abs_tol * 1e-2;
  inner.rel_tol = spec.rel_tol * 1e-1;
  inner.max_evaluations = 60'000;
  inner.initial_splits = 1;
  QuadSpec outer = spec;
  outer.initial_splits = std::max(spec.initial_splits, 2);
  outer.breakpoints.clear();

  auto f = [&](std::span<const double> v) {
    const double x = v[0], y = v[1], yp = v[2];
    QuadSpec s = inner;
    s.breakpoints.clear();
    s.breakpoints.push_back(std::min(x, 0.0));
    if (x != 0.0) s.breakpoints.push_back(std::max(x, 0.0));
    auto g = [&](std::span<const double> w) { return point(x, y, w[0], yp); };
    return quad::integrate_complex(g, quad::Box::interval(-1.0, 1.0), s).value;
  };
  return quad::integrate_complex(f, quad::Box::symmetric(3), outer);
}

// ------------------------------------------------------ pure second derivative

double b0_closed(double q0) {
  require_q0(q0);
  q0 = std::abs(q0);
  return 2.0 * (2.0 * std::log1p(4.0 / (q0 * q0)) - 4.0 + 2.0 * q0 * std::atan(2.0 / q0));
}

QuadResult b0_parent(double q0, const QuadSpec& spec) {
  require_q0(q0);
  q0 = std::abs(q0);
  // y' = -1 + (y + 1) t
  auto f = [q0](std::span<const double> v) {
    const double y = v[0], t = v[1];
    const double w = (y + 1.0) * (1.0 - t);
    return 4.0 * (y + 1.0) * w / (q0 * q0 + w * w);
  };
  return quad::integrate(f, quad::Box{{-1.0, 0.0}, {1.0, 1.0}}, spec);
}

namespace {

inline double theta_half(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? 0.0 : 0.5); }

ComplexQuadResult i2_3d(double q0, const QuadSpec& spec) {
  // (y, t, x) with y' = -1 + (y + 1) t
  auto f = [q0](std::span<const double> v) {
    const double y = v[0], t = v[1], x = v[2];
    const double yp = -1.0 + (y + 1.0) * t;
    const double d = y - yp;
    const cplx a(x * d, q0), b(-x * d, q0);
    return 2.0 * (y + 1.0) * theta_half(-x * y) * (yp / (a * a) - (yp - 2.0 * y) / (b * b));
  };
  QuadSpec s = spec;
  s.initial_splits = std::max(s.initial_splits, 2);
  return quad::integrate_complex(f, quad::Box{{-1.0, 0.0, -1.0}, {1.0, 1.0, 1.0}}, s);
}

}  // namespace

QuadResult re_i2_parent(double q0, const QuadSpec& spec) {
  require_q0(q0);
  return real_part(i2_3d(std::abs(q0), spec));
}

double PureSecond::imag() const {
  if (!with_imaginary) return std::numeric_limits<double>::quiet_NaN();
  return I2_3d.value.imag() + delta_term.value.imag() + numerator_term.value.imag();
}

bool PureSecond::converged() const {
  bool ok = re_I2.converged;
  if (with_imaginary) ok = ok && I2_3d.converged && delta_term.converged && numerator_term.converged;
  return ok;
}

PureSecond d2_sigma2_xi_xi(double q0, const QuadSpec& spec, bool with_imaginary) {
  require_q0(q0);
  const double q = std::abs(q0);
  PureSecond r;
  r.B0 = b0_closed(q);
  auto f = [q](std::span<const double> v) {
    const double y = v[0];
    return -4.0 * y * (std::atan((1.0 + y) / q) - std::atan((1.0 - y) / q)) / q;
  };
  r.re_I2 = quad::integrate(f, quad::Box::interval(0.0, 1.0), scaled_1d(spec, q, 0.0, 1.0, {1.0}));
  r.with_imaginary = with_imaginary;
  if (with_imaginary) {
    r.I2_3d = i2_3d(q, spec);
    auto g = [q](std::span<const double> v) {
      const double x = v[0], y = v[1], yp = v[2];
      const double d = y - yp;
      const cplx a(x * d, q);
      return 2.0 * (theta_half(-x * y) - theta_half(-x * yp)) * std::abs(d) / (a * a);
    };
    QuadSpec s = spec;
    s.initial_splits = std::max(s.initial_splits, 2);
    r.delta_term = quad::integrate_complex(g, quad::Box::symmetric(3), s);
    auto h = [q](std::span<const double> u) {
      return restricted_sum<cplx>(u, [&](const orthant::OrthantTerm& t, const orthant::Point& p) {
        const cplx z = zden(q, t.epsilon(p));
        const double D = t.D(p);
        return 2.0 * D * D / (z * z * z);
      });
    };
    r.numerator_term = quad::integrate_complex(h, quad::Box::unit(4), spec);
    if (q0 < 0.0) {
      // conjugation under q0 -> -q0
      r.I2_3d.value = std::conj(r.I2_3d.value);
      r.delta_term.value = std::conj(r.delta_term.value);
      r.numerator_term.value = std::conj(r.numerator_term.value);
    }
  }
  return r;
}

}  // namespace vanhove::selfenergy
