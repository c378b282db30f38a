#include "vanhove/matsubara.hpp"

#include <cmath>

#include "vanhove/error.hpp"

namespace vanhove::matsubara {

ThermalState ThermalState::at_beta(double beta) {
  ThermalState s{beta, false};
  s.validate();
  return s;
}

ThermalState ThermalState::zero() { return ThermalState{0.0, true}; }

void ThermalState::validate() const {
  if (!zero_temperature && !(beta > 0.0 && std::isfinite(beta)))
    throw Error(ErrorKind::InvalidArgument, "beta must be positive and finite");
}

double fermi(const ThermalState& s, double E) {
  if (s.zero_temperature) return E < 0.0 ? 1.0 : (E > 0.0 ? 0.0 : 0.5);
  const double x = s.beta * E;
  // exp only ever sees a nonpositive argument
  if (x >= 0.0) {
    const double t = std::exp(-x);
    return t / (1.0 + t);
  }
  return 1.0 / (1.0 + std::exp(x));
}

double bose(const ThermalState& s, double E) {
  if (s.zero_temperature) {
    if (E == 0.0) throw Error(ErrorKind::BosePole, "Bose function at E = 0");
    return E < 0.0 ? -1.0 : 0.0;
  }
  const double x = s.beta * E;
  if (std::abs(x) < 1e-12) throw Error(ErrorKind::BosePole, "Bose function at |beta E| < 1e-12");
  if (x > 0.0) {
    const double t = std::exp(-x);
    return t / -std::expm1(-x);
  }
  return 1.0 / std::expm1(x);
}

double approx_delta(const ThermalState& s, double x) {
  if (s.zero_temperature)
    throw Error(ErrorKind::InvalidArgument, "approx_delta needs finite beta");
  const double t = std::exp(-std::abs(s.beta * x));
  const double d = 1.0 + t;
  return s.beta * t / (d * d);
}

double approx_delta_prime(const ThermalState& s, double x) {
  if (s.zero_temperature)
    throw Error(ErrorKind::InvalidArgument, "approx_delta_prime needs finite beta");
  // -(beta^2/4) tanh(u/2) / cosh^2(u/2), u = beta x
  const double u = s.beta * x;
  const double t = std::exp(-std::abs(u));
  const double d = 1.0 + t;
  const double sech2 = 4.0 * t / (d * d);
  return -0.25 * s.beta * s.beta * std::tanh(0.5 * u) * sech2;
}

double kernel_numerator(const ThermalState& s, double E1, double E2, double E3) {
  const double f1 = fermi(s, E1);
  const double f2 = fermi(s, E2);
  const double f3 = fermi(s, E3);
  return f1 * (f2 - f3) + f2 * (f3 - 1.0);
}

std::complex<double> sigma2_kernel(const ThermalState& s, double E1, double E2, double E3,
                                   double q0) {
  if (q0 == 0.0) throw Error(ErrorKind::ZeroFrequency, "sigma2 kernel needs q0 != 0");
  const double num = kernel_numerator(s, E1, E2, E3);
  return -num / std::complex<double>(E2 - E3 - E1, q0);
}

}  // namespace vanhove::matsubara
