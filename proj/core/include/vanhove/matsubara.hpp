#pragma once

#include <complex>

namespace vanhove::matsubara {

/// Inverse temperature, or the zero-temperature limit as a separate flag.
struct ThermalState {
  double beta = 1.0;
  bool zero_temperature = false;

  static ThermalState at_beta(double beta);  // throws InvalidArgument unless beta > 0
  static ThermalState zero();
  void validate() const;
};

/// (1 + e^{beta E})^{-1}; Theta_{1/2}(-E) at zero temperature.
double fermi(const ThermalState& s, double E);

/// (e^{beta E} - 1)^{-1}; -Theta(-E) at zero temperature. BosePole when
/// |beta E| < 1e-12 (or E == 0 at zero temperature).
double bose(const ThermalState& s, double E);

/// beta / (4 cosh^2(beta x / 2)). Finite beta only.
double approx_delta(const ThermalState& s, double x);

/// d/dx of approx_delta.
double approx_delta_prime(const ThermalState& s, double x);

/// (f(E1) + b(E2 - E3)) (f(E2) - f(E3)), always evaluated through
/// f(E1)(f(E2) - f(E3)) + f(E2)(f(E3) - 1) so the Bose pole never appears.
/// The result lies in [-2, 1].
double kernel_numerator(const ThermalState& s, double E1, double E2, double E3);

/// -numerator / (i q0 + E2 - E3 - E1). ZeroFrequency if q0 == 0.
std::complex<double> sigma2_kernel(const ThermalState& s, double E1, double E2, double E3,
                                   double q0);

}  // namespace vanhove::matsubara
