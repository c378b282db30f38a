#pragma once

#include <complex>
#include <cstdint>

#include "vanhove/dispersion.hpp"
#include "vanhove/matsubara.hpp"
#include "vanhove/quad.hpp"

// Second-order self-energy of the xy model near its Van Hove point.
// Momenta are integrated over [-1,1]^4 with unit measure; E2 = x y,
// E3 = x' y', E1 = (xi + x - x')(eta + y - y'). Values follow
//   Sigma2(q0, q) = \int sigma2_kernel(E1, E2, E3, q0),
// i.e. the global minus sign is part of the kernel.

namespace vanhove::selfenergy {

using matsubara::ThermalState;
using quad::ComplexQuadResult;
using quad::QuadResult;
using quad::QuadSpec;
using Vec2 = dispersion::Vec2;

enum class DerivativeKind { none, d_omega, grad, d_xi_xi, d_xi_eta, d_eta_eta };

struct SelfEnergyPoint {
  double q0 = 0.0;
  Vec2 q = Vec2::Zero();
  ThermalState state;
  std::complex<double> value;
  double error = 0.0;
  DerivativeKind derivative_kind = DerivativeKind::none;
};

/// 4D adaptive quadrature of the kernel over [-1,1]^4.
ComplexQuadResult sigma2(double q0, const Vec2& q, const ThermalState& state,
                         const QuadSpec& spec);

/// Kernel sum on an n^4 midpoint grid of [-1,1]^4 (times the cell volume).
std::complex<double> sigma2_midpoint(double q0, const Vec2& q, const ThermalState& state,
                                     int n);

/// Truncated double Matsubara sum of the three-propagator expression
///   -(1/beta^2) sum_{w,w'} G(w, E1) G(w', E2) G(q0 - w + w', E3),
/// G(w, E) = 1/(i w - E), on an n^4 midpoint momentum grid. q0 must be a
/// fermionic Matsubara frequency; frequencies satisfy |w| < cutoff.
struct FrequencySumOracle {
  std::complex<double> value;       // cutoff Omega, n^4 grid
  std::complex<double> half_cutoff; // cutoff Omega/2, same grid
  double truncation_error = 0.0;    // |value - half_cutoff|
  double grid_error = 0.0;          // |midpoint(n) - midpoint(n/2)| of the summed kernel
  double budget() const { return truncation_error + grid_error; }
};
FrequencySumOracle frequency_sum_oracle(double beta, int matsubara_index, double cutoff,
                                        int grid);

// ------------------------------------------------------------ d/dq0 at q = 0

enum class IForm { dilog_1d, log_2d, direct_4d };

/// I(q0) = 4 \int dy dy' dx' \int_0^{x'} dx Phi(eps1), Phi(e) = Re 1/(i q0 + e)^2,
/// in one of three algebraically equivalent forms.
QuadResult frequency_integral(double q0, IForm form, const QuadSpec& spec);

/// Im d/dq0 Sigma2(q0, 0) at zero temperature, = -2 I(|q0|).
QuadResult im_d0_sigma2(double q0, const QuadSpec& spec);

/// Same quantity from the raw [-1,1]^4 integrand (zero-temperature
/// numerator times Phi) by plain Monte Carlo.
QuadResult im_d0_sigma2_direct(double q0, long samples, std::uint64_t seed);

/// 2 ln2 L^2 + C1 L, L = |ln q0|, with
/// C1 = 2 ln^2 2 - 4 \int_0^1 ln((1+2x)/(1+x)) dx/x.
double c1_constant(const QuadSpec& spec = {});

// --------------------------------------------------------- gradient at q = 0

struct Gradient {
  ComplexQuadResult d_xi;
  ComplexQuadResult d_eta;
};

/// Finite beta only (InvalidArgument at zero temperature).
Gradient grad_sigma2_at_vh(double q0, const ThermalState& state, const QuadSpec& spec);

/// Same gradient by plain Monte Carlo. The adaptive rule is symmetric under
/// the total reflection, so it cancels the odd integrand cell by cell; the
/// random sample set is not, which makes this a non-trivial check.
Gradient grad_sigma2_mc(double q0, const ThermalState& state, long samples, std::uint64_t seed);

/// Pointwise integrands of d/dxi and d/deta at q = 0, point (x, y, x', y').
std::complex<double> grad_integrand(double q0, const ThermalState& s, int component,
                                    const std::array<double, 4>& X);

// --------------------------------------------------- mixed second derivative

struct MixedSecond {
  QuadResult zeta11;  // Re <Phi> over the restricted region
  QuadResult zeta12;  // 2 Re <F / z^3> over the restricted region
  double real() const { return zeta11.value + zeta12.value; }  // Re d2 Sigma2/dxi deta
  double error() const { return zeta11.error_estimate + zeta12.error_estimate; }
  bool converged() const { return zeta11.converged && zeta12.converged; }
};

/// Zero temperature: Re d^2 Sigma2 / dxi deta (q0, 0) = zeta11 + zeta12.
MixedSecond d2_sigma2_xi_eta(double q0, const QuadSpec& spec);

enum class Zeta12Form { reduced_1d, reduced_3d, orthant_4d };
QuadResult zeta12(double q0, Zeta12Form form, const QuadSpec& spec);

/// Re <(1 + 2F/z)/z^2> over the restricted region (the whole zero-T
/// mixed derivative) from one 4D quadrature of the folded integrand.
QuadResult d2_xi_eta_folded(double q0, const QuadSpec& spec);

/// Re d^2 Sigma2 / dxi deta from the raw [-1,1]^4 zero-temperature
/// integrand by plain Monte Carlo.
QuadResult d2_xi_eta_direct(double q0, long samples, std::uint64_t seed);

/// Pointwise mixed-derivative integrand at finite beta (all three pieces).
std::complex<double> d2_xi_eta_integrand(double q0, const ThermalState& s,
                                         const std::array<double, 4>& X);

// ------------------------------------------------------ finite-beta pieces

/// Terms of the second derivatives that carry delta_beta(E1) or its
/// derivative, at q = 0 and finite beta:
///   zeta2 = < (-E1 d'(E1) - d(E1)) (f2 - f3) / z >
///   zeta3 = < 2 (-E1) d(E1) (f2 - f3) / z^2 >
///   xi_delta       = < 2 d(E1) (f2 - f3) (y - y')^2 / z^2 >
///   xi_delta_prime = < d'(E1) (f2 - f3) (y - y')^2 / z >
///   xi_numerator   = < -2 N (y - y')^2 / z^3 >
/// with d = delta_beta, z = i q0 + E2 - E3 - E1. d^2/dxi deta Sigma2 =
/// -(zeta1 + zeta2 + zeta3); d^2/dxi^2 Sigma2 = xi_delta + xi_delta_prime + xi_numerator.
enum class FiniteBetaTerm { zeta2, zeta3, xi_delta, xi_delta_prime, xi_numerator };

/// Nested quadrature: 3D adaptive over (x, y, y'), 1D adaptive over x' with
/// breakpoints at x' = x and x' = 0.
ComplexQuadResult finite_beta_term(FiniteBetaTerm term, double q0, const ThermalState& state,
                                   const QuadSpec& spec);

// ---------------------------------------------------- pure second derivative

struct PureSecond {
  double B0 = 0.0;         // closed form
  QuadResult re_I2;        // Re I2 at zero temperature (1D form)
  bool with_imaginary = false;
  ComplexQuadResult I2_3d;        // full zero-T I2 from its 3D form
  ComplexQuadResult delta_term;   // zero-T limit of xi_delta (purely imaginary)
  ComplexQuadResult numerator_term;  // zero-T xi_numerator (purely imaginary)
  double real() const { return B0 + re_I2.value; }
  double imag() const;
  double error() const { return re_I2.error_estimate; }
  bool converged() const;
};

/// Zero temperature: Re d^2 Sigma2 / dxi^2 (q0, 0) = B0 + Re I2.
/// The imaginary part needs three extra 3D/4D integrals.
PureSecond d2_sigma2_xi_xi(double q0, const QuadSpec& spec, bool with_imaginary = false);

/// B0 = 2 \int_0^2 ln(1 + t^2/q0^2) dt in closed form.
double b0_closed(double q0);
/// B0 from its 2D parent 4 \int dy \int_{-1}^{y} dy' (y-y')/(q0^2+(y-y')^2).
QuadResult b0_parent(double q0, const QuadSpec& spec);
/// Re I2 from the 3D form (real part of the full bracket).
QuadResult re_i2_parent(double q0, const QuadSpec& spec);

}  // namespace vanhove::selfenergy
