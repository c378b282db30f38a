#pragma once

#include "vanhove/quad.hpp"

// One-loop bubbles of the xy model at q0 = 0, q -> 0 (q0 set to zero first).
//   B_ph(beta) = \int_{[-1,1]^2} (-delta_beta)(x y)
//              = -\int_0^beta du sech^2(u/2) ln(beta/u)
//   B_pp(beta) = \int_0^{beta/2} ln^2(2v/beta) sech^2(v) dv
// with predictions -2 ln beta + 2K and ln^2 beta - 2K ln beta + K'.

namespace vanhove::bubbles {

enum class BubbleKind { ph, pp };

struct BubbleResult {
  BubbleKind kind = BubbleKind::ph;
  double beta = 0.0;
  double value = 0.0;
  double asymptotic_prediction = 0.0;
  double residual = 0.0;     // value - asymptotic_prediction
  double tail_residual = 0.0;  // same quantity from the exact tail integral
  double error = 0.0;        // quadrature error estimate of value
};

/// A constant from a semi-infinite quadrature truncated at u = 200 (in the
/// u = 2v variable); `error` includes the truncation bound.
struct Constant {
  double value = 0.0;
  double error = 0.0;
};

/// K = \int_0^inf ln(u) / (2 cosh^2(u/2)) du.
Constant k_constant_ph();
/// K = \int_0^inf ln(2v) / cosh^2(v) dv (same number, other definition).
Constant k_constant_pp();
/// K' = \int_0^inf ln^2(2v) / cosh^2(v) dv.
Constant k_prime_constant();

/// ln(pi/2) - euler_gamma.
double k_closed();

double bubble_ph(double beta);
double bubble_pp(double beta);

BubbleResult bubble_ph_result(double beta);
BubbleResult bubble_pp_result(double beta);

double ph_prediction(double beta);
double pp_prediction(double beta);

/// Exponentially small remainders value - prediction, from their tail
/// integrals (so they stay resolvable far below double rounding of value).
double ph_tail_residual(double beta);
double pp_tail_residual(double beta);

/// Consistency oracle: 2D adaptive quadrature of (-delta_beta)(x y) on [-1,1]^2.
quad::QuadResult bubble_ph_2d(double beta, const quad::QuadSpec& spec);

}  // namespace vanhove::bubbles
