#include "vanhove/special.hpp"

#include <cmath>
#include <numbers>

#include "vanhove/error.hpp"

namespace vanhove::special {

namespace {

// Li2(x) = sum_k B_k u^{k+1}/(k+1)!, u = -ln(1-x), valid for |u| < 2 pi.
// Only used for x in [-1, 1/2], i.e. |u| <= ln 2, where 12 terms suffice.
double dilog_core(double x) {
  static constexpr double kCoef[] = {
      1.0 / 36.0,                       // B2 / 3!
      -1.0 / 3600.0,                    // B4 / 5!
      1.0 / 211680.0,                   // B6 / 7!
      -1.0 / 10886400.0,                // B8 / 9!
      1.0 / 526901760.0,                // B10 / 11!
      -4.0647616451442255e-11,          // B12 / 13!
      8.9216910204564526e-13,           // B14 / 15!
      -1.9939295860721076e-14,          // B16 / 17!
      4.5189800296199182e-16,           // B18 / 19!
      -1.0356517612181247e-17,          // B20 / 21!
      2.3952186210261867e-19,           // B22 / 23!
      -5.5817858743250093e-21,          // B24 / 25!
  };
  const double u = -std::log1p(-x);
  const double u2 = u * u;
  double sum = 0.0;
  for (int k = 11; k >= 0; --k) sum = sum * u2 + kCoef[k];
  return u - 0.25 * u2 + u * u2 * sum;
}

}  // namespace

double dilog(double x) {
  constexpr double pi2_6 = std::numbers::pi * std::numbers::pi / 6.0;
  if (std::isnan(x) || x > 1.0) throw Error(ErrorKind::InvalidArgument, "dilog needs x <= 1");
  if (x == 1.0) return pi2_6;
  if (x == 0.0) return 0.0;
  if (x < -1.0) {
    const double l = std::log(-x);
    return -pi2_6 - 0.5 * l * l - dilog_core(1.0 / x);
  }
  if (x <= 0.5) return dilog_core(x);
  // reflection for (1/2, 1)
  return pi2_6 - std::log(x) * std::log1p(-x) - dilog_core(1.0 - x);
}

}  // namespace vanhove::special
