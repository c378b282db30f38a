#pragma once

namespace vanhove::special {

/// Real dilogarithm Li2(x) = -\int_0^x ln(1-t)/t dt for x <= 1.
double dilog(double x);

/// Euler-Mascheroni constant.
inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

}  // namespace vanhove::special
