#pragma once

#include <vector>

namespace vanhove::fitlab {

struct Sample {
  double x = 0.0;
  double y = 0.0;
};

enum class Half { upper, lower };

/// y ~ a (ln x)^2 + b ln x + c by unweighted least squares in u = ln x.
struct LogFit {
  double a = 0.0, b = 0.0, c = 0.0;
  double stderr_a = 0.0, stderr_b = 0.0, stderr_c = 0.0;
  double window_min = 0.0, window_max = 0.0;  // range of x
  // Coefficient change when refitting on one half of the window (in u);
  // NaN when that half holds fewer than 4 samples.
  double shift_a = 0.0, shift_b = 0.0, shift_c = 0.0;
  double stability_shift = 0.0;  // = shift_a
  // |a_fit - a_true| <= R * kappa when the data deviate from the model by at
  // most R pointwise (l1 norm of the a-row of the pseudo-inverse).
  double kappa = 0.0;
  double rss = 0.0;
  int samples = 0;
};

struct FitOptions {
  Half stability_half = Half::upper;
};

/// InvalidArgument for fewer than 5 samples or x <= 0; SingularDesign when
/// at most 3 distinct ln x values remain.
LogFit fit_log_square(const std::vector<Sample>& samples, const FitOptions& options = {});

/// kappa of the design on the given x values.
double kappa(const std::vector<double>& xs);

}  // namespace vanhove::fitlab
