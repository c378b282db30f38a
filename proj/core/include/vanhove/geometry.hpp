#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "vanhove/dispersion.hpp"

namespace vanhove::geometry {

using dispersion::DispersionModel;
using dispersion::Vec2;

/// Polyline on {e = 0}. Points are stored unwrapped (a curve crossing the
/// edge of the torus keeps going), so consecutive points are always close.
struct CurveSample {
  std::vector<Vec2> points;
  std::vector<double> cumulative_arclength;  // starts at 0
  int branch_id = 0;
  bool closed = false;  // last point repeats the first (up to a lattice shift)
  double step = 0.0;    // target spacing used for the trace

  double length() const {
    return cumulative_arclength.empty() ? 0.0 : cumulative_arclength.back();
  }
};

struct TraceOptions {
  double step = 0.01;
  double exclusion_radius = 0.0;
  double tolerance = 1e-12;  // |e| at every stored point
  int max_newton = 20;
  int scan_resolution = 256;  // grid used to seed components without saddles
};

/// Traces every branch of the Fermi curve. Branches start at Van Hove
/// points (along the four arms of the saddle) and end at a saddle, at an
/// exclusion disc or at the domain boundary; components without saddles are
/// found by a sign-change scan and traced as closed loops. TraceStalled if
/// the Newton projection fails.
std::vector<CurveSample> trace_fermi_curve(const DispersionModel& model,
                                           const TraceOptions& opts);
std::vector<CurveSample> trace_fermi_curve(const DispersionModel& model, double step,
                                           double exclusion_radius);

double total_length(const std::vector<CurveSample>& curves);

/// Arc length of {k on curve : |e(p + sign k)| <= threshold}, with linear
/// interpolation of |e| - threshold inside partially flagged segments.
double overlap_length(const DispersionModel& model, const CurveSample& curve, const Vec2& p,
                      int sign, double threshold);

/// Same measurement for several thresholds at once over several curves
/// (the dispersion is evaluated once per point).
std::vector<double> overlap_lengths(const DispersionModel& model,
                                    const std::vector<CurveSample>& curves, const Vec2& p,
                                    int sign, const std::vector<double>& thresholds);

struct OverlapRow {
  Vec2 p;
  int sign;
  int j;
  double length;
  double bound;
  bool violated;
};

struct OverlapScalingReport {
  std::vector<Vec2> p_samples;
  std::vector<int> j_values;
  double M = 2.0;
  double delta = 0.1;
  int n0 = 4;
  // measured_lengths[s][i][jj]: sign index s (0: +, 1: -), sample i, j index jj
  std::vector<std::vector<std::vector<double>>> measured_lengths;
  std::vector<OverlapRow> rows;
  // fraction of p whose length exceeds the bound for at least one j, per sign
  double violation_fraction[2] = {0.0, 0.0};
  bool has_fit = false;
  double fitted_exponent = 0.0;  // pooled within-sample slope of log l vs j log M
  double fitted_exponent_stderr = 0.0;
  int fit_samples = 0;
  bool monotone = true;  // lengths nonincreasing as j decreases
  double bound(int j) const;
};

struct OverlapExperiment {
  double M = 2.0;
  std::vector<int> j_values;
  int num_p = 500;
  double delta = 0.1;
  std::uint64_t seed = 42;
  int n0 = 4;
};

/// InsufficientResolution if the curve step exceeds M^{min j}.
OverlapScalingReport overlap_scaling_experiment(const DispersionModel& model,
                                                const std::vector<CurveSample>& curves,
                                                const OverlapExperiment& cfg);

struct IntervalCheck {
  double measured_volume = 0.0;
  double bound = 0.0;
  bool holds = false;
  double min_derivative = 0.0;  // min |f^(k)| seen on the check grid
};

/// Vol{x in [a,b] : |f(x)| <= eps} on a midpoint grid, against
/// 2^{k+1} (eps/eta)^{1/k}. HypothesisViolated if |f^(k)| < eta somewhere
/// on the derivative check grid (finite differences, with an allowance for
/// stencil rounding).
IntervalCheck interval_lemma_check(const std::function<double(double)>& f, int k, double eta,
                                   double eps, long grid, double a = -1.0, double b = 1.0);

}  // namespace vanhove::geometry
