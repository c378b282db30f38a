#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace vanhove::quad {

/// Axis-aligned box in 1 to 4 dimensions.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  static Box unit(int dim);       // [0,1]^dim
  static Box symmetric(int dim);  // [-1,1]^dim
  static Box interval(double a, double b);

  int dim() const { return static_cast<int>(lower.size()); }
  double volume() const;
};

enum class Refinement { uniform, singularity_guided };

using Manifold = std::function<double(std::span<const double>)>;

struct QuadSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  long max_evaluations = 2'000'000;
  Refinement refinement = Refinement::uniform;
  // Singularity-guided mode: cells are prioritised by
  // err * (1 + q0 / (q0 + min_cell |manifold|)).
  double q0 = 0.0;
  Manifold manifold;
  // Initial partition: `initial_splits` equal pieces per axis. In 1D,
  // `breakpoints` (strictly inside the interval) take precedence.
  int initial_splits = 1;
  std::vector<double> breakpoints;

  static QuadSpec guided(double q0, Manifold manifold, double abs_tol, double rel_tol,
                         long max_evaluations);
  void validate() const;
};

template <class T>
struct Result {
  T value{};
  double error_estimate = 0.0;
  long evaluations = 0;
  bool converged = false;
};

using QuadResult = Result<double>;
using ComplexQuadResult = Result<std::complex<double>>;

using RealIntegrand = std::function<double(std::span<const double>)>;
using ComplexIntegrand = std::function<std::complex<double>(std::span<const double>)>;

/// Global-adaptive cubature. 1D cells use the 7/15 Gauss-Kronrod pair; 2-4D
/// cells use the degree-7/degree-5 Genz-Malik pair, split along the axis with
/// the largest fourth divided difference. The error estimate of a cell is the
/// difference between the two embedded rules. The returned value is summed
/// over cells in creation order, so it does not depend on heap internals.
QuadResult integrate(const RealIntegrand& f, const Box& box, const QuadSpec& spec);
ComplexQuadResult integrate_complex(const ComplexIntegrand& f, const Box& box,
                                    const QuadSpec& spec);

/// Plain Monte Carlo with a standard-error estimate; deterministic for a seed.
QuadResult integrate_mc(const RealIntegrand& f, const Box& box, long samples,
                        std::uint64_t seed);
ComplexQuadResult integrate_mc_complex(const ComplexIntegrand& f, const Box& box,
                                       long samples, std::uint64_t seed);

/// Polynomial degree integrated exactly by the higher rule of the pair used in
/// `dim` dimensions.
int rule_degree(int dim);

/// Evaluation count of one cell rule in `dim` dimensions.
int rule_points(int dim);

struct FixedRule {
  double value;
  double error;
};

/// One application of the 15-point Kronrod rule on [a,b]; the error is
/// |K15 - G7|.
FixedRule gauss_kronrod15(const std::function<double(double)>& f, double a, double b);

}  // namespace vanhove::quad
