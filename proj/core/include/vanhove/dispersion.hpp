#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace vanhove::dispersion {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

enum class ModelKind { hubbard, xy, custom };
enum class Domain { torus, square };  // [-pi,pi)^2 periodic, or [-1,1]^2

/// User-supplied band function. Singular points are located from `seeds`.
struct CustomBand {
  std::string name;
  std::function<double(const Vec2&)> value;
  std::function<Vec2(const Vec2&)> gradient;
  std::function<Mat2(const Vec2&)> hessian;
  std::vector<Vec2> seeds;
  Domain domain = Domain::torus;
};

/// Immutable band function with analytic first and second derivatives.
class DispersionModel {
 public:
  /// -cos k1 - cos k2 + theta (1 + cos k1 cos k2) - mu, 0 < theta < 1.
  static DispersionModel hubbard(double theta, double mu);
  /// e(x, y) = x y on [-1,1]^2.
  static DispersionModel xy();
  static DispersionModel custom(CustomBand band);

  ModelKind kind() const { return kind_; }
  Domain domain() const;
  double theta() const { return theta_; }
  double mu() const { return mu_; }
  std::string name() const;

  double evaluate(const Vec2& k) const;
  Vec2 gradient(const Vec2& k) const;
  Mat2 hessian(const Vec2& k) const;

  /// Newton seeds for saddle search.
  std::vector<Vec2> seeds() const;

  /// Minimum-image difference a - b (torus) or plain difference (square).
  Vec2 displacement(const Vec2& a, const Vec2& b) const;
  bool contains(const Vec2& k) const;

 private:
  ModelKind kind_ = ModelKind::xy;
  double theta_ = 0.0;
  double mu_ = 0.0;
  std::shared_ptr<const CustomBand> custom_;
};

struct SingularPoint {
  Vec2 location;
  Eigen::Vector2d hessian_eigenvalues;  // ascending
  Mat2 hessian_rotation;                // columns are eigenvectors
};

struct SingularSearch {
  double gradient_tolerance = 1e-10;
  double hessian_tolerance = 1e-8;
};

/// Van Hove points on the Fermi curve: Newton on grad e from the model
/// seeds, kept when |e| and |grad e| are below gradient_tolerance and the
/// Hessian is indefinite. DegenerateHessian if an eigenvalue is below
/// hessian_tolerance in magnitude.
std::vector<SingularPoint> find_singular_points(const DispersionModel& model,
                                                const SingularSearch& opts = {});

/// e(p + A k) = a(k) (k1 - k2^nu1 b(k)) (k2 - k1^nu2 c(k)) on |k| < radius.
/// b depends on k2 only and c on k1 only; a is a tensor Chebyshev surrogate.
/// nu = 0 marks an exactly straight branch (b or c identically zero).
struct NormalForm {
  Vec2 center;
  Mat2 A;
  int nu1 = 0;
  int nu2 = 0;
  double radius = 0.0;
  int grid = 41;

  std::vector<double> b_coeffs;  // b(k) = sum_m b_coeffs[m] k2^m
  std::vector<double> c_coeffs;  // c(k) = sum_m c_coeffs[m] k1^m
  Eigen::MatrixXd a_cheb;        // a(k) = sum T_i(k1/r) T_j(k2/r) a_cheb(i,j)

  double residual = 0.0;  // max over the grid points inside the disc
  double a_min = 0.0, a_max = 0.0;
  double b_min = 0.0, b_max = 0.0;  // of |b|
  double c_min = 0.0, c_max = 0.0;
  int attempts = 0;  // radius halvings used + 1

  double a(const Vec2& k) const;
  double b(const Vec2& k) const;
  double c(const Vec2& k) const;
  /// a(k) (k1 - k2^nu1 b) (k2 - k1^nu2 c)
  double product(const Vec2& k) const;
};

struct NormalFormOptions {
  double radius = 0.1;
  int grid = 41;
  double factorization_tolerance = 1e-6;
  double nu_threshold = 1e-4;
  int max_halvings = 6;
};

/// FactorizationFailed if the residual stays above tolerance after all
/// halvings; FlatBranch if a branch of a non-product model is straight to
/// the fit precision.
NormalForm morse_normal_form(const DispersionModel& model, const SingularPoint& p,
                             const NormalFormOptions& opts = {});

}  // namespace vanhove::dispersion
