#include "vanhove/fitlab.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "vanhove/error.hpp"

namespace vanhove::fitlab {

namespace {

Eigen::MatrixXd design(const std::vector<double>& u) {
  Eigen::MatrixXd X(u.size(), 3);
  for (std::size_t i = 0; i < u.size(); ++i) X.row(i) << u[i] * u[i], u[i], 1.0;
  return X;
}

std::vector<double> logs(const std::vector<double>& xs) {
  std::vector<double> u;
  u.reserve(xs.size());
  for (double x : xs) {
    if (!(x > 0.0) || !std::isfinite(x))
      throw Error(ErrorKind::InvalidArgument, "fit abscissae must be positive and finite");
    u.push_back(std::log(x));
  }
  return u;
}

void require_rank(const std::vector<double>& u) {
  const std::set<double> distinct(u.begin(), u.end());
  if (distinct.size() <= 3)
    throw Error(ErrorKind::SingularDesign, "need more than 3 distinct ln x values");
}

// Normal-equation inverse via a rank-revealing QR of the centred design, so
// that windows like ln q0 in [-14, -5] stay well conditioned.
struct Solved {
  Eigen::Vector3d coef;
  Eigen::MatrixXd pinv;  // 3 x n
};

Solved solve(const std::vector<double>& u, const Eigen::VectorXd& y) {
  const Eigen::MatrixXd X = design(u);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < 3) throw Error(ErrorKind::SingularDesign, "design matrix is rank deficient");
  Solved s;
  s.pinv = qr.solve(Eigen::MatrixXd::Identity(X.rows(), X.rows()));
  s.coef = s.pinv * y;
  return s;
}

}  // namespace

double kappa(const std::vector<double>& xs) {
  const auto u = logs(xs);
  require_rank(u);
  return solve(u, Eigen::VectorXd::Zero(u.size())).pinv.row(0).cwiseAbs().sum();
}

LogFit fit_log_square(const std::vector<Sample>& samples, const FitOptions& options) {
  if (samples.size() < 5) throw Error(ErrorKind::InvalidArgument, "need at least 5 samples");
  // Canonical order makes the result independent of input order.
  std::vector<Sample> s = samples;
  std::sort(s.begin(), s.end(),
            [](const Sample& l, const Sample& r) { return l.x != r.x ? l.x < r.x : l.y < r.y; });
  std::vector<double> xs;
  Eigen::VectorXd y(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isfinite(s[i].y)) throw Error(ErrorKind::InvalidArgument, "fit ordinate not finite");
    xs.push_back(s[i].x);
    y[i] = s[i].y;
  }
  const auto u = logs(xs);
  require_rank(u);

  const Solved sol = solve(u, y);
  LogFit fit;
  fit.a = sol.coef[0];
  fit.b = sol.coef[1];
  fit.c = sol.coef[2];
  fit.samples = static_cast<int>(s.size());
  fit.window_min = xs.front();
  fit.window_max = xs.back();
  fit.kappa = sol.pinv.row(0).cwiseAbs().sum();

  const Eigen::VectorXd r = y - design(u) * sol.coef;
  fit.rss = r.squaredNorm();
  const double sigma2 = fit.rss / static_cast<double>(s.size() - 3);
  // cov = sigma^2 (X^T X)^{-1} = sigma^2 P P^T
  const Eigen::Matrix3d cov = sigma2 * sol.pinv * sol.pinv.transpose();
  fit.stderr_a = std::sqrt(std::max(cov(0, 0), 0.0));
  fit.stderr_b = std::sqrt(std::max(cov(1, 1), 0.0));
  fit.stderr_c = std::sqrt(std::max(cov(2, 2), 0.0));

  const double umid = 0.5 * (u.front() + u.back());
  std::vector<double> uh;
  std::vector<double> yh;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const bool keep = options.stability_half == Half::upper ? u[i] >= umid : u[i] <= umid;
    if (keep) {
      uh.push_back(u[i]);
      yh.push_back(y[i]);
    }
  }
  const std::set<double> distinct(uh.begin(), uh.end());
  if (distinct.size() >= 4) {
    const Solved half = solve(uh, Eigen::Map<Eigen::VectorXd>(yh.data(), yh.size()));
    fit.shift_a = std::abs(half.coef[0] - fit.a);
    fit.shift_b = std::abs(half.coef[1] - fit.b);
    fit.shift_c = std::abs(half.coef[2] - fit.c);
  } else {
    fit.shift_a = fit.shift_b = fit.shift_c = std::numeric_limits<double>::quiet_NaN();
  }
  fit.stability_shift = fit.shift_a;
  return fit;
}

}  // namespace vanhove::fitlab
