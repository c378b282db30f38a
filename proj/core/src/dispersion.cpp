#include "vanhove/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vanhove/error.hpp"

namespace vanhove::dispersion {

namespace {
constexpr double kPi = std::numbers::pi;

double wrap(double d) {
  // into [-pi, pi)
  d = std::fmod(d + kPi, 2.0 * kPi);
  if (d < 0.0) d += 2.0 * kPi;
  return d - kPi;
}
}  // namespace

DispersionModel DispersionModel::hubbard(double theta, double mu) {
  if (!(theta > 0.0 && theta < 1.0))
    throw Error(ErrorKind::InvalidArgument, "Hubbard model needs 0 < theta < 1");
  if (!std::isfinite(mu)) throw Error(ErrorKind::InvalidArgument, "mu must be finite");
  DispersionModel m;
  m.kind_ = ModelKind::hubbard;
  m.theta_ = theta;
  m.mu_ = mu;
  return m;
}

DispersionModel DispersionModel::xy() {
  DispersionModel m;
  m.kind_ = ModelKind::xy;
  return m;
}

DispersionModel DispersionModel::custom(CustomBand band) {
  if (!band.value || !band.gradient || !band.hessian)
    throw Error(ErrorKind::InvalidArgument, "custom band needs value, gradient and hessian");
  DispersionModel m;
  m.kind_ = ModelKind::custom;
  m.custom_ = std::make_shared<const CustomBand>(std::move(band));
  return m;
}

Domain DispersionModel::domain() const {
  switch (kind_) {
    case ModelKind::hubbard: return Domain::torus;
    case ModelKind::xy: return Domain::square;
    case ModelKind::custom: return custom_->domain;
  }
  return Domain::torus;
}

std::string DispersionModel::name() const {
  switch (kind_) {
    case ModelKind::hubbard: return "hubbard";
    case ModelKind::xy: return "xy";
    case ModelKind::custom: return custom_->name.empty() ? "custom" : custom_->name;
  }
  return "unknown";
}

double DispersionModel::evaluate(const Vec2& k) const {
  switch (kind_) {
    case ModelKind::hubbard: {
      const double c1 = std::cos(k[0]), c2 = std::cos(k[1]);
      return -c1 - c2 + theta_ * (1.0 + c1 * c2) - mu_;
    }
    case ModelKind::xy: return k[0] * k[1];
    case ModelKind::custom: return custom_->value(k);
  }
  return 0.0;
}

Vec2 DispersionModel::gradient(const Vec2& k) const {
  switch (kind_) {
    case ModelKind::hubbard: {
      const double c1 = std::cos(k[0]), c2 = std::cos(k[1]);
      const double s1 = std::sin(k[0]), s2 = std::sin(k[1]);
      return Vec2(s1 * (1.0 - theta_ * c2), s2 * (1.0 - theta_ * c1));
    }
    case ModelKind::xy: return Vec2(k[1], k[0]);
    case ModelKind::custom: return custom_->gradient(k);
  }
  return Vec2::Zero();
}

Mat2 DispersionModel::hessian(const Vec2& k) const {
  Mat2 h;
  switch (kind_) {
    case ModelKind::hubbard: {
      const double c1 = std::cos(k[0]), c2 = std::cos(k[1]);
      const double s1 = std::sin(k[0]), s2 = std::sin(k[1]);
      const double off = theta_ * s1 * s2;
      h << c1 * (1.0 - theta_ * c2), off, off, c2 * (1.0 - theta_ * c1);
      return h;
    }
    case ModelKind::xy:
      h << 0.0, 1.0, 1.0, 0.0;
      return h;
    case ModelKind::custom: return custom_->hessian(k);
  }
  return Mat2::Zero();
}

std::vector<Vec2> DispersionModel::seeds() const {
  switch (kind_) {
    case ModelKind::hubbard:
      return {Vec2(0.0, 0.0), Vec2(kPi, kPi), Vec2(kPi, 0.0), Vec2(0.0, kPi)};
    case ModelKind::xy: return {Vec2(0.0, 0.0)};
    case ModelKind::custom: return custom_->seeds;
  }
  return {};
}

Vec2 DispersionModel::displacement(const Vec2& a, const Vec2& b) const {
  Vec2 d = a - b;
  if (domain() == Domain::torus) d = Vec2(wrap(d[0]), wrap(d[1]));
  return d;
}

bool DispersionModel::contains(const Vec2& k) const {
  if (domain() == Domain::torus) return std::isfinite(k[0]) && std::isfinite(k[1]);
  return std::abs(k[0]) <= 1.0 && std::abs(k[1]) <= 1.0;
}

std::vector<SingularPoint> find_singular_points(const DispersionModel& model,
                                                const SingularSearch& opts) {
  if (!(opts.gradient_tolerance > 0.0) || !(opts.hessian_tolerance > 0.0))
    throw Error(ErrorKind::InvalidArgument, "tolerances must be positive");
  std::vector<SingularPoint> out;
  for (Vec2 k : model.seeds()) {
    for (int it = 0; it < 60; ++it) {
      const Vec2 g = model.gradient(k);
      if (g.norm() < 1e-3 * opts.gradient_tolerance) break;
      const Mat2 h = model.hessian(k);
      if (std::abs(h.determinant()) < 1e-300) break;
      const Vec2 step = h.partialPivLu().solve(g);
      k -= step;
      if (step.norm() < 1e-16 * (1.0 + k.norm())) break;
    }
    if (!(model.gradient(k).norm() < opts.gradient_tolerance)) continue;
    if (!(std::abs(model.evaluate(k)) < opts.gradient_tolerance)) continue;

    Eigen::SelfAdjointEigenSolver<Mat2> es(model.hessian(k));
    const Eigen::Vector2d ev = es.eigenvalues();
    if (std::min(std::abs(ev[0]), std::abs(ev[1])) < opts.hessian_tolerance)
      throw Error(ErrorKind::DegenerateHessian,
                  "Hessian eigenvalue below tolerance at a critical point on the Fermi curve");
    if (ev[0] * ev[1] > 0.0) continue;  // extremum, not a saddle

    bool duplicate = false;
    for (const auto& sp : out)
      if (model.displacement(sp.location, k).norm() < 1e-8) duplicate = true;
    if (duplicate) continue;
    out.push_back({k, ev, es.eigenvectors()});
  }
  return out;
}

// ---------------------------------------------------------------- normal form

namespace {

double horner(const std::vector<double>& c, double t) {
  double s = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * t + *it;
  return s;
}

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

void chebyshev_row(double t, int n, double* out) {
  out[0] = 1.0;
  if (n > 1) out[1] = t;
  for (int i = 2; i < n; ++i) out[i] = 2.0 * t * out[i - 1] - out[i - 2];
}

constexpr int kBranchDegree = 12;
constexpr int kBranchNodes = 61;
constexpr int kChebDegree = 12;  // per axis, a is fitted with kChebDegree terms
constexpr int kChebNodes = 36;

struct Branch {
  std::vector<double> taylor;  // phi(s) = sum taylor[m] s^m
  int nu = 0;                  // 0 when straight
};

// Solves g(along * s_other + ...) = 0: the branch tangent to `tangent`,
// parametrised by the coordinate along it; `across` is the other column of A.
Branch fit_branch(const DispersionModel& model, const Vec2& p, const Vec2& across,
                  const Vec2& tangent, double radius, double threshold) {
  Eigen::MatrixXd V(kBranchNodes, kBranchDegree + 1);
  Eigen::VectorXd rhs(kBranchNodes);
  for (int i = 0; i < kBranchNodes; ++i) {
    const double t = std::cos(kPi * (i + 0.5) / kBranchNodes);
    const double s = radius * t;
    double u = 0.0;  // coordinate across the branch
    for (int it = 0; it < 60; ++it) {
      const Vec2 k = p + across * u + tangent * s;
      const double g = model.evaluate(k);
      const double dg = model.gradient(k).dot(across);
      if (dg == 0.0) break;
      const double du = g / dg;
      u -= du;
      if (std::abs(du) < 1e-17 + 1e-15 * std::abs(u)) break;
    }
    if (!std::isfinite(u) || std::abs(u) > radius)
      throw Error(ErrorKind::FactorizationFailed, "branch solve left the disc");
    double pw = 1.0;
    for (int m = 0; m <= kBranchDegree; ++m, pw *= t) V(i, m) = pw;
    rhs[i] = u;
  }
  const Eigen::VectorXd coef = V.colPivHouseholderQr().solve(rhs);
  Branch b;
  b.taylor.resize(kBranchDegree + 1);
  for (int m = 0; m <= kBranchDegree; ++m) b.taylor[m] = coef[m] / ipow(radius, m);
  for (int m = 2; m <= kBranchDegree - 2; ++m) {
    if (std::abs(b.taylor[m]) > threshold) {
      b.nu = m;
      break;
    }
  }
  return b;
}

std::vector<double> reduced(const Branch& br) {
  if (br.nu == 0) return {0.0};
  return std::vector<double>(br.taylor.begin() + br.nu, br.taylor.end());
}

}  // namespace

double NormalForm::b(const Vec2& k) const { return horner(b_coeffs, k[1]); }
double NormalForm::c(const Vec2& k) const { return horner(c_coeffs, k[0]); }

double NormalForm::a(const Vec2& k) const {
  const int n = static_cast<int>(a_cheb.rows());
  double tx[kChebDegree], ty[kChebDegree];
  chebyshev_row(std::clamp(k[0] / radius, -1.0, 1.0), n, tx);
  chebyshev_row(std::clamp(k[1] / radius, -1.0, 1.0), n, ty);
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += a_cheb(i, j) * tx[i] * ty[j];
  return s;
}

double NormalForm::product(const Vec2& k) const {
  const double f1 = k[0] - (nu1 ? ipow(k[1], nu1) * b(k) : 0.0);
  const double f2 = k[1] - (nu2 ? ipow(k[0], nu2) * c(k) : 0.0);
  return a(k) * f1 * f2;
}

namespace {

NormalForm attempt(const DispersionModel& model, const SingularPoint& sp, double radius,
                   const NormalFormOptions& opts) {
  const Vec2 p = sp.location;
  const double l1 = sp.hessian_eigenvalues[0], l2 = sp.hessian_eigenvalues[1];
  const Vec2 v1 = sp.hessian_rotation.col(0), v2 = sp.hessian_rotation.col(1);
  Vec2 w[2] = {(std::sqrt(l2) * v1 + std::sqrt(-l1) * v2).normalized(),
               (std::sqrt(l2) * v1 - std::sqrt(-l1) * v2).normalized()};
  // Orient each direction so its dominant component is positive, and put the
  // direction closer to the first axis into the first column.
  for (auto& d : w) {
    const int i = std::abs(d[0]) >= std::abs(d[1]) ? 0 : 1;
    if (d[i] < 0.0) d = -d;
  }
  if (std::abs(w[1][0]) > std::abs(w[0][0])) std::swap(w[0], w[1]);

  NormalForm nf;
  nf.center = p;
  nf.A.col(0) = w[0];
  nf.A.col(1) = w[1];
  nf.radius = radius;
  nf.grid = opts.grid;
  if (std::abs(nf.A.determinant()) < 1e-8)
    throw Error(ErrorKind::DegenerateHessian, "branch directions are parallel");

  // branch 1: k1 = phi1(k2), tangent to A e2; branch 2: k2 = phi2(k1).
  const Branch br1 = fit_branch(model, p, nf.A.col(0), nf.A.col(1), radius, opts.nu_threshold);
  const Branch br2 = fit_branch(model, p, nf.A.col(1), nf.A.col(0), radius, opts.nu_threshold);
  const bool product_model = model.kind() == ModelKind::xy;
  if (!product_model && (br1.nu == 0 || br2.nu == 0))
    throw Error(ErrorKind::FlatBranch, "a branch through the saddle is straight to fit precision");
  nf.nu1 = br1.nu;
  nf.nu2 = br2.nu;
  nf.b_coeffs = reduced(br1);
  nf.c_coeffs = reduced(br2);

  auto g = [&](const Vec2& k) { return model.evaluate(p + nf.A * k); };
  auto factor = [&](const Vec2& k) {
    const double f1 = k[0] - (nf.nu1 ? ipow(k[1], nf.nu1) * nf.b(k) : 0.0);
    const double f2 = k[1] - (nf.nu2 ? ipow(k[0], nf.nu2) * nf.c(k) : 0.0);
    return f1 * f2;
  };

  // Least-squares tensor Chebyshev fit of a = g / factor, away from the branches.
  const int n = kChebDegree;
  std::vector<double> rows, vals;
  std::vector<double> tx(n), ty(n);
  int count = 0;
  for (int i = 0; i < kChebNodes; ++i) {
    const double t1 = std::cos(kPi * (i + 0.5) / kChebNodes);
    for (int j = 0; j < kChebNodes; ++j) {
      const double t2 = std::cos(kPi * (j + 0.5) / kChebNodes);
      const Vec2 k(radius * t1, radius * t2);
      const double f1 = k[0] - (nf.nu1 ? ipow(k[1], nf.nu1) * nf.b(k) : 0.0);
      const double f2 = k[1] - (nf.nu2 ? ipow(k[0], nf.nu2) * nf.c(k) : 0.0);
      if (std::abs(f1) < 0.05 * radius || std::abs(f2) < 0.05 * radius) continue;
      chebyshev_row(t1, n, tx.data());
      chebyshev_row(t2, n, ty.data());
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) rows.push_back(tx[a] * ty[b]);
      vals.push_back(g(k) / (f1 * f2));
      ++count;
    }
  }
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> M(
      rows.data(), count, n * n);
  Eigen::Map<Eigen::VectorXd> y(vals.data(), count);
  const Eigen::VectorXd coef = M.colPivHouseholderQr().solve(y);
  nf.a_cheb.resize(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) nf.a_cheb(a, b) = coef[a * n + b];

  // Residual and bounds on the sample grid inside the disc.
  nf.residual = 0.0;
  nf.a_min = nf.b_min = nf.c_min = std::numeric_limits<double>::infinity();
  nf.a_max = nf.b_max = nf.c_max = 0.0;
  const int G = opts.grid;
  for (int i = 0; i < G; ++i) {
    for (int j = 0; j < G; ++j) {
      const Vec2 k(radius * (-1.0 + 2.0 * i / (G - 1)), radius * (-1.0 + 2.0 * j / (G - 1)));
      if (k.norm() > radius) continue;
      nf.residual = std::max(nf.residual, std::abs(g(k) - nf.a(k) * factor(k)));
      const double av = std::abs(nf.a(k)), bv = std::abs(nf.b(k)), cv = std::abs(nf.c(k));
      nf.a_min = std::min(nf.a_min, av);
      nf.a_max = std::max(nf.a_max, av);
      nf.b_min = std::min(nf.b_min, bv);
      nf.b_max = std::max(nf.b_max, bv);
      nf.c_min = std::min(nf.c_min, cv);
      nf.c_max = std::max(nf.c_max, cv);
    }
  }
  return nf;
}

bool acceptable(const NormalForm& nf, const NormalFormOptions& opts) {
  if (!(nf.residual < opts.factorization_tolerance)) return false;
  if (!(nf.a_min > 1e-3 * nf.a_max)) return false;
  if (nf.nu1 && !(nf.b_min > 1e-3 * nf.b_max)) return false;
  if (nf.nu2 && !(nf.c_min > 1e-3 * nf.c_max)) return false;
  return true;
}

}  // namespace

NormalForm morse_normal_form(const DispersionModel& model, const SingularPoint& p,
                             const NormalFormOptions& opts) {
  if (!(opts.radius > 0.0) || opts.grid < 3 || opts.max_halvings < 0 ||
      !(opts.factorization_tolerance > 0.0) || !(opts.nu_threshold > 0.0))
    throw Error(ErrorKind::InvalidArgument, "invalid normal form options");
  if (!(p.hessian_eigenvalues[0] < 0.0 && p.hessian_eigenvalues[1] > 0.0))
    throw Error(ErrorKind::InvalidArgument, "normal form needs a saddle point");
  double radius = opts.radius;
  double best = std::numeric_limits<double>::infinity();
  for (int h = 0; h <= opts.max_halvings; ++h, radius *= 0.5) {
    NormalForm nf;
    try {
      nf = attempt(model, p, radius, opts);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::FactorizationFailed) throw;
      continue;
    }
    nf.attempts = h + 1;
    best = std::min(best, nf.residual);
    if (acceptable(nf, opts)) return nf;
  }
  throw Error(ErrorKind::FactorizationFailed,
              "factorization residual " + std::to_string(best) + " above tolerance after " +
                  std::to_string(opts.max_halvings) + " halvings");
}

}  // namespace vanhove::dispersion
