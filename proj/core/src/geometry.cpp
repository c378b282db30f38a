#include "vanhove/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <unordered_set>

#include "vanhove/error.hpp"
#include "vanhove/parallel.hpp"

namespace vanhove::geometry {

namespace {

constexpr double kPi = std::numbers::pi;
using dispersion::Domain;

struct Arm {
  int saddle;
  Vec2 dir;
};

enum class EndKind { saddle, exclusion, boundary, closed };

struct TraceEnd {
  EndKind kind = EndKind::closed;
  int saddle = -1;
  Vec2 arrival = Vec2::Zero();  // unit vector from the saddle towards the curve
};

// Spatial hash of traced points on the fundamental domain.
class PointIndex {
 public:
  PointIndex(const DispersionModel& m, double cell) : model_(m), cell_(cell) {}

  void insert(const Vec2& p) { cells_.insert(key(canonical(p))); }

  bool near(const Vec2& p) const {
    const Vec2 c = canonical(p);
    const long ix = cell_index(c[0]), iy = cell_index(c[1]);
    for (long dx = -1; dx <= 1; ++dx)
      for (long dy = -1; dy <= 1; ++dy)
        if (cells_.count(pack(wrap_index(ix + dx), wrap_index(iy + dy)))) return true;
    return false;
  }

 private:
  Vec2 canonical(const Vec2& p) const {
    if (model_.domain() == Domain::torus) return model_.displacement(p, Vec2::Zero());
    return p;
  }
  long cell_index(double v) const { return static_cast<long>(std::floor(v / cell_)); }
  long wrap_index(long i) const {
    if (model_.domain() != Domain::torus) return i;
    const long n = static_cast<long>(std::ceil(2.0 * kPi / cell_));
    const long lo = cell_index(-kPi);
    return lo + ((i - lo) % n + n) % n;
  }
  static std::uint64_t pack(long x, long y) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) |
           static_cast<std::uint32_t>(y);
  }
  std::uint64_t key(const Vec2& c) const { return pack(cell_index(c[0]), cell_index(c[1])); }

  const DispersionModel& model_;
  double cell_;
  std::unordered_set<std::uint64_t> cells_;
};

class Tracer {
 public:
  Tracer(const DispersionModel& m, const TraceOptions& o,
         std::vector<dispersion::SingularPoint> saddles)
      : model_(m), opts_(o), saddles_(std::move(saddles)) {}

  Vec2 project(Vec2 x) const {
    for (int it = 0; it <= opts_.max_newton; ++it) {
      const double e = model_.evaluate(x);
      if (std::abs(e) < opts_.tolerance) return x;
      if (it == opts_.max_newton) break;
      const Vec2 g = model_.gradient(x);
      const double g2 = g.squaredNorm();
      if (!(g2 > 0.0)) break;
      x -= (e / g2) * g;
    }
    throw Error(ErrorKind::TraceStalled, "Newton projection onto the Fermi curve did not converge");
  }

  // Point on the curve at distance r from saddle s, near `guess`.
  Vec2 on_circle(int s, double r, Vec2 guess) const {
    const Vec2 c = saddles_[s].location;
    for (int it = 0; it < 40; ++it) {
      const Vec2 d = model_.displacement(guess, c);
      const double f1 = model_.evaluate(guess);
      const double f2 = d.squaredNorm() - r * r;
      if (std::abs(f1) < opts_.tolerance && std::abs(f2) < 1e-14 * r * r) return guess;
      Eigen::Matrix2d J;
      J.row(0) = model_.gradient(guess).transpose();
      J.row(1) = 2.0 * d.transpose();
      guess -= J.partialPivLu().solve(Vec2(f1, f2));
    }
    throw Error(ErrorKind::TraceStalled, "could not place a point on an exclusion circle");
  }

  // Crossing of the square boundary between inside point x and outside y.
  Vec2 on_boundary(const Vec2& x, const Vec2& y) const {
    int axis = std::abs(y[0]) - 1.0 > std::abs(y[1]) - 1.0 ? 0 : 1;
    const double side = y[axis] > 0 ? 1.0 : -1.0;
    const double t = (side - x[axis]) / (y[axis] - x[axis]);
    Vec2 z = x + t * (y - x);
    z[axis] = side;
    const int other = 1 - axis;
    for (int it = 0; it < 40; ++it) {
      const double e = model_.evaluate(z);
      if (std::abs(e) < opts_.tolerance) return z;
      const double de = model_.gradient(z)[other];
      if (de == 0.0) break;
      z[other] -= e / de;
    }
    throw Error(ErrorKind::TraceStalled, "could not locate the boundary crossing");
  }

  Vec2 tangent(const Vec2& x, const Vec2& prev) const {
    const Vec2 g = model_.gradient(x);
    const double n = g.norm();
    if (!(n > 0.0)) throw Error(ErrorKind::TraceStalled, "zero gradient away from a saddle");
    Vec2 t(-g[1] / n, g[0] / n);
    if (t.dot(prev) < 0.0) t = -t;
    return t;
  }

  // Follows the curve from x0 along dir0 until a stop condition.
  TraceEnd run(const Vec2& x0, const Vec2& dir0, int origin_saddle, bool from_saddle_point,
               std::vector<Vec2>& pts) const {
    const double h = opts_.step;
    const double r = opts_.exclusion_radius;
    const bool square = model_.domain() == Domain::square;
    const long max_points =
        static_cast<long>(4000.0 * (square ? 8.0 : 8.0 * kPi) / h) + 1000;
    pts.push_back(x0);
    Vec2 x = x0, dir = dir0;
    double travelled = 0.0;
    for (;;) {
      const Vec2 t = (from_saddle_point && pts.size() == 1) ? dir0 : tangent(x, dir);
      Vec2 y = project(x + h * t);

      if (square && !model_.contains(y)) {
        append_end(pts, on_boundary(x, y));
        return {EndKind::boundary, -1, Vec2::Zero()};
      }
      for (int s = 0; s < static_cast<int>(saddles_.size()); ++s) {
        if (s == origin_saddle && travelled < 2.0 * h + r) continue;
        const Vec2 c = saddles_[s].location;
        const double dist = model_.displacement(y, c).norm();
        if (r > 0.0) {
          if (dist < r) {
            const double dx = model_.displacement(x, c).norm();
            const double frac = (dx - r) / std::max(dx - dist, 1e-300);
            const Vec2 z = on_circle(s, r, x + frac * (y - x));
            append_end(pts, z);
            return {EndKind::exclusion, s, model_.displacement(z, c).normalized()};
          }
        } else if (dist < 1.5 * h) {
          const Vec2 arrival = model_.displacement(y, c).normalized();
          if (dist >= 0.5 * h) pts.push_back(y);
          const Vec2 last = pts.back();
          pts.push_back(last + model_.displacement(c, last));
          return {EndKind::saddle, s, arrival};
        }
      }
      if (origin_saddle < 0 && travelled > 3.0 * h &&
          model_.displacement(y, x0).norm() < 1.5 * h) {
        if (model_.displacement(y, x0).norm() >= 0.5 * h) pts.push_back(y);
        const Vec2 last = pts.back();
        pts.push_back(last + model_.displacement(x0, last));
        return {EndKind::closed, -1, Vec2::Zero()};
      }
      pts.push_back(y);
      travelled += (y - x).norm();
      dir = t;
      x = y;
      if (static_cast<long>(pts.size()) > max_points)
        throw Error(ErrorKind::TraceStalled, "trace exceeded its length budget");
    }
  }

  const std::vector<dispersion::SingularPoint>& saddles() const { return saddles_; }

 private:
  // Replaces the last point when the final segment would be too short.
  void append_end(std::vector<Vec2>& pts, const Vec2& z) const {
    if (pts.size() > 1 && (z - pts.back()).norm() < 0.25 * opts_.step) pts.back() = z;
    else pts.push_back(z);
  }

  const DispersionModel& model_;
  TraceOptions opts_;
  std::vector<dispersion::SingularPoint> saddles_;
};

std::array<Vec2, 4> arm_directions(const dispersion::SingularPoint& sp) {
  const double l1 = sp.hessian_eigenvalues[0], l2 = sp.hessian_eigenvalues[1];
  const Vec2 v1 = sp.hessian_rotation.col(0), v2 = sp.hessian_rotation.col(1);
  const Vec2 w0 = (std::sqrt(l2) * v1 + std::sqrt(-l1) * v2).normalized();
  const Vec2 w1 = (std::sqrt(l2) * v1 - std::sqrt(-l1) * v2).normalized();
  return {w0, Vec2(-w0), w1, Vec2(-w1)};
}

CurveSample finish(std::vector<Vec2> pts, int id, bool closed, double step) {
  CurveSample c;
  c.points = std::move(pts);
  c.branch_id = id;
  c.closed = closed;
  c.step = step;
  c.cumulative_arclength.resize(c.points.size());
  double s = 0.0;
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    if (i > 0) s += (c.points[i] - c.points[i - 1]).norm();
    c.cumulative_arclength[i] = s;
  }
  return c;
}

}  // namespace

std::vector<CurveSample> trace_fermi_curve(const DispersionModel& model, double step,
                                           double exclusion_radius) {
  TraceOptions o;
  o.step = step;
  o.exclusion_radius = exclusion_radius;
  return trace_fermi_curve(model, o);
}

std::vector<CurveSample> trace_fermi_curve(const DispersionModel& model,
                                           const TraceOptions& opts) {
  if (!(opts.step > 0.0) || !(opts.exclusion_radius >= 0.0) || opts.scan_resolution < 4 ||
      opts.max_newton < 1 || !(opts.tolerance > 0.0))
    throw Error(ErrorKind::InvalidArgument, "invalid trace options");
  const auto saddles = dispersion::find_singular_points(model);
  Tracer tracer(model, opts, saddles);
  PointIndex index(model, 2.0 * opts.step);
  std::vector<CurveSample> out;
  const double r = opts.exclusion_radius;

  // Arms from saddles; an arm is skipped once a trace has arrived along it.
  std::vector<std::array<Vec2, 4>> dirs;
  std::vector<std::array<bool, 4>> used;
  for (const auto& sp : saddles) {
    dirs.push_back(arm_directions(sp));
    used.push_back({false, false, false, false});
  }
  auto consume = [&](int s, const Vec2& arrival) {
    int best = 0;
    for (int a = 1; a < 4; ++a)
      if (dirs[s][a].dot(arrival) > dirs[s][best].dot(arrival)) best = a;
    used[s][best] = true;
  };
  for (int s = 0; s < static_cast<int>(saddles.size()); ++s) {
    for (int a = 0; a < 4; ++a) {
      if (used[s][a]) continue;
      used[s][a] = true;
      const Vec2 c = saddles[s].location;
      const Vec2 d = dirs[s][a];
      std::vector<Vec2> pts;
      TraceEnd end;
      if (r > 0.0) {
        const Vec2 x0 = tracer.on_circle(s, r, c + r * d);
        if (model.domain() == Domain::square && !model.contains(x0)) continue;
        end = tracer.run(x0, d, s, false, pts);
      } else {
        end = tracer.run(c, d, s, true, pts);
      }
      if (end.kind == EndKind::saddle || end.kind == EndKind::exclusion)
        consume(end.saddle, end.arrival);
      for (const auto& p : pts) index.insert(p);
      out.push_back(finish(std::move(pts), static_cast<int>(out.size()), false, opts.step));
    }
  }

  // Remaining components from a sign-change scan.
  const bool torus = model.domain() == Domain::torus;
  const double lo = torus ? -kPi : -1.0, hi = torus ? kPi : 1.0;
  const int N = opts.scan_resolution;
  const double cell = (hi - lo) / N;
  auto node = [&](int i, int j) { return Vec2(lo + i * cell, lo + j * cell); };
  auto inside_exclusion = [&](const Vec2& p) {
    for (const auto& sp : saddles)
      if (model.displacement(p, sp.location).norm() <= std::max(r, 2.0 * opts.step)) return true;
    return false;
  };
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      for (int dir = 0; dir < 2; ++dir) {
        const Vec2 a = node(i, j);
        const Vec2 b = dir == 0 ? node(i + 1, j) : node(i, j + 1);
        double fa = model.evaluate(a), fb = model.evaluate(b);
        if ((fa < 0.0) == (fb < 0.0)) continue;
        Vec2 pa = a, pb = b;
        for (int it = 0; it < 80; ++it) {
          const Vec2 m = 0.5 * (pa + pb);
          const double fm = model.evaluate(m);
          if ((fm < 0.0) == (fa < 0.0)) {
            pa = m;
            fa = fm;
          } else {
            pb = m;
          }
        }
        Vec2 seed = tracer.project(0.5 * (pa + pb));
        if (inside_exclusion(seed) || index.near(seed)) continue;
        const Vec2 g = model.gradient(seed);
        const Vec2 t = Vec2(-g[1], g[0]).normalized();
        std::vector<Vec2> fwd;
        const TraceEnd end = tracer.run(seed, t, -1, false, fwd);
        std::vector<Vec2> pts;
        bool closed = end.kind == EndKind::closed;
        if (closed) {
          pts = std::move(fwd);
        } else {
          std::vector<Vec2> back;
          tracer.run(seed, Vec2(-t), -1, false, back);
          pts.assign(back.rbegin(), back.rend());
          pts.insert(pts.end(), fwd.begin() + 1, fwd.end());
        }
        for (const auto& p : pts) index.insert(p);
        out.push_back(finish(std::move(pts), static_cast<int>(out.size()), closed, opts.step));
      }
    }
  }
  return out;
}

double total_length(const std::vector<CurveSample>& curves) {
  double s = 0.0;
  for (const auto& c : curves) s += c.length();
  return s;
}

namespace {

// Length of segment part where g = |e| - thr <= 0, g linear along the segment.
double flagged(double g0, double g1, double len) {
  if (g0 <= 0.0 && g1 <= 0.0) return len;
  if (g0 > 0.0 && g1 > 0.0) return 0.0;
  const double neg = g0 <= 0.0 ? -g0 : -g1;
  const double pos = g0 <= 0.0 ? g1 : g0;
  return len * neg / (neg + pos);
}

}  // namespace

double overlap_length(const DispersionModel& model, const CurveSample& curve, const Vec2& p,
                      int sign, double threshold) {
  return overlap_lengths(model, {curve}, p, sign, {threshold})[0];
}

std::vector<double> overlap_lengths(const DispersionModel& model,
                                    const std::vector<CurveSample>& curves, const Vec2& p,
                                    int sign, const std::vector<double>& thresholds) {
  if (sign != 1 && sign != -1) throw Error(ErrorKind::InvalidArgument, "sign must be +1 or -1");
  for (double t : thresholds)
    if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "threshold must be positive");
  std::vector<double> out(thresholds.size(), 0.0);
  std::vector<double> e;
  for (const auto& c : curves) {
    const std::size_t n = c.points.size();
    e.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      e[i] = std::abs(model.evaluate(p + static_cast<double>(sign) * c.points[i]));
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double len = c.cumulative_arclength[i + 1] - c.cumulative_arclength[i];
      for (std::size_t t = 0; t < thresholds.size(); ++t)
        out[t] += flagged(e[i] - thresholds[t], e[i + 1] - thresholds[t], len);
    }
  }
  return out;
}

double OverlapScalingReport::bound(int j) const {
  return std::pow(std::pow(M, j) / delta, 1.0 / n0);
}

OverlapScalingReport overlap_scaling_experiment(const DispersionModel& model,
                                                const std::vector<CurveSample>& curves,
                                                const OverlapExperiment& cfg) {
  if (!(cfg.M > 1.0) || cfg.j_values.empty() || cfg.num_p < 1 || !(cfg.delta > 0.0) ||
      cfg.n0 < 1)
    throw Error(ErrorKind::InvalidArgument, "invalid overlap experiment configuration");
  for (int j : cfg.j_values)
    if (j >= 0) throw Error(ErrorKind::InvalidArgument, "scale exponents j must be negative");
  const int jmin = *std::min_element(cfg.j_values.begin(), cfg.j_values.end());
  for (const auto& c : curves)
    if (c.step > std::pow(cfg.M, jmin) * (1.0 + 1e-12))
      throw Error(ErrorKind::InsufficientResolution,
                  "curve step exceeds M^{min j}; retrace with a finer step");

  OverlapScalingReport rep;
  rep.M = cfg.M;
  rep.delta = cfg.delta;
  rep.n0 = cfg.n0;
  rep.j_values = cfg.j_values;

  std::mt19937_64 rng(cfg.seed);
  const bool torus = model.domain() == Domain::torus;
  const double lo = torus ? -kPi : -1.0, hi = torus ? kPi : 1.0;
  for (int i = 0; i < cfg.num_p; ++i) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const double v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    rep.p_samples.emplace_back(lo + (hi - lo) * u, lo + (hi - lo) * v);
  }
  const std::size_t nj = cfg.j_values.size();
  std::vector<double> thr(nj);
  for (std::size_t jj = 0; jj < nj; ++jj) thr[jj] = std::pow(cfg.M, cfg.j_values[jj]);

  rep.measured_lengths.assign(2, {});
  for (int s = 0; s < 2; ++s) {
    rep.measured_lengths[s] = parallel_map<std::vector<double>>(
        rep.p_samples.size(), [&](std::size_t i) {
          return overlap_lengths(model, curves, rep.p_samples[i], s == 0 ? 1 : -1, thr);
        });
  }

  // Rows, violation fractions and monotonicity.
  std::vector<std::size_t> order(nj);
  for (std::size_t jj = 0; jj < nj; ++jj) order[jj] = jj;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return cfg.j_values[a] < cfg.j_values[b]; });
  std::vector<std::vector<double>> worst(2, std::vector<double>(rep.p_samples.size(), 0.0));
  for (int s = 0; s < 2; ++s) {
    int violating = 0;
    for (std::size_t i = 0; i < rep.p_samples.size(); ++i) {
      bool any = false;
      for (std::size_t jj = 0; jj < nj; ++jj) {
        const double len = rep.measured_lengths[s][i][jj];
        const double bd = rep.bound(cfg.j_values[jj]);
        const bool viol = len > bd;
        any = any || viol;
        worst[s][i] = std::max(worst[s][i], len / bd);
        rep.rows.push_back({rep.p_samples[i], s == 0 ? 1 : -1, cfg.j_values[jj], len, bd, viol});
      }
      for (std::size_t q = 0; q + 1 < nj; ++q)
        if (rep.measured_lengths[s][i][order[q]] > rep.measured_lengths[s][i][order[q + 1]])
          rep.monotone = false;
      if (any) ++violating;
    }
    rep.violation_fraction[s] = static_cast<double>(violating) / rep.p_samples.size();
  }

  // Pooled within-sample slope over p outside the worst delta^2 fraction.
  if (nj >= 2) {
    double sxy = 0.0, sxx = 0.0;
    std::vector<double> resid_x, resid_y;
    for (int s = 0; s < 2; ++s) {
      std::vector<double> sorted = worst[s];
      std::sort(sorted.begin(), sorted.end());
      const std::size_t drop = static_cast<std::size_t>(
          std::floor(cfg.delta * cfg.delta * static_cast<double>(sorted.size())));
      const double cut = drop > 0 ? sorted[sorted.size() - drop] : INFINITY;
      for (std::size_t i = 0; i < rep.p_samples.size(); ++i) {
        if (worst[s][i] >= cut) continue;
        const auto& L = rep.measured_lengths[s][i];
        if (std::any_of(L.begin(), L.end(), [](double l) { return !(l > 0.0); })) continue;
        double mx = 0.0, my = 0.0;
        for (std::size_t jj = 0; jj < nj; ++jj) {
          mx += cfg.j_values[jj] * std::log(cfg.M);
          my += std::log(L[jj]);
        }
        mx /= nj;
        my /= nj;
        for (std::size_t jj = 0; jj < nj; ++jj) {
          const double x = cfg.j_values[jj] * std::log(cfg.M) - mx;
          const double y = std::log(L[jj]) - my;
          sxy += x * y;
          sxx += x * x;
          resid_x.push_back(x);
          resid_y.push_back(y);
        }
        ++rep.fit_samples;
      }
    }
    if (rep.fit_samples > 0 && sxx > 0.0) {
      rep.has_fit = true;
      rep.fitted_exponent = sxy / sxx;
      double rss = 0.0;
      for (std::size_t q = 0; q < resid_x.size(); ++q) {
        const double d = resid_y[q] - rep.fitted_exponent * resid_x[q];
        rss += d * d;
      }
      const double dof = static_cast<double>(resid_x.size()) - rep.fit_samples - 1.0;
      rep.fitted_exponent_stderr = dof > 0 ? std::sqrt(rss / dof / sxx) : 0.0;
    }
  }
  return rep;
}

IntervalCheck interval_lemma_check(const std::function<double(double)>& f, int k, double eta,
                                   double eps, long grid, double a, double b) {
  if (k < 1 || k > 8 || !(eta > 0.0) || !(eps > 0.0) || grid < 10 || !(b > a))
    throw Error(ErrorKind::InvalidArgument, "invalid interval lemma arguments");
  IntervalCheck res;
  res.bound = std::pow(2.0, k + 1) * std::pow(eps / eta, 1.0 / k);

  // Derivative hypothesis: k-th central difference on a subsampled grid.
  const double hd = (b - a) * 2e-3;
  const long checks = std::min<long>(grid, 20001);
  std::vector<double> binom(k + 1, 1.0);
  for (int i = 1; i <= k; ++i) binom[i] = binom[i - 1] * (k - i + 1) / i;
  res.min_derivative = INFINITY;
  double slack = 0.0;
  for (long i = 0; i < checks; ++i) {
    double x = a + (b - a) * static_cast<double>(i) / (checks - 1);
    x = std::clamp(x, a + 0.5 * k * hd, b - 0.5 * k * hd);
    double d = 0.0, mag = 0.0;
    for (int q = 0; q <= k; ++q) {
      const double t = binom[q] * f(x + (q - 0.5 * k) * hd);
      d += ((k - q) % 2 ? -1.0 : 1.0) * t;
      mag += std::abs(t);
    }
    d /= std::pow(hd, k);
    res.min_derivative = std::min(res.min_derivative, std::abs(d));
    // cancellation in the stencil can shave the last digits off an exact bound
    slack = std::max(slack, 8.0 * std::numeric_limits<double>::epsilon() * mag / std::pow(hd, k));
  }
  if (res.min_derivative + slack < eta)
    throw Error(ErrorKind::HypothesisViolated,
                "|f^(k)| = " + std::to_string(res.min_derivative) + " < eta on the check grid");

  long count = 0;
  const double w = (b - a) / static_cast<double>(grid);
  for (long i = 0; i < grid; ++i)
    if (std::abs(f(a + (static_cast<double>(i) + 0.5) * w)) <= eps) ++count;
  res.measured_volume = static_cast<double>(count) * w;
  res.holds = res.measured_volume <= res.bound;
  return res;
}

}  // namespace vanhove::geometry
