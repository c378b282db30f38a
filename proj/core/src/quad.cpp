#include "vanhove/quad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <random>

#include "vanhove/error.hpp"

namespace vanhove::quad {

Box Box::unit(int dim) {
  return Box{std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)};
}

Box Box::symmetric(int dim) {
  return Box{std::vector<double>(dim, -1.0), std::vector<double>(dim, 1.0)};
}

Box Box::interval(double a, double b) { return Box{{a}, {b}}; }

double Box::volume() const {
  double v = 1.0;
  for (int i = 0; i < dim(); ++i) v *= upper[i] - lower[i];
  return v;
}

QuadSpec QuadSpec::guided(double q0, Manifold manifold, double abs_tol, double rel_tol,
                          long max_evaluations) {
  QuadSpec s;
  s.refinement = Refinement::singularity_guided;
  s.q0 = q0;
  s.manifold = std::move(manifold);
  s.abs_tol = abs_tol;
  s.rel_tol = rel_tol;
  s.max_evaluations = max_evaluations;
  return s;
}

void QuadSpec::validate() const {
  if (!(abs_tol > 0.0 || rel_tol > 0.0))
    throw Error(ErrorKind::InvalidArgument, "quadrature needs abs_tol > 0 or rel_tol > 0");
  if (abs_tol < 0.0 || rel_tol < 0.0)
    throw Error(ErrorKind::InvalidArgument, "quadrature tolerances must be nonnegative");
  if (max_evaluations <= 0)
    throw Error(ErrorKind::InvalidArgument, "max_evaluations must be positive");
  if (initial_splits < 1) throw Error(ErrorKind::InvalidArgument, "initial_splits must be >= 1");
  if (refinement == Refinement::singularity_guided && (!manifold || !(q0 > 0.0)))
    throw Error(ErrorKind::InvalidArgument,
                "singularity-guided refinement needs q0 > 0 and a manifold function");
}

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule; abscissae in
// decreasing order, the last one is the centre.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for kXgk[1], kXgk[3], kXgk[5] and the centre.
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

// Genz-Malik degree 7 rule with embedded degree 5 rule.
const double kLambda2 = std::sqrt(9.0 / 70.0);
const double kLambda4 = std::sqrt(9.0 / 10.0);
const double kLambda5 = std::sqrt(9.0 / 19.0);

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

inline bool finite_value(double v) { return std::isfinite(v); }
inline bool finite_value(const std::complex<double>& v) {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}

template <class T>
struct Cell {
  std::array<double, 4> center{};
  std::array<double, 4> half{};
  T value{};
  double error = 0.0;
  double priority = 0.0;
  int split_axis = 0;
  long id = 0;
};

// Neumaier-compensated accumulator.
template <class T>
struct Accumulator {
  T sum{};
  T comp{};
  void add(const T& v) {
    const T t = sum + v;
    if constexpr (std::is_same_v<T, double>) {
      if (std::abs(sum) >= std::abs(v))
        comp += (sum - t) + v;
      else
        comp += (v - t) + sum;
    } else {
      double re = comp.real(), im = comp.imag();
      if (std::abs(sum.real()) >= std::abs(v.real()))
        re += (sum.real() - t.real()) + v.real();
      else
        re += (v.real() - t.real()) + sum.real();
      if (std::abs(sum.imag()) >= std::abs(v.imag()))
        im += (sum.imag() - t.imag()) + v.imag();
      else
        im += (v.imag() - t.imag()) + sum.imag();
      comp = T(re, im);
    }
    sum = t;
  }
  T get() const { return sum + comp; }
};

template <class T, class F>
class Integrator {
 public:
  Integrator(const F& f, int dim, const QuadSpec& spec) : f_(f), dim_(dim), spec_(spec) {}

  Result<T> run(const Box& box) {
    const int d = dim_;
    std::vector<std::array<double, 2>> ranges;
    std::vector<Cell<T>> initial;

    if (d == 1 && !spec_.breakpoints.empty()) {
      std::vector<double> cuts{box.lower[0]};
      std::vector<double> inner = spec_.breakpoints;
      std::sort(inner.begin(), inner.end());
      for (double b : inner)
        if (b > cuts.back() && b < box.upper[0]) cuts.push_back(b);
      cuts.push_back(box.upper[0]);
      for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Cell<T> c;
        c.center[0] = 0.5 * (cuts[i] + cuts[i + 1]);
        c.half[0] = 0.5 * (cuts[i + 1] - cuts[i]);
        initial.push_back(c);
      }
    } else {
      const int n = spec_.initial_splits;
      long total = 1;
      for (int i = 0; i < d; ++i) total *= n;
      for (long idx = 0; idx < total; ++idx) {
        Cell<T> c;
        long rem = idx;
        for (int i = 0; i < d; ++i) {
          const long k = rem % n;
          rem /= n;
          const double w = (box.upper[i] - box.lower[i]) / n;
          c.half[i] = 0.5 * w;
          c.center[i] = box.lower[i] + (static_cast<double>(k) + 0.5) * w;
        }
        initial.push_back(c);
      }
    }

    std::vector<Cell<T>> done;  // cells retired by splitting are discarded
    auto cmp = [](const Cell<T>& a, const Cell<T>& b) {
      if (a.priority != b.priority) return a.priority < b.priority;
      return a.id > b.id;
    };
    std::priority_queue<Cell<T>, std::vector<Cell<T>>, decltype(cmp)> heap(cmp);

    Accumulator<T> running;
    double running_err = 0.0;
    for (auto& c : initial) {
      evaluate(c);
      running.add(c.value);
      running_err += c.error;
      heap.push(c);
    }

    const int per_cell = rule_points(d);
    bool converged = false;
    for (;;) {
      const double tol = std::max(spec_.abs_tol, spec_.rel_tol * magnitude(running.get()));
      if (running_err <= tol) {
        converged = true;
        break;
      }
      if (evaluations_ + 2L * per_cell > spec_.max_evaluations) break;
      Cell<T> worst = heap.top();
      heap.pop();
      const int ax = worst.split_axis;
      Cell<T> left = worst, right = worst;
      left.half[ax] *= 0.5;
      right.half[ax] *= 0.5;
      left.center[ax] -= left.half[ax];
      right.center[ax] += right.half[ax];
      evaluate(left);
      evaluate(right);
      running.add(-worst.value);
      running.add(left.value);
      running.add(right.value);
      running_err += left.error + right.error - worst.error;
      if (running_err < 0.0) running_err = 0.0;
      heap.push(left);
      heap.push(right);
    }

    std::vector<Cell<T>> cells;
    cells.reserve(heap.size());
    while (!heap.empty()) {
      cells.push_back(heap.top());
      heap.pop();
    }
    std::sort(cells.begin(), cells.end(),
              [](const Cell<T>& a, const Cell<T>& b) { return a.id < b.id; });
    Accumulator<T> total;
    double err = 0.0;
    for (const auto& c : cells) {
      total.add(c.value);
      err += c.error;
    }
    Result<T> r;
    r.value = total.get();
    r.error_estimate = err;
    r.evaluations = evaluations_;
    r.converged = err <= std::max(spec_.abs_tol, spec_.rel_tol * magnitude(r.value));
    (void)converged;
    return r;
  }

 private:
  T sample(const double* x) {
    ++evaluations_;
    const T v = f_(std::span<const double>(x, static_cast<std::size_t>(dim_)));
    if (!finite_value(v)) throw Error(ErrorKind::NonFiniteSample, "integrand returned NaN/Inf");
    if (guided_) {
      const double m = std::abs(spec_.manifold(std::span<const double>(x, dim_)));
      if (m < min_manifold_) min_manifold_ = m;
    }
    return v;
  }

  void evaluate(Cell<T>& c) {
    c.id = next_id_++;
    guided_ = spec_.refinement == Refinement::singularity_guided;
    min_manifold_ = std::numeric_limits<double>::infinity();
    if (dim_ == 1)
      evaluate_gk(c);
    else
      evaluate_gm(c);
    double weight = 1.0;
    if (guided_) weight = 1.0 + spec_.q0 / (spec_.q0 + min_manifold_);
    c.priority = c.error * weight;
  }

  void evaluate_gk(Cell<T>& c) {
    const double mid = c.center[0];
    const double h = c.half[0];
    double x = mid;
    const T fc = sample(&x);
    T kron = fc * kWgk[7];
    T gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
      double xm = mid - h * kXgk[j];
      double xp = mid + h * kXgk[j];
      const T s = sample(&xm) + sample(&xp);
      kron += s * kWgk[j];
      if (j % 2 == 1) gauss += s * kWg[j / 2];
    }
    c.value = kron * h;
    c.error = magnitude((kron - gauss) * h);
    c.split_axis = 0;
  }

  void evaluate_gm(Cell<T>& c) {
    const int d = dim_;
    const double dd = static_cast<double>(d);
    const double w1 = (12824.0 - 9120.0 * dd + 400.0 * dd * dd) / 19683.0;
    const double w2 = 980.0 / 6561.0;
    const double w3 = (1820.0 - 400.0 * dd) / 19683.0;
    const double w4 = 200.0 / 19683.0;
    const double w5 = 6859.0 / 19683.0 / static_cast<double>(1 << d);
    const double e1 = (729.0 - 950.0 * dd + 50.0 * dd * dd) / 729.0;
    const double e2 = 245.0 / 486.0;
    const double e3 = (265.0 - 100.0 * dd) / 1458.0;
    const double e4 = 25.0 / 729.0;
    const double ratio = (kLambda2 * kLambda2) / (kLambda4 * kLambda4);

    std::array<double, 4> x{};
    for (int i = 0; i < d; ++i) x[i] = c.center[i];
    const T f0 = sample(x.data());

    T sum2{}, sum3{}, sum4{}, sum5{};
    double best_diff = -1.0;
    int best_axis = 0;
    for (int i = 0; i < d; ++i) {
      x[i] = c.center[i] - kLambda2 * c.half[i];
      const T a2 = sample(x.data());
      x[i] = c.center[i] + kLambda2 * c.half[i];
      const T b2 = sample(x.data());
      x[i] = c.center[i] - kLambda4 * c.half[i];
      const T a4 = sample(x.data());
      x[i] = c.center[i] + kLambda4 * c.half[i];
      const T b4 = sample(x.data());
      x[i] = c.center[i];
      sum2 += a2 + b2;
      sum3 += a4 + b4;
      const double diff = magnitude(a2 + b2 - 2.0 * f0 - ratio * (a4 + b4 - 2.0 * f0));
      // Ties go to the widest axis so that flat directions still get split.
      if (diff > best_diff * (1.0 + 1e-12) ||
          (std::abs(diff - best_diff) <= 1e-12 * std::abs(best_diff) &&
           c.half[i] > c.half[best_axis])) {
        best_diff = diff;
        best_axis = i;
      }
    }
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        for (int si = -1; si <= 1; si += 2) {
          for (int sj = -1; sj <= 1; sj += 2) {
            x[i] = c.center[i] + si * kLambda4 * c.half[i];
            x[j] = c.center[j] + sj * kLambda4 * c.half[j];
            sum4 += sample(x.data());
          }
        }
        x[i] = c.center[i];
        x[j] = c.center[j];
      }
    }
    for (int mask = 0; mask < (1 << d); ++mask) {
      for (int i = 0; i < d; ++i)
        x[i] = c.center[i] + ((mask >> i) & 1 ? 1.0 : -1.0) * kLambda5 * c.half[i];
      sum5 += sample(x.data());
    }
    double vol = 1.0;
    for (int i = 0; i < d; ++i) vol *= 2.0 * c.half[i];
    const T r7 = vol * (w1 * f0 + w2 * sum2 + w3 * sum3 + w4 * sum4 + w5 * sum5);
    const T r5 = vol * (e1 * f0 + e2 * sum2 + e3 * sum3 + e4 * sum4);
    c.value = r7;
    c.error = magnitude(r7 - r5);
    c.split_axis = best_axis;
  }

  const F& f_;
  int dim_;
  const QuadSpec& spec_;
  long evaluations_ = 0;
  long next_id_ = 0;
  bool guided_ = false;
  double min_manifold_ = 0.0;
};

void check_box(const Box& box) {
  if (box.lower.size() != box.upper.size())
    throw Error(ErrorKind::InvalidArgument, "box bounds have different dimensions");
  if (box.dim() < 1 || box.dim() > 4)
    throw Error(ErrorKind::InvalidArgument, "integration dimension must be 1..4");
  for (int i = 0; i < box.dim(); ++i)
    if (!(box.upper[i] > box.lower[i]))
      throw Error(ErrorKind::InvalidArgument, "box must have positive extent on every axis");
}

// 53 random mantissa bits; identical across standard libraries.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <class T, class F>
Result<T> monte_carlo(const F& f, const Box& box, long samples, std::uint64_t seed) {
  check_box(box);
  if (samples < 100) throw Error(ErrorKind::InvalidArgument, "Monte Carlo needs >= 100 samples");
  std::mt19937_64 rng(seed);
  const int d = box.dim();
  std::array<double, 4> x{};
  double mean_re = 0.0, m2_re = 0.0, mean_im = 0.0, m2_im = 0.0;
  for (long n = 1; n <= samples; ++n) {
    for (int i = 0; i < d; ++i)
      x[i] = box.lower[i] + (box.upper[i] - box.lower[i]) * uniform01(rng);
    const T v = f(std::span<const double>(x.data(), d));
    if (!finite_value(v)) throw Error(ErrorKind::NonFiniteSample, "integrand returned NaN/Inf");
    double re, im = 0.0;
    if constexpr (std::is_same_v<T, double>) {
      re = v;
    } else {
      re = v.real();
      im = v.imag();
    }
    const double dre = re - mean_re;
    mean_re += dre / static_cast<double>(n);
    m2_re += dre * (re - mean_re);
    const double dim_ = im - mean_im;
    mean_im += dim_ / static_cast<double>(n);
    m2_im += dim_ * (im - mean_im);
  }
  const double vol = box.volume();
  const double var = (m2_re + m2_im) / static_cast<double>(samples - 1);
  Result<T> r;
  if constexpr (std::is_same_v<T, double>)
    r.value = vol * mean_re;
  else
    r.value = vol * T(mean_re, mean_im);
  r.error_estimate = vol * std::sqrt(var / static_cast<double>(samples));
  r.evaluations = samples;
  r.converged = true;
  return r;
}

}  // namespace

int rule_degree(int dim) { return dim == 1 ? 22 : 7; }

int rule_points(int dim) {
  if (dim == 1) return 15;
  return 1 + 4 * dim + 2 * dim * (dim - 1) + (1 << dim);
}

QuadResult integrate(const RealIntegrand& f, const Box& box, const QuadSpec& spec) {
  check_box(box);
  spec.validate();
  Integrator<double, RealIntegrand> in(f, box.dim(), spec);
  return in.run(box);
}

ComplexQuadResult integrate_complex(const ComplexIntegrand& f, const Box& box,
                                    const QuadSpec& spec) {
  check_box(box);
  spec.validate();
  Integrator<std::complex<double>, ComplexIntegrand> in(f, box.dim(), spec);
  return in.run(box);
}

QuadResult integrate_mc(const RealIntegrand& f, const Box& box, long samples,
                        std::uint64_t seed) {
  return monte_carlo<double>(f, box, samples, seed);
}

ComplexQuadResult integrate_mc_complex(const ComplexIntegrand& f, const Box& box,
                                       long samples, std::uint64_t seed) {
  return monte_carlo<std::complex<double>>(f, box, samples, seed);
}

FixedRule gauss_kronrod15(const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(mid);
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double s = f(mid - h * kXgk[j]) + f(mid + h * kXgk[j]);
    kron += s * kWgk[j];
    if (j % 2 == 1) gauss += s * kWg[j / 2];
  }
  return {kron * h, std::abs((kron - gauss) * h)};
}

}  // namespace vanhove::quad
