#include "isodense/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace isodense {

namespace {

struct SimpsonState {
  const RealFn* f;
  double abs_tol;
  int max_depth;
  bool failed = false;
  double worst_error = 0.0;
};

double simpson(double fa, double fm, double fb, double a, double b) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive(SimpsonState& st, double a, double b, double fa, double fm,
                double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = (*st.f)(lm), frm = (*st.f)(rm);
  const double left = simpson(fa, flm, fm, a, m);
  const double right = simpson(fm, frm, fb, m, b);
  if (!std::isfinite(left + right)) {
    st.failed = true;
    st.worst_error = kInf;
    return left + right;
  }
  const double err = (left + right - whole) / 15.0;
  // Relative floor keeps huge integrands (tails of exp(x^2)-type
  // densities) from refining forever against an absolute target.
  const double tol_eff =
      std::max(tol, 1e-14 * std::abs(left + right));
  if (std::abs(err) <= tol_eff || depth >= st.max_depth) {
    if (depth >= st.max_depth && std::abs(err) > tol) {
      st.failed = true;
      st.worst_error = std::max(st.worst_error, std::abs(err));
    }
    return left + right + err;
  }
  return adaptive(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         adaptive(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate(const RealFn& f, double a, double b,
                 const QuadratureOptions& opts) {
  if (a == b) return 0.0;
  SimpsonState st{&f, opts.abs_tol, opts.max_depth};
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = simpson(fa, fm, fb, a, b);
  const double result =
      adaptive(st, a, b, fa, fm, fb, whole, opts.abs_tol, 0);
  if (st.failed && opts.throw_on_failure) {
    throw NumericError("quadrature did not converge on [" +
                           std::to_string(a) + ", " + std::to_string(b) + "]",
                       st.worst_error);
  }
  return result;
}

double integrate_to_pinf(const RealFn& f, double a,
                         const QuadratureOptions& opts) {
  // x = a + (1/u - 1), u in (0, 1]; dx = -du/u^2.  The u->0 endpoint is
  // assigned its limit 0, valid for superpolynomially decaying f.
  auto g = [&](double u) {
    if (u <= 0.0) return 0.0;
    const double x = a + (1.0 / u - 1.0);
    const double v = f(x) / (u * u);
    return std::isfinite(v) ? v : 0.0;
  };
  return integrate(g, 0.0, 1.0, opts);
}

double integrate_to_minf(const RealFn& f, double b,
                         const QuadratureOptions& opts) {
  return integrate_to_pinf([&](double x) { return f(2.0 * b - x); }, b, opts);
}

TailProbe probe_tail(const RealFn& f, double start, int direction,
                     const QuadratureOptions& opts) {
  QuadratureOptions local = opts;
  local.throw_on_failure = false;
  double sum = 0.0;
  int consecutive_small = 0;
  double prev_edge = start;
  for (int k = 0; k <= 80; ++k) {
    const double width = std::pow(2.0, k);
    const double next_edge = start + direction * width;
    const double lo = std::min(prev_edge, next_edge);
    const double hi = std::max(prev_edge, next_edge);
    const double c = integrate(f, lo, hi, local);
    if (!std::isfinite(c)) return {false, kInf};
    sum += c;
    if (sum > 1e12) return {false, kInf};
    if (c <= 1e-10 * std::max(sum, 1e-300)) {
      if (++consecutive_small >= 2) return {true, sum};
    } else {
      consecutive_small = 0;
    }
    prev_edge = next_edge;
  }
  return {false, kInf};
}

double bisect(const RealFn& f, double a, double b, double xtol,
              int max_iter) {
  double fa = f(a), fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) {
    throw NumericError("bisect: endpoints do not bracket a root",
                       std::min(std::abs(fa), std::abs(fb)));
  }
  for (int i = 0; i < max_iter && (b - a) > xtol; ++i) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm > 0.0) == (fa > 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

double golden_section_min(const RealFn& f, double a, double b, double xtol) {
  static const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xtol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev initial guess, Newton on P_n.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

Pchip::Pchip(std::vector<double> t, std::vector<double> y)
    : t_(std::move(t)), y_(std::move(y)) {
  const int n = static_cast<int>(t_.size());
  if (n < 2) throw std::invalid_argument("Pchip needs at least two knots");
  std::vector<double> d(n - 1);
  for (int i = 0; i + 1 < n; ++i) {
    if (!(t_[i + 1] > t_[i]))
      throw std::invalid_argument("Pchip knots must be strictly increasing");
    d[i] = (y_[i + 1] - y_[i]) / (t_[i + 1] - t_[i]);
  }
  m_.assign(n, 0.0);
  m_[0] = d[0];
  m_[n - 1] = d[n - 2];
  for (int i = 1; i + 1 < n; ++i) {
    if (d[i - 1] * d[i] <= 0.0) {
      m_[i] = 0.0;
    } else {
      // Weighted harmonic mean keeps the interpolant monotone.
      const double w1 = 2.0 * (t_[i + 1] - t_[i]) + (t_[i] - t_[i - 1]);
      const double w2 = (t_[i + 1] - t_[i]) + 2.0 * (t_[i] - t_[i - 1]);
      m_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
    }
  }
}

int Pchip::segment(double x) const {
  const int n = static_cast<int>(t_.size());
  auto it = std::upper_bound(t_.begin(), t_.end(), x);
  int i = static_cast<int>(it - t_.begin()) - 1;
  return std::clamp(i, 0, n - 2);
}

double Pchip::value(double x) const {
  if (x <= t_.front())
    return y_.front() + m_.front() * (x - t_.front());
  if (x >= t_.back()) return y_.back() + m_.back() * (x - t_.back());
  const int i = segment(x);
  const double h = t_[i + 1] - t_[i];
  const double s = (x - t_[i]) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  return h00 * y_[i] + h * h10 * m_[i] + h01 * y_[i + 1] + h * h11 * m_[i + 1];
}

double Pchip::derivative(double x) const {
  if (x <= t_.front()) return m_.front();
  if (x >= t_.back()) return m_.back();
  const int i = segment(x);
  const double h = t_[i + 1] - t_[i];
  const double s = (x - t_[i]) / h;
  const double dh00 = 6 * s * s - 6 * s;
  const double dh10 = 3 * s * s - 4 * s + 1;
  const double dh01 = -6 * s * s + 6 * s;
  const double dh11 = 3 * s * s - 2 * s;
  return (dh00 * y_[i] + h * dh10 * m_[i] + dh01 * y_[i + 1] +
          h * dh11 * m_[i + 1]) /
         h;
}

double Pchip::second_derivative(double x) const {
  if (x <= t_.front() || x >= t_.back()) return 0.0;
  const int i = segment(x);
  const double h = t_[i + 1] - t_[i];
  const double s = (x - t_[i]) / h;
  const double d2h00 = 12 * s - 6;
  const double d2h10 = 6 * s - 4;
  const double d2h01 = -12 * s + 6;
  const double d2h11 = 6 * s - 2;
  return (d2h00 * y_[i] + h * d2h10 * m_[i] + d2h01 * y_[i + 1] +
          h * d2h11 * m_[i + 1]) /
         (h * h);
}

void parallel_for(int n, const std::function<void(int)>& fn) {
  int workers = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ISODENSE_THREADS")) {
    const int cap = std::atoi(env);
    if (cap > 0) workers = std::min(workers, cap);
  }
  workers = std::max(1, std::min(workers, n));
  if (workers == 1 || n < 4) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace isodense
