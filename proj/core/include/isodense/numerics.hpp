#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "isodense/common.hpp"

namespace isodense {

using RealFn = std::function<double(double)>;

struct QuadratureOptions {
  double abs_tol = 1e-12;
  int max_depth = 48;
  bool throw_on_failure = true;
};

/// Adaptive Simpson integration of f over the finite interval [a, b].
double integrate(const RealFn& f, double a, double b,
                 const QuadratureOptions& opts = {});

/// Improper integral of f over [a, +inf), mapped to (0, 1] via
/// x = a + (1/u - 1).  Assumes the integrand decays superpolynomially;
/// non-integrable tails should be screened out beforehand (see
/// tail_is_finite).
double integrate_to_pinf(const RealFn& f, double a,
                         const QuadratureOptions& opts = {});

/// Mirror of integrate_to_pinf on (-inf, b].
double integrate_to_minf(const RealFn& f, double b,
                         const QuadratureOptions& opts = {});

struct TailProbe {
  bool finite;
  double mass;  // meaningful only when finite
};

/// Decides whether \int_start^{+inf} f (direction=+1) or the mirrored
/// integral (direction=-1) converges.  Successive dyadic windows are
/// integrated until either the running sum exceeds 1e12 (infinite), or
/// the window contributions pass a Cauchy test at relative 1e-10.
TailProbe probe_tail(const RealFn& f, double start, int direction,
                     const QuadratureOptions& opts = {});

/// Root of a continuous monotone-bracketed function via bisection,
/// refined to |b - a| <= xtol.  Requires f(a) and f(b) of opposite sign
/// (either may be zero).
double bisect(const RealFn& f, double a, double b, double xtol = 1e-13,
              int max_iter = 200);

/// Minimum of a unimodal function on [a, b] by golden-section search.
double golden_section_min(const RealFn& f, double a, double b,
                          double xtol = 1e-12);

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes,
                    std::vector<double>& weights);

/// Monotone piecewise-cubic interpolant (Fritsch-Carlson slopes).
/// Values outside [t.front(), t.back()] are linearly extrapolated.
class Pchip {
 public:
  Pchip() = default;
  Pchip(std::vector<double> t, std::vector<double> y);
  double value(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;
  double t_min() const { return t_.front(); }
  double t_max() const { return t_.back(); }

 private:
  int segment(double x) const;
  std::vector<double> t_, y_, m_;  // knots, values, slopes
};

/// Runs fn(i) for i in [0, n) on up to ISODENSE_THREADS workers
/// (hardware concurrency by default).  Falls back to serial for small n.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace isodense
