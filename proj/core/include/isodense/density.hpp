#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "isodense/common.hpp"
#include "isodense/expr.hpp"
#include "isodense/numerics.hpp"

namespace isodense {

enum class ShapeClass {
  MonotoneIncreasing,
  MonotoneDecreasing,
  IncreasingDecreasing,
  DecreasingIncreasing,
  Unresolved,
};

enum class ConvexityClass {
  LogConcave,
  StrictlyLogConcave,
  LogConvex,
  StrictlyLogConvex,
};

std::string to_string(ShapeClass c);

/// Domain of a 1D density: the whole line, [0, +inf), or a compact
/// interval [lo, hi].
struct Domain {
  double lo = -kInf;
  double hi = kInf;
  static Domain line() { return {-kInf, kInf}; }
  static Domain half_line() { return {0.0, kInf}; }
  static Domain compact(double a, double b) { return {a, b}; }
  bool is_line() const { return lo == -kInf && hi == kInf; }
  bool is_compact() const { return std::isfinite(lo) && std::isfinite(hi); }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Log-density backend: psi and its one-sided derivatives.
class LogDensity {
 public:
  virtual ~LogDensity() = default;
  virtual double psi(double t, Side s = Side::Auto) const = 0;
  virtual double dpsi(double t, Side s = Side::Auto) const = 0;
  virtual double d2psi(double t, Side s = Side::Auto) const = 0;
  virtual std::vector<double> kinks(double lo, double hi) const {
    (void)lo, (void)hi;
    return {};
  }
};

/// psi given by a parsed expression; derivatives are symbolic.
class ExprLogDensity : public LogDensity {
 public:
  ExprLogDensity(expr::Ast psi, expr::Bindings bindings = {});
  double psi(double t, Side s) const override;
  double dpsi(double t, Side s) const override;
  double d2psi(double t, Side s) const override;
  std::vector<double> kinks(double lo, double hi) const override;
  const expr::Ast& ast() const { return psi_; }

 private:
  expr::Ast psi_, dpsi_, d2psi_;
  expr::Bindings bindings_;
};

/// psi interpolated from strictly increasing samples (t_i, psi_i) by a
/// monotone cubic; interpolating psi rather than f keeps f positive.
class TabulatedLogDensity : public LogDensity {
 public:
  TabulatedLogDensity(std::vector<double> t, std::vector<double> psi);
  double psi(double t, Side s) const override;
  double dpsi(double t, Side s) const override;
  double d2psi(double t, Side s) const override;

 private:
  Pchip interp_;
};

/// psi from arbitrary callables (built-in piecewise fixtures, tests).
class CallableLogDensity : public LogDensity {
 public:
  using Fn = std::function<double(double, Side)>;
  CallableLogDensity(Fn psi, Fn dpsi, Fn d2psi,
                     std::vector<double> kink_points = {});
  double psi(double t, Side s) const override;
  double dpsi(double t, Side s) const override;
  double d2psi(double t, Side s) const override;
  std::vector<double> kinks(double lo, double hi) const override;

 private:
  Fn psi_, dpsi_, d2psi_;
  std::vector<double> kinks_;
};

/// A positive density f = e^psi on a 1D domain (or the radial profile
/// of a density on R^{n+1}).
class DensityModel {
 public:
  DensityModel(std::shared_ptr<const LogDensity> backend, Domain domain,
               int dimension = 1);

  /// psi given as an expression in x (or r).
  static DensityModel from_expression(const std::string& psi_text,
                                      Domain domain = Domain::line(),
                                      expr::Bindings params = {});
  /// The density f itself as an expression; psi = log(f) symbolically
  /// (exp(...) forms collapse, keeping the log-density exact).
  static DensityModel from_density_expression(const std::string& f_text,
                                              Domain domain = Domain::line(),
                                              expr::Bindings params = {});
  /// Radial profile delta(r) extended to the line as psi(x) = delta(|x|).
  static DensityModel radial_on_line(const std::string& delta_text,
                                     expr::Bindings params = {});
  static DensityModel from_samples(std::vector<double> t,
                                   std::vector<double> psi);
  /// CSV with two columns t, psi; optional header; strictly increasing t.
  static DensityModel from_csv(const std::string& path);

  double psi(double t, Side s = Side::Auto) const;
  double dpsi(double t, Side s = Side::Auto) const;
  double d2psi(double t, Side s = Side::Auto) const;
  double f(double t, Side s = Side::Auto) const;

  const Domain& domain() const { return domain_; }
  int dimension() const { return dimension_; }
  const std::shared_ptr<const LogDensity>& backend() const { return backend_; }

  /// Declared kinks plus any detected from abs nodes, sorted, within
  /// [lo, hi].
  std::vector<double> kinks(double lo, double hi) const;

  std::optional<ShapeClass> declared_class;
  std::optional<ConvexityClass> declared_convexity;
  std::vector<double> declared_kinks;

 private:
  std::shared_ptr<const LogDensity> backend_;
  Domain domain_;
  int dimension_;
};

struct ShapeReport {
  ShapeClass shape = ShapeClass::Unresolved;
  std::optional<double> change_point;  // x0 for the non-monotone classes
};

/// Samples psi' (one-sided at kinks) on a grid over [lo, hi] and reads
/// off the sign pattern.  A declared class short-circuits detection.
ShapeReport classify_shape(const DensityModel& density, double lo, double hi,
                           int samples = 512);

}  // namespace isodense
