#include "isodense/variational.hpp"

#include <cmath>

#include "isodense/numerics.hpp"

namespace isodense {

RadialDensity::RadialDensity(std::shared_ptr<const LogDensity> delta, int n)
    : delta_(std::move(delta)), n_(n) {
  if (!delta_) throw std::invalid_argument("RadialDensity: null profile");
  if (n_ < 1) throw std::invalid_argument("RadialDensity: n must be >= 1");
}

RadialDensity RadialDensity::from_expression(const std::string& delta_text,
                                             int n, expr::Bindings params) {
  auto ast = expr::parse(delta_text);
  return RadialDensity(
      std::make_shared<ExprLogDensity>(std::move(ast), std::move(params)), n);
}

double RadialDensity::delta(double r, Side s) const { return delta_->psi(r, s); }
double RadialDensity::ddelta(double r, Side s) const {
  return delta_->dpsi(r, s);
}
double RadialDensity::d2delta(double r, Side s) const {
  return delta_->d2psi(r, s);
}

double mean_curvature_sphere(const RadialDensity& density, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("sphere radius must be positive");
  return density.n() / r + density.ddelta(r);
}

double mean_curvature_hyperplane(const RadialDensity& density, double c,
                                 const std::vector<double>& p) {
  double r2 = 0.0;
  for (double v : p) r2 += v * v;
  const double r = std::sqrt(r2);
  if (r < 1e-12) {
    // Limit of delta'(r)/r at 0: exists iff delta'(0) = 0.
    if (std::abs(density.ddelta(0.0, Side::Right)) > 1e-10)
      throw EvalError("delta'(r)/r has no finite limit at r = 0");
    return -c * density.d2delta(0.0, Side::Right);
  }
  return -c * density.ddelta(r) / r;
}

RigidityVerdict hyperplane_cmc_rigidity(const RadialDensity& density,
                                        double r0, double r1, double tol) {
  if (!(0.0 < r0 && r0 < r1))
    throw std::invalid_argument("need 0 < r0 < r1");
  const int samples = 256;
  double sum = 0.0, lo = kInf, hi = -kInf;
  for (int i = 0; i <= samples; ++i) {
    const double r = r0 + (r1 - r0) * i / samples;
    const double g = density.ddelta(r) / r;
    sum += g;
    lo = std::min(lo, g);
    hi = std::max(hi, g);
  }
  const double mean = sum / (samples + 1);
  RigidityVerdict v;
  v.max_deviation = std::max(hi - mean, mean - lo);
  v.constant = v.max_deviation <= tol;
  v.fitted_a = 0.5 * mean;
  return v;
}

StabilityReport ball_stability(const RadialDensity& density, double r,
                               int max_mode) {
  if (!(r > 0.0)) throw std::invalid_argument("ball radius must be positive");
  StabilityReport report;
  report.radius = r;
  report.delta_second = density.d2delta(r);
  report.stable = report.delta_second >= 0.0;
  const double fr = density.f(r);
  const int n = density.n();
  for (int l = 1; l <= max_mode; ++l) {
    const double lambda = static_cast<double>(l) * (l + n - 1);
    const double value = fr * ((lambda - n) / (r * r) + report.delta_second);
    report.mode_values.emplace_back(l, value);
  }
  return report;
}

// ---------------------------------------------------------------------------
// First variation checks.

namespace {

// Weighted perimeter and volume of the radial graph rho(.) over the
// unit sphere directions, for n = 1 (circle) and n = 2 (axisymmetric).
struct SphereGeometry {
  const RadialDensity& d;
  SphereQuadrature q;
  std::vector<double> gl_nodes, gl_weights;

  explicit SphereGeometry(const RadialDensity& density,
                          const SphereQuadrature& quad)
      : d(density), q(quad) {
    if (d.n() == 2) gauss_legendre(q.polar_points, gl_nodes, gl_weights);
  }

  // rho(t; mu) = r - t u(mu) where mu = cos(polar angle) for n = 2 and
  // the angle itself parametrizes the circle for n = 1.
  double perimeter(double r, FlowVelocity u, double t) const {
    if (d.n() == 1) {
      const int m = q.azimuth_points;
      double sum = 0.0;
      for (int i = 0; i < m; ++i) {
        const double theta = 2.0 * M_PI * i / m;
        const double uu = u == FlowVelocity::Constant ? 1.0 : std::cos(theta);
        const double du = u == FlowVelocity::Constant ? 0.0 : -std::sin(theta);
        const double rho = r - t * uu;
        const double drho = -t * du;
        sum += std::exp(d.delta(rho)) * std::sqrt(rho * rho + drho * drho);
      }
      return sum * 2.0 * M_PI / m;
    }
    // n = 2, axisymmetric in azimuth.
    double sum = 0.0;
    for (int i = 0; i < q.polar_points; ++i) {
      const double mu = gl_nodes[i];
      const double uu = u == FlowVelocity::Constant ? 1.0 : mu;
      const double rho = r - t * uu;
      // d rho / d theta = -t du/dtheta; du/dtheta = -sin(theta).
      const double drho_dtheta =
          u == FlowVelocity::Constant ? 0.0 : t * std::sqrt(1.0 - mu * mu);
      sum += gl_weights[i] * std::exp(d.delta(rho)) * rho *
             std::sqrt(rho * rho + drho_dtheta * drho_dtheta);
    }
    return 2.0 * M_PI * sum;
  }

  double volume(double r, FlowVelocity u, double t) const {
    auto radial_mass = [&](double rho) {
      return integrate(
          [&](double s) {
            return std::exp(d.delta(s)) * std::pow(s, d.n());
          },
          0.0, rho, {1e-13, 48, true});
    };
    if (d.n() == 1) {
      const int m = q.azimuth_points;
      double sum = 0.0;
      for (int i = 0; i < m; ++i) {
        const double theta = 2.0 * M_PI * i / m;
        const double uu = u == FlowVelocity::Constant ? 1.0 : std::cos(theta);
        sum += radial_mass(r - t * uu);
      }
      return sum * 2.0 * M_PI / m;
    }
    double sum = 0.0;
    for (int i = 0; i < q.polar_points; ++i) {
      const double uu =
          u == FlowVelocity::Constant ? 1.0 : gl_nodes[i];
      sum += gl_weights[i] * radial_mass(r - t * uu);
    }
    return 2.0 * M_PI * sum;
  }

  // Integral of f u over the sphere of radius r (f is constant there).
  double weighted_flux(double r, FlowVelocity u) const {
    const double fr = d.f(r);
    if (u == FlowVelocity::FirstHarmonic) return 0.0;  // odd symmetry
    const double area = d.n() == 1 ? 2.0 * M_PI * r : 4.0 * M_PI * r * r;
    return fr * area;
  }
};

}  // namespace

FirstVariationResult first_variation_sphere(const RadialDensity& density,
                                            double r, FlowVelocity u,
                                            double h,
                                            const SphereQuadrature& q) {
  if (density.n() != 1 && density.n() != 2)
    throw std::invalid_argument("first variation implemented for n = 1, 2");
  SphereGeometry geo(density, q);
  FirstVariationResult res;
  res.dP_fd = (geo.perimeter(r, u, h) - geo.perimeter(r, u, -h)) / (2.0 * h);
  res.dV_fd = (geo.volume(r, u, h) - geo.volume(r, u, -h)) / (2.0 * h);
  const double flux = geo.weighted_flux(r, u);
  res.dV_analytic = -flux;
  res.dP_analytic = -mean_curvature_sphere(density, r) * flux;
  res.residual_v = std::abs(res.dV_fd - res.dV_analytic);
  res.residual_p = std::abs(res.dP_fd - res.dP_analytic);
  return res;
}

FirstVariationResult first_variation_hyperplane(const RadialDensity& density,
                                                double c, double h,
                                                const SphereQuadrature& q) {
  (void)q;  // the patch integrals are adaptive
  if (density.n() != 1)
    throw std::invalid_argument(
        "hyperplane first variation implemented for n = 1 (lines in R^2)");
  // Line {y = c} in R^2, patch x in [-1, 1], inner normal N = -e_y for
  // the region {y < c}; constant unit flow moves the line to y = c - t.
  auto patch_perimeter = [&](double t) {
    return integrate(
        [&](double x) {
          const double rr = std::sqrt(x * x + (c - t) * (c - t));
          return std::exp(density.delta(rr));
        },
        -1.0, 1.0, {1e-13, 48, true});
  };
  auto patch_volume_delta = [&](double t) {
    // V(t) - V(0) over the patch column.
    return -integrate(
        [&](double x) {
          return integrate(
              [&](double y) {
                return std::exp(density.delta(std::sqrt(x * x + y * y)));
              },
              c - t, c, {1e-13, 48, true});
        },
        -1.0, 1.0, {1e-11, 40, true});
  };
  FirstVariationResult res;
  res.dP_fd = (patch_perimeter(h) - patch_perimeter(-h)) / (2.0 * h);
  res.dV_fd = (patch_volume_delta(h) - patch_volume_delta(-h)) / (2.0 * h);
  res.dV_analytic = -patch_perimeter(0.0);
  // With respect to the inward normal, H_psi = +c delta'(r)/r here, so
  // P'(0) = -int H_psi f u = -c int (delta'/r) f.
  res.dP_analytic = -integrate(
      [&](double x) {
        const double rr = std::sqrt(x * x + c * c);
        const double g = rr < 1e-12 ? density.d2delta(0.0, Side::Right)
                                    : density.ddelta(rr) / rr;
        return c * g * std::exp(density.delta(rr));
      },
      -1.0, 1.0, {1e-13, 48, true});
  res.residual_v = std::abs(res.dV_fd - res.dV_analytic);
  res.residual_p = std::abs(res.dP_fd - res.dP_analytic);
  return res;
}

ConnectednessVerdict connectedness_criterion(int boundary_components,
                                             bool log_concave,
                                             bool strictly_log_concave) {
  if (boundary_components < 2) return ConnectednessVerdict::NoConclusion;
  if (strictly_log_concave) return ConnectednessVerdict::ViolatesStability;
  if (log_concave) return ConnectednessVerdict::AllowedIfTotallyGeodesic;
  return ConnectednessVerdict::NoConclusion;
}

std::string to_string(ConnectednessVerdict v) {
  switch (v) {
    case ConnectednessVerdict::ViolatesStability:
      return "stable regions must have connected boundary";
    case ConnectednessVerdict::AllowedIfTotallyGeodesic:
      return "multiple components allowed only if totally geodesic";
    case ConnectednessVerdict::NoConclusion:
      return "no conclusion";
  }
  return "no conclusion";
}

}  // namespace isodense
