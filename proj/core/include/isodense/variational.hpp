#pragma once

#include <memory>
#include <string>
#include <vector>

#include "isodense/density.hpp"

namespace isodense {

/// Radial density e^{delta(|x|)} on R^{n+1}; n is the dimension of the
/// hypersurfaces (spheres) under study.
class RadialDensity {
 public:
  RadialDensity(std::shared_ptr<const LogDensity> delta, int n);
  static RadialDensity from_expression(const std::string& delta_text, int n,
                                       expr::Bindings params = {});

  double delta(double r, Side s = Side::Auto) const;
  double ddelta(double r, Side s = Side::Auto) const;
  double d2delta(double r, Side s = Side::Auto) const;
  double f(double r) const { return std::exp(delta(r)); }
  int n() const { return n_; }
  const std::shared_ptr<const LogDensity>& profile() const { return delta_; }

 private:
  std::shared_ptr<const LogDensity> delta_;
  int n_;
};

/// H_psi of the radius-r sphere about the origin w.r.t. the inner
/// normal: n/r + delta'(r).
double mean_curvature_sphere(const RadialDensity& density, double r);

/// H_psi of the hyperplane {<x,u> = c} at a point p on it, with respect
/// to the defining direction u: -c delta'(r)/r with r = |p|.  At r = 0
/// the limit delta''(0) is used when delta'(0) = 0; otherwise the limit
/// does not exist.  Constancy (the quantity the rigidity test checks)
/// does not depend on the normal's orientation.
double mean_curvature_hyperplane(const RadialDensity& density, double c,
                                 const std::vector<double>& p);

struct RigidityVerdict {
  bool constant;          // delta'(r)/r constant on the window within tol
  double fitted_a;        // half the constant: delta ~ a r^2 + b on window
  double max_deviation;   // max |delta'(r)/r - mean| observed
};

/// Tests whether delta'(r)/r is constant on [r0, r1]: the only radial
/// form admitting constant-H_psi hyperplanes off the origin.
RigidityVerdict hyperplane_cmc_rigidity(const RadialDensity& density,
                                        double r0, double r1,
                                        double tol = 1e-9);

struct StabilityReport {
  double radius;
  double delta_second;
  bool stable;
  /// (spherical harmonic degree l, index-form value per unit L2 norm).
  std::vector<std::pair<int, double>> mode_values;
};

/// Stability of the centered ball of radius r: stable iff
/// delta''(r) >= 0; per unit L2(Sigma) norm the degree-l mode value is
/// f(r) ((lambda_l - n)/r^2 + delta''(r)) with lambda_l = l(l+n-1).
StabilityReport ball_stability(const RadialDensity& density, double r,
                               int max_mode = 8);

enum class FlowVelocity { Constant, FirstHarmonic };

struct FirstVariationResult {
  double dV_fd, dV_analytic;
  double dP_fd, dP_analytic;
  double residual_v, residual_p;
};

struct SphereQuadrature {
  int polar_points = 64;     // Gauss-Legendre (n = 2)
  int azimuth_points = 128;  // uniform (n = 1 uses this alone)
};

/// Central-difference check of the first-variation identities on the
/// radius-r sphere under a normal flow of the given velocity.
FirstVariationResult first_variation_sphere(const RadialDensity& density,
                                            double r, FlowVelocity u,
                                            double h,
                                            const SphereQuadrature& q = {});

/// Same check on a patch of the hyperplane {x_{n+1} = c} under the
/// constant normal flow (the patch is the unit ball of the plane).
FirstVariationResult first_variation_hyperplane(const RadialDensity& density,
                                                double c, double h,
                                                const SphereQuadrature& q = {});

enum class ConnectednessVerdict {
  ViolatesStability,        // strictly log-concave, >= 2 components
  AllowedIfTotallyGeodesic, // log-concave (not strict), >= 2 components
  NoConclusion,
};

/// Boundary-connectedness criterion for stable regions under
/// log-concave densities.
ConnectednessVerdict connectedness_criterion(int boundary_components,
                                             bool log_concave,
                                             bool strictly_log_concave);

std::string to_string(ConnectednessVerdict v);

}  // namespace isodense
