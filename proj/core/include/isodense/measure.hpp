#pragma once

#include <memory>

#include "isodense/density.hpp"
#include "isodense/region.hpp"

namespace isodense {

enum class BoundaryPolicy { CountAll, FreeAtDomainEndpoints };

/// Weighted volume of the region: sum of integrals of f over the
/// intervals.  Returns +inf when an unbounded interval reaches an end
/// of infinite measure.
double weighted_volume(const DensityModel& density, const Region1D& region,
                       const QuadratureOptions& opts = {});

/// Weighted perimeter in dimension one: sum of f over the finite
/// boundary points.  Domain endpoints are skipped under the free
/// policy; infinite endpoints never contribute.
double weighted_perimeter_1d(const DensityModel& density,
                             const Region1D& region,
                             BoundaryPolicy policy = BoundaryPolicy::CountAll);

/// Cumulative weighted measure V(x) = int_{anchor}^{x} f, with end
/// masses and finiteness flags.  Immutable once built; queries resolve
/// against a precomputed node table plus a short local quadrature.
class MeasureTable {
 public:
  explicit MeasureTable(const DensityModel& density,
                        const QuadratureOptions& opts = {});

  double anchor() const { return anchor_; }
  /// Signed cumulative measure from the anchor.
  double cumulative(double x) const;
  /// Mass of (a, b) inside the domain; either bound may be infinite.
  double volume_between(double a, double b) const;
  /// x such that cumulative(x) = v (v within the reachable range).
  double invert(double v) const;

  bool lower_end_finite() const { return lower_finite_; }
  bool upper_end_finite() const { return upper_finite_; }
  /// Mass between anchor and the end (+inf when infinite).
  double lower_end_mass() const { return lower_mass_; }
  double upper_end_mass() const { return upper_mass_; }
  double total() const;

  const DensityModel& density() const { return density_; }

 private:
  double integrate_f(double a, double b) const;

  DensityModel density_;
  QuadratureOptions opts_;
  double anchor_ = 0.0;
  bool lower_finite_ = false, upper_finite_ = false;
  double lower_mass_ = kInf, upper_mass_ = kInf;
  std::vector<double> nodes_;       // sorted grid over the core window
  std::vector<double> cumulative_;  // V at the nodes
};

std::shared_ptr<const MeasureTable> build_measure_table(
    const DensityModel& density, const QuadratureOptions& opts = {});

}  // namespace isodense
