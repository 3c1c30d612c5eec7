#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "isodense/region.hpp"

namespace isodense {

/// Grid-discretized region of the plane under the density exp(c|x|^2),
/// stored as per-column interval lists.  Columns are cell-centered on a
/// base axis through the origin: column k sits at base coordinate
/// (k - count/2 + 1/2) h and holds the region's slice along the
/// orthogonal direction.  frame_angle rotates the base axis in world
/// coordinates; the density is radial, so all column arithmetic is
/// frame-independent.
struct ColumnarSet {
  double h = 1.0 / 128.0;
  double c = 1.0;
  double frame_angle = 0.0;
  double half_width = 1.0;  // columns span [-half_width, half_width]
  std::vector<Region1D> columns;

  int count() const { return static_cast<int>(columns.size()); }
  double base_coord(int k) const { return -half_width + (k + 0.5) * h; }
  bool empty_set() const;
  /// Largest |(p, t)| over all interval endpoints (0 for the empty set).
  double bounding_radius() const;
};

/// Builders (rasterized in the set's frame).
ColumnarSet make_columnar(double h, double c, double half_width);
void add_disk(ColumnarSet& set, double cx, double cy, double radius);
void add_rectangle(ColumnarSet& set, double x0, double x1, double y0,
                   double y1);

/// Cumulative integral of exp(c t^2): fast evaluations of
/// G(a) = int_0^a exp(c t^2) dt and its inverse, accurate to ~1e-14
/// relative.  Shared by all per-column weighted-length computations.
class GaussExpTable {
 public:
  GaussExpTable(double c, double t_max);
  double G(double a) const;                  // a in [0, t_max]
  double signed_cumulative(double x) const;  // sign(x) G(|x|)
  double weighted_length(const Region1D& region) const;
  double invert(double target) const;  // G(a) = target, a >= 0
  double t_max() const { return t_max_; }

 private:
  double c_;
  double t_max_;
  double cell_;
  std::vector<double> prefix_;
};

/// Weighted volume: sum over columns of h times the 1D weighted length
/// of the column under the restricted density exp(c p^2) exp(c t^2).
double weighted_volume_columnar(const ColumnarSet& set);

/// Weighted perimeter estimator: polyline graph terms between columns
/// with matching interval counts plus vertical-wall terms at count
/// transitions.  Accuracy degrades near tangential boundaries (the
/// walls absorb the caps at O(sqrt(h))).
double weighted_perimeter_columnar(const ColumnarSet& set);

/// Stated one-step discretization allowance of the perimeter estimator
/// under symmetrization: O(sqrt(h)) scaled by the set's perimeter.
double perimeter_step_allowance(const ColumnarSet& set,
                                double perimeter_before);

/// Steiner symmetrization along the world coordinate axis (0 = x,
/// 1 = y): every column through the base hyperplane is replaced by the
/// centered interval of equal weighted length (the 1D isoperimetric
/// minimizer for the restricted density).  Resamples first when the
/// stored columns do not run along the requested axis.
ColumnarSet steiner_symmetrize(const ColumnarSet& set, int axis);

/// Steiner symmetrization along the lines of direction angle theta.
ColumnarSet steiner_symmetrize_direction(const ColumnarSet& set,
                                         double theta);

/// Re-rasterizes the set into the frame with the given base-axis angle.
ColumnarSet resample(const ColumnarSet& set, double frame_angle);

/// Weighted column-wise symmetric difference (sets are resampled onto
/// the first set's frame when needed).
double symmetric_difference_columnar(const ColumnarSet& a,
                                     const ColumnarSet& b);

/// Centered ball of the given weighted volume (radius by bisection on
/// the radial weighted volume), rasterized on the set's grid.
ColumnarSet ball_of_volume(const ColumnarSet& like, double volume,
                           double* radius_out = nullptr);

struct HsiangResult {
  ColumnarSet set;
  double volume_positive, volume_negative;  // halves of the input
  double relative_perimeter_positive, relative_perimeter_negative;
  bool kept_positive;
};

/// Hsiang reflection across the coordinate hyperplane through the
/// origin with the given normal (0 = base axis, 1 = column axis): keeps
/// the half with smaller relative perimeter (ties keep the positive
/// side) and mirrors it.
HsiangResult hsiang_reflect(const ColumnarSet& set, int hyperplane_normal);

struct SymmetrizationStep {
  int step;
  double angle;  // direction of the symmetrized lines, world coords
  double volume_before, volume_after;
  double perimeter_before, perimeter_after;
  double symdiff_previous;  // to the previous iterate
  double symdiff_ball;      // to the centered ball of equal volume
};

struct ConvergenceResult {
  std::vector<SymmetrizationStep> log;
  ColumnarSet final_set;
  bool converged;
  double ball_radius;
};

/// Alternates Steiner symmetrization over a direction schedule (the
/// coordinate axes, then progressively finer diagonal directions, which
/// breaks the rectangle-type fixed points of the two-axis alternation)
/// until consecutive iterates stop moving or max_steps is reached.
ConvergenceResult converge_to_ball(const ColumnarSet& set, int max_steps,
                                   double tol);

struct ConvexityCheck {
  double lhs, rhs;
  bool holds;
  bool equality;
};

/// The convexity inequality sum_j alpha_j sqrt(1 + a_j^2) >=
/// 2 alpha sqrt(1 + a^2) under sum alpha_j a_j >= 2 alpha a and
/// sum alpha_j >= 2 alpha; equality iff a_j == a for all j and
/// sum alpha_j == 2 alpha.  Precondition violations throw.
ConvexityCheck convexity_inequality(const std::vector<double>& alphas,
                                    const std::vector<double>& as,
                                    double alpha, double a);

/// JSON serialization: {"h", "window", "c", "columns": [{"p",
/// "intervals": [[a, b], ...]}, ...]}.
std::string to_json(const ColumnarSet& set);
ColumnarSet columnar_from_json(const std::string& text);

}  // namespace isodense
