#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "isodense/measure.hpp"

namespace isodense {

enum class MinimizerKind {
  HalfLineLeft,            // (-inf, x)
  HalfLineRight,           // (x, +inf)
  BoundedInterval,         // (a, b)
  ComplementOfInterval,    // domain minus [a, b]
  TwoHalfLines,            // (-inf, x) u (y, +inf)
  BoundaryAnchoredInterval // (domain endpoint, x) or (x, domain endpoint)
};

std::string to_string(MinimizerKind k);

struct MinimizerDescriptor {
  MinimizerKind kind;
  double x = kNaN;  // first endpoint (anchor endpoint for anchored kind)
  double y = kNaN;  // second endpoint where applicable
  double perimeter = kNaN;
  /// True when a continuum of minimizers exists; x/y then give a
  /// representative and family_range the sweep of the left endpoint.
  bool family = false;
  std::array<double, 2> family_range{kNaN, kNaN};

  /// The region this descriptor denotes, within the given domain.
  Region1D region(const Domain& domain) const;
};

struct ProfileResult {
  double volume = 0.0;
  double infimum_perimeter = 0.0;
  bool attained = false;
  std::vector<MinimizerDescriptor> minimizers;
  std::optional<double> fleeing_end;  // +-inf when not attained
};

struct ProfileOptions {
  double tie_tol = 1e-9;         // minimizers within this are reported together
  int scan_samples = 512;        // coarse scan of the interval perimeter P(x)
  double golden_xtol = 1e-12;
  bool force_unresolved = false; // proceed even when classify says unresolved
};

/// Isoperimetric profile on the real line for a unimodal density:
/// infimum perimeter at weighted volume V, attainment, and all
/// minimizers within the tie tolerance.
ProfileResult solve_profile(const DensityModel& density, double volume,
                            const ProfileOptions& opts = {});

/// Same problem on [0, +inf); with free_boundary the endpoint 0 never
/// contributes to perimeter.
ProfileResult solve_profile_halfline(const DensityModel& density,
                                     double volume, bool free_boundary,
                                     const ProfileOptions& opts = {});

/// Same problem on a compact interval [a, b].
ProfileResult solve_profile_compact(const DensityModel& density,
                                    double volume, bool free_boundary,
                                    const ProfileOptions& opts = {});

struct StationarityResult {
  bool stationary;
  double residual;      // min over one-sided combinations
  double residual_rr;   // right at a, right at b
  double residual_ll;   // left at a, left at b
};

/// Checks |psi'(a) + psi'(b)| <= 1e-9 (interval stationarity).
StationarityResult stationarity_check(const DensityModel& density, double a,
                                      double b);

struct BruteForceOptions {
  int grid_points = 384;
  int max_components = 2;
  std::optional<std::array<double, 2>> window;  // auto-sized when absent
  double volume_slack_cells = 1.0;  // volume tolerance in units of the
                                    // largest cell mass
};

struct BruteForceResult {
  double perimeter = kInf;
  Region1D region;
  double volume = 0.0;
  double volume_tolerance = 0.0;
  std::array<double, 2> window{0.0, 0.0};
  double cell_width = 0.0;
  bool truncated = false;  // window accepted as a stated truncation
};

/// Independent oracle: exhaustive search over unions of at most
/// max_components grid-aligned intervals (half-lines included) meeting
/// the volume constraint within the grid tolerance.
BruteForceResult brute_force_profile(const DensityModel& density,
                                     double volume,
                                     const BruteForceOptions& opts = {});

}  // namespace isodense
