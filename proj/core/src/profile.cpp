#include "isodense/profile.hpp"

#include <algorithm>
#include <cmath>

namespace isodense {

std::string to_string(MinimizerKind k) {
  switch (k) {
    case MinimizerKind::HalfLineLeft: return "half-line-left";
    case MinimizerKind::HalfLineRight: return "half-line-right";
    case MinimizerKind::BoundedInterval: return "bounded-interval";
    case MinimizerKind::ComplementOfInterval: return "complement-of-interval";
    case MinimizerKind::TwoHalfLines: return "two-half-lines";
    case MinimizerKind::BoundaryAnchoredInterval:
      return "boundary-anchored-interval";
  }
  return "unknown";
}

Region1D MinimizerDescriptor::region(const Domain& dom) const {
  switch (kind) {
    case MinimizerKind::HalfLineLeft:
      return Region1D::interval(dom.lo, x);
    case MinimizerKind::HalfLineRight:
      return Region1D::interval(x, dom.hi);
    case MinimizerKind::BoundedInterval:
      return Region1D::interval(x, y);
    case MinimizerKind::ComplementOfInterval:
      return Region1D({Interval{dom.lo, x}, Interval{y, dom.hi}});
    case MinimizerKind::TwoHalfLines:
      return Region1D({Interval{-kInf, x}, Interval{y, kInf}});
    case MinimizerKind::BoundaryAnchoredInterval:
      return Region1D::interval(std::min(x, y), std::max(x, y));
  }
  return {};
}

namespace {

struct Candidate {
  double perimeter;
  MinimizerDescriptor desc;
};

struct LimitInfimum {
  double perimeter;
  double end;  // +-inf
};

struct Ctx {
  const DensityModel& d;
  const MeasureTable& table;
  double V;
  ProfileOptions opts;
  bool free_boundary = false;  // domain endpoints cost nothing
  double f(double x) const { return d.f(x); }
  double endpoint_cost(double x) const { return free_boundary ? 0.0 : d.f(x); }
};

constexpr double kPlateauHorizon = 64.0;

struct EndInfo {
  double limit_f = 0.0;                // lim f at the end (may be +inf)
  bool mass_finite = false;
  std::optional<double> plateau_edge;  // innermost x with f == limit exactly
};

/// Limit of f at an infinite end by geometric tail sampling.  A plateau
/// (f equal to the limit on a terminal stretch) is certified only when
/// psi' vanishes identically there, inside a bounded horizon; a merely
/// asymptotic approach reports no plateau and hence non-attainment.
EndInfo analyze_end(const Ctx& ctx, int direction) {
  EndInfo info;
  const double anchor = ctx.table.anchor();
  info.mass_finite = direction < 0 ? ctx.table.lower_end_finite()
                                   : ctx.table.upper_end_finite();
  double prev = ctx.f(anchor + direction);
  double prev2 = kInf;
  double limit = prev;
  for (int k = 1; k <= 60; ++k) {
    const double x = anchor + direction * std::pow(2.0, k);
    const double v = ctx.f(x);
    if (v > 1e15) {
      info.limit_f = kInf;
      return info;
    }
    limit = v;
    const double tol = 1e-11 * std::max(1.0, v);
    if (std::abs(v - prev) <= tol && std::abs(prev - prev2) <= tol) break;
    prev2 = prev;
    prev = v;
  }
  info.limit_f = std::max(limit, 0.0);

  if (!info.mass_finite && std::isfinite(info.limit_f) &&
      info.limit_f > 0.0) {
    const double tol = 1e-12 * std::max(1.0, info.limit_f);
    const double far = anchor + direction * kPlateauHorizon;
    const double mid = anchor + direction * 0.5 * kPlateauHorizon;
    const Side side = direction > 0 ? Side::Right : Side::Left;
    const bool certified = std::abs(ctx.f(far) - info.limit_f) <= tol &&
                           ctx.d.dpsi(far, side) == 0.0 &&
                           ctx.d.dpsi(mid, side) == 0.0;
    if (certified) {
      auto offset = [&](double x) {
        return std::abs(ctx.f(x) - info.limit_f) - tol;
      };
      if (offset(anchor) <= 0.0) {
        info.plateau_edge = anchor;
      } else {
        info.plateau_edge =
            bisect(offset, std::min(anchor, far), std::max(anchor, far),
                   1e-12 * std::max(1.0, std::abs(far)));
      }
    }
  }
  return info;
}

/// Degenerate end of the interval family: the point the shrinking side
/// collapses to (a domain endpoint or +-inf) and the f-cost there.
struct FamilyEnd {
  double x;        // -inf/+inf or a finite domain endpoint
  double f_value;  // limit of f, or the endpoint cost under the policy
};

/// Volume-share parametrization of the intervals of volume V whose
/// closure contains x0: s in [0,1] is the fraction of V lying left of
/// x0.  Mass exhaustion on either side clips the range; at a clipped
/// end the interval degenerates onto the domain end and f takes the
/// FamilyEnd value there.
class IntervalFamily {
 public:
  IntervalFamily(const Ctx& ctx, double x0, double volume, FamilyEnd left,
                 FamilyEnd right)
      : ctx_(ctx), volume_(volume), left_(left), right_(right) {
    cum_x0_ = ctx.table.cumulative(x0);
    const double below = ctx.table.lower_end_mass() + cum_x0_;
    const double above = ctx.table.upper_end_mass() - cum_x0_;
    s_max_ = std::isfinite(below) ? std::min(1.0, below / volume) : 1.0;
    s_min_ = std::isfinite(above) ? std::max(0.0, 1.0 - above / volume) : 0.0;
  }

  bool feasible() const { return s_min_ <= s_max_ && volume_ > 0.0; }
  double s_min() const { return s_min_; }
  double s_max() const { return s_max_; }

  double left_endpoint(double s) const {
    const double target = cum_x0_ - s * volume_;
    const double floor = -ctx_.table.lower_end_mass();
    if (target <= floor + 1e-13 * std::max(1.0, volume_)) return left_.x;
    return ctx_.table.invert(target);
  }
  double right_endpoint(double s) const {
    const double target = cum_x0_ + (1.0 - s) * volume_;
    const double ceil = ctx_.table.upper_end_mass();
    if (target >= ceil - 1e-13 * std::max(1.0, volume_)) return right_.x;
    return ctx_.table.invert(target);
  }

  double perimeter(double s) const {
    const double a = left_endpoint(s);
    const double b = right_endpoint(s);
    const double fa = a == left_.x ? left_.f_value : ctx_.f(a);
    const double fb = b == right_.x ? right_.f_value : ctx_.f(b);
    return fa + fb;
  }

 private:
  const Ctx& ctx_;
  double volume_;
  FamilyEnd left_, right_;
  double cum_x0_ = 0.0;
  double s_min_ = 0.0, s_max_ = 1.0;
};

/// Descriptor for the interval (a, b) within the domain; a/b equal to a
/// domain end denote half-lines or anchored intervals.
MinimizerDescriptor describe_interval(const Ctx& ctx, const Domain& dom,
                                      double a, double b) {
  MinimizerDescriptor m;
  const bool at_lo = a == dom.lo;
  const bool at_hi = b == dom.hi;
  double p = 0.0;
  p += at_lo ? (std::isfinite(dom.lo) ? ctx.endpoint_cost(dom.lo) : 0.0)
             : ctx.f(a);
  p += at_hi ? (std::isfinite(dom.hi) ? ctx.endpoint_cost(dom.hi) : 0.0)
             : ctx.f(b);
  m.perimeter = p;
  if (at_lo && std::isfinite(dom.lo)) {
    m.kind = MinimizerKind::BoundaryAnchoredInterval;
    m.x = dom.lo;
    m.y = b;
  } else if (at_hi && std::isfinite(dom.hi)) {
    m.kind = MinimizerKind::BoundaryAnchoredInterval;
    m.x = dom.hi;
    m.y = a;
  } else if (at_lo) {
    m.kind = MinimizerKind::HalfLineLeft;
    m.x = b;
  } else if (at_hi) {
    m.kind = MinimizerKind::HalfLineRight;
    m.x = a;
  } else {
    m.kind = MinimizerKind::BoundedInterval;
    m.x = a;
    m.y = b;
  }
  return m;
}

/// Complement (within the domain) of an interval-type descriptor found
/// at volume total - V.
MinimizerDescriptor complement_descriptor(const Ctx& ctx, const Domain& dom,
                                          const MinimizerDescriptor& m) {
  MinimizerDescriptor c;
  c.family = m.family;
  c.family_range = m.family_range;
  switch (m.kind) {
    case MinimizerKind::HalfLineLeft:
      c.kind = MinimizerKind::HalfLineRight;
      c.x = m.x;
      c.perimeter = ctx.f(m.x);
      return c;
    case MinimizerKind::HalfLineRight:
      c.kind = MinimizerKind::HalfLineLeft;
      c.x = m.x;
      c.perimeter = ctx.f(m.x);
      return c;
    case MinimizerKind::BoundaryAnchoredInterval: {
      // Complement of (lo, y) is (y, hi) and vice versa.
      const bool anchored_lo = m.x == dom.lo;
      const double free_pt = m.y;
      if (anchored_lo) {
        if (std::isfinite(dom.hi)) {
          c.kind = MinimizerKind::BoundaryAnchoredInterval;
          c.x = dom.hi;
          c.y = free_pt;
          c.perimeter = ctx.f(free_pt) + ctx.endpoint_cost(dom.hi);
        } else {
          c.kind = MinimizerKind::HalfLineRight;
          c.x = free_pt;
          c.perimeter = ctx.f(free_pt);
        }
      } else {
        if (std::isfinite(dom.lo)) {
          c.kind = MinimizerKind::BoundaryAnchoredInterval;
          c.x = dom.lo;
          c.y = free_pt;
          c.perimeter = ctx.f(free_pt) + ctx.endpoint_cost(dom.lo);
        } else {
          c.kind = MinimizerKind::HalfLineLeft;
          c.x = free_pt;
          c.perimeter = ctx.f(free_pt);
        }
      }
      return c;
    }
    case MinimizerKind::BoundedInterval: {
      if (dom.is_line()) {
        c.kind = MinimizerKind::TwoHalfLines;
        c.x = m.x;
        c.y = m.y;
        c.perimeter = ctx.f(m.x) + ctx.f(m.y);
        return c;
      }
      c.kind = MinimizerKind::ComplementOfInterval;
      c.x = m.x;
      c.y = m.y;
      c.perimeter = ctx.f(m.x) + ctx.f(m.y);
      if (std::isfinite(dom.lo)) c.perimeter += ctx.endpoint_cost(dom.lo);
      if (std::isfinite(dom.hi)) c.perimeter += ctx.endpoint_cost(dom.hi);
      return c;
    }
    default:
      return m;
  }
}

/// Generic 1D scan: coarse sampling, golden refinement of isolated local
/// minima, and detection of flat runs at the best level (families).
/// Samples inside flat runs are not individually refined.
struct ScanOutcome {
  double best = kInf;
  std::vector<double> points;                   // isolated optima (params)
  std::vector<std::array<double, 3>> families;  // {u_lo, u_mid, u_hi}
};

ScanOutcome scan_parametrized(const RealFn& perim, double u0, double u1,
                              int n, double tie) {
  ScanOutcome out;
  if (!(u1 > u0)) {
    out.best = perim(u0);
    out.points.push_back(u0);
    return out;
  }
  auto sample = [&](double i) { return u0 + (u1 - u0) * i / n; };
  std::vector<double> ps(n + 1);
  double sample_best = kInf;
  for (int i = 0; i <= n; ++i) {
    ps[i] = perim(sample(i));
    sample_best = std::min(sample_best, ps[i]);
  }
  std::vector<std::pair<int, int>> runs;
  int run_start = -1;
  for (int i = 0; i <= n + 1; ++i) {
    const bool in = i <= n && ps[i] <= sample_best + tie;
    if (in && run_start < 0) run_start = i;
    if (!in && run_start >= 0) {
      runs.push_back({run_start, i - 1});
      run_start = -1;
    }
  }
  auto in_big_run = [&](int i) {
    for (auto [i0, i1] : runs)
      if (i1 - i0 >= 3 && i >= i0 && i <= i1) return true;
    return false;
  };
  out.best = sample_best;
  std::vector<double> refined;
  for (int i = 0; i <= n; ++i) {
    const bool lok = i == 0 || ps[i] <= ps[i - 1];
    const bool rok = i == n || ps[i] <= ps[i + 1];
    if (!(lok && rok) || in_big_run(i)) continue;
    const double u_star =
        golden_section_min(perim, sample(std::max(0.0, i - 1.0)),
                           sample(std::min<double>(n, i + 1.0)), 1e-13);
    refined.push_back(u_star);
    out.best = std::min(out.best, perim(u_star));
  }
  for (auto [i0, i1] : runs) {
    if (i1 - i0 < 3) continue;
    const double u_mid = sample(0.5 * (i0 + i1));
    if (perim(u_mid) <= out.best + tie)
      out.families.push_back({sample(i0), u_mid, sample(i1)});
  }
  for (double u : refined)
    if (perim(u) <= out.best + tie) out.points.push_back(u);
  return out;
}

/// Scans an interval family and reports minima within the tie tolerance
/// of the family's best; flat stretches become family descriptors.
void scan_family(const Ctx& ctx, const Domain& dom, const IntervalFamily& fam,
                 std::vector<Candidate>& out) {
  if (!fam.feasible()) return;
  const ScanOutcome sc = scan_parametrized(
      [&](double s) { return fam.perimeter(s); }, fam.s_min(), fam.s_max(),
      ctx.opts.scan_samples, ctx.opts.tie_tol);
  for (double s : sc.points) {
    MinimizerDescriptor m = describe_interval(ctx, dom, fam.left_endpoint(s),
                                              fam.right_endpoint(s));
    out.push_back({m.perimeter, m});
  }
  for (auto [sa, sm, sb] : sc.families) {
    MinimizerDescriptor m = describe_interval(ctx, dom, fam.left_endpoint(sm),
                                              fam.right_endpoint(sm));
    m.family = true;
    m.family_range = {fam.left_endpoint(sb), fam.left_endpoint(sa)};
    out.push_back({m.perimeter, m});
  }
}

/// Intervals of volume V inside the plateau where f equals its limit at
/// an infinite end: the attained form of the fleeing infimum.
std::optional<Candidate> plateau_candidate(const Ctx& ctx,
                                           const EndInfo& info,
                                           int direction) {
  if (!info.plateau_edge) return std::nullopt;
  const double edge = *info.plateau_edge;
  const double perim = 2.0 * info.limit_f;
  MinimizerDescriptor m;
  m.kind = MinimizerKind::BoundedInterval;
  m.family = true;
  m.perimeter = perim;
  if (direction > 0) {
    m.x = edge;
    m.y = ctx.table.invert(ctx.table.cumulative(edge) + ctx.V);
    m.family_range = {edge, kInf};
  } else {
    m.y = edge;
    m.x = ctx.table.invert(ctx.table.cumulative(edge) - ctx.V);
    m.family_range = {-kInf, m.x};
  }
  return Candidate{perim, m};
}

bool descriptor_close(const MinimizerDescriptor& a,
                      const MinimizerDescriptor& b) {
  if (a.kind != b.kind || a.family != b.family) return false;
  auto close = [](double u, double v) {
    if (u == v) return true;  // covers matching infinities
    return std::abs(u - v) <= 1e-8 * std::max({1.0, std::abs(u), std::abs(v)});
  };
  return close(a.x, b.x) && (std::isnan(a.y) == std::isnan(b.y)) &&
         (std::isnan(a.y) || close(a.y, b.y));
}

ProfileResult assemble(const Ctx& ctx, std::vector<Candidate> attained,
                       const std::vector<LimitInfimum>& limits) {
  ProfileResult result;
  result.volume = ctx.V;
  double best_attained = kInf;
  for (const Candidate& c : attained)
    best_attained = std::min(best_attained, c.perimeter);
  double best_limit = kInf;
  double limit_end = kInf;
  for (const LimitInfimum& l : limits) {
    if (l.perimeter < best_limit) {
      best_limit = l.perimeter;
      limit_end = l.end;
    }
  }
  const double tie = ctx.opts.tie_tol;
  if (best_limit < best_attained - tie) {
    result.infimum_perimeter = best_limit;
    result.attained = false;
    result.fleeing_end = limit_end;
    return result;
  }
  result.infimum_perimeter = std::min(best_attained, best_limit);
  result.attained = true;
  std::sort(attained.begin(), attained.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.perimeter != b.perimeter) return a.perimeter < b.perimeter;
              return a.desc.kind < b.desc.kind;
            });
  for (const Candidate& c : attained) {
    if (c.perimeter > best_attained + tie) break;
    bool dup = false;
    for (const MinimizerDescriptor& m : result.minimizers)
      if (descriptor_close(m, c.desc)) dup = true;
    if (!dup) result.minimizers.push_back(c.desc);
  }
  return result;
}

void require_volume_in_range(const Ctx& ctx) {
  if (!(ctx.V > 0.0)) throw std::invalid_argument("volume must be positive");
  const double total = ctx.table.total();
  if (std::isfinite(total) && ctx.V >= total)
    throw std::invalid_argument("volume must be below the total measure " +
                                std::to_string(total));
}

}  // namespace

// ---------------------------------------------------------------------------
// Whole line.

ProfileResult solve_profile(const DensityModel& density, double volume,
                            const ProfileOptions& opts) {
  if (!density.domain().is_line())
    throw std::invalid_argument("solve_profile expects a density on R");
  const MeasureTable table(density);
  Ctx ctx{density, table, volume, opts};
  require_volume_in_range(ctx);
  const Domain dom = density.domain();

  // Classification window: bulk of the relevant mass plus a margin.
  double w_lo = -16.0, w_hi = 16.0;
  {
    const double probe_l =
        std::min({4.0 * volume,
                  table.lower_end_finite() ? 0.999 * table.lower_end_mass()
                                           : kInf,
                  1e6});
    if (probe_l > 0.0) w_lo = std::min(w_lo, table.invert(-probe_l) - 1.0);
    const double probe_r =
        std::min({4.0 * volume,
                  table.upper_end_finite() ? 0.999 * table.upper_end_mass()
                                           : kInf,
                  1e6});
    if (probe_r > 0.0) w_hi = std::max(w_hi, table.invert(probe_r) + 1.0);
  }
  const ShapeReport shape = classify_shape(density, w_lo, w_hi);
  if (shape.shape == ShapeClass::Unresolved && !opts.force_unresolved)
    throw std::invalid_argument(
        "density shape is unresolved; use the brute-force oracle");

  const EndInfo left = analyze_end(ctx, -1);
  const EndInfo right = analyze_end(ctx, +1);

  std::vector<Candidate> attained;
  std::vector<LimitInfimum> limits;

  // Half-lines into finite-measure ends.
  if (table.lower_end_finite()) {
    const double t = table.invert(volume - table.lower_end_mass());
    attained.push_back({ctx.f(t), describe_interval(ctx, dom, -kInf, t)});
  }
  if (table.upper_end_finite()) {
    const double t = table.invert(table.upper_end_mass() - volume);
    attained.push_back({ctx.f(t), describe_interval(ctx, dom, t, kInf)});
  }

  // Fleeing infima and their attained plateau forms at infinite-measure
  // ends.
  for (int dir : {-1, +1}) {
    const EndInfo& info = dir < 0 ? left : right;
    if (info.mass_finite || !std::isfinite(info.limit_f)) continue;
    if (auto c = plateau_candidate(ctx, info, dir)) {
      attained.push_back(*c);
    } else {
      limits.push_back({2.0 * info.limit_f, dir < 0 ? -kInf : kInf});
    }
  }

  // Bounded intervals through the mode/antimode, plus complements when
  // the total measure is finite.
  const bool has_center = shape.shape == ShapeClass::IncreasingDecreasing ||
                          shape.shape == ShapeClass::DecreasingIncreasing;
  if (has_center) {
    const double x0 = shape.change_point.value_or(0.0);
    const FamilyEnd fl{-kInf, left.limit_f};
    const FamilyEnd fr{kInf, right.limit_f};
    scan_family(ctx, dom, IntervalFamily(ctx, x0, volume, fl, fr), attained);
    const double total = table.total();
    if (std::isfinite(total)) {
      std::vector<Candidate> comp;
      scan_family(ctx, dom, IntervalFamily(ctx, x0, total - volume, fl, fr),
                  comp);
      for (Candidate& c : comp) {
        c.desc = complement_descriptor(ctx, dom, c.desc);
        c.perimeter = c.desc.perimeter;
        attained.push_back(c);
      }
    }
  }

  return assemble(ctx, std::move(attained), limits);
}

// ---------------------------------------------------------------------------
// Shared sweep over ALL intervals of a given volume (finite total mass):
// parametrized by the mass left of the interval.

namespace {

void sweep_all_intervals(const Ctx& ctx, const Domain& dom, double vol,
                         bool as_complement, std::vector<Candidate>& out) {
  const MeasureTable& table = ctx.table;
  const double total = table.total();
  const double slack = total - vol;
  const double cum_lo = table.cumulative(dom.lo);
  auto endpoints = [&](double u) {
    double a = u <= 0.0 ? dom.lo : table.invert(cum_lo + u * slack);
    double b = u >= 1.0 ? dom.hi : table.invert(cum_lo + u * slack + vol);
    if (u > 0.0 && a <= dom.lo) a = dom.lo;
    if (u < 1.0 && b >= dom.hi) b = dom.hi;
    return std::pair<double, double>{a, b};
  };
  auto perim = [&](double u) {
    auto [a, b] = endpoints(u);
    return describe_interval(ctx, dom, a, b).perimeter;
  };
  const ScanOutcome sc = scan_parametrized(perim, 0.0, 1.0,
                                           ctx.opts.scan_samples,
                                           ctx.opts.tie_tol);
  std::vector<Candidate> local;
  for (double u : sc.points) {
    auto [a, b] = endpoints(u);
    MinimizerDescriptor m = describe_interval(ctx, dom, a, b);
    local.push_back({m.perimeter, m});
  }
  for (auto [ua, um, ub] : sc.families) {
    auto [a, b] = endpoints(um);
    MinimizerDescriptor m = describe_interval(ctx, dom, a, b);
    m.family = true;
    m.family_range = {endpoints(ua).first, endpoints(ub).first};
    local.push_back({m.perimeter, m});
  }
  for (Candidate& c : local) {
    if (as_complement) {
      c.desc = complement_descriptor(ctx, dom, c.desc);
      c.perimeter = c.desc.perimeter;
    }
    out.push_back(c);
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Half-line [0, +inf).

ProfileResult solve_profile_halfline(const DensityModel& density,
                                     double volume, bool free_boundary,
                                     const ProfileOptions& opts) {
  const Domain dom = density.domain();
  if (!(dom.lo == 0.0 && dom.hi == kInf))
    throw std::invalid_argument("density domain must be [0, +inf)");
  const MeasureTable table(density);
  Ctx ctx{density, table, volume, opts, free_boundary};
  require_volume_in_range(ctx);

  double w_hi = 16.0;
  if (table.upper_end_finite())
    w_hi = std::max(w_hi,
                    table.invert(std::min(4.0 * volume,
                                          0.999 * table.upper_end_mass())) +
                        1.0);
  const ShapeReport shape = classify_shape(density, 0.0, w_hi);
  if (shape.shape == ShapeClass::Unresolved && !opts.force_unresolved)
    throw std::invalid_argument(
        "density shape is unresolved; use the brute-force oracle");

  const EndInfo right = analyze_end(ctx, +1);

  std::vector<Candidate> attained;
  std::vector<LimitInfimum> limits;

  // Boundary-anchored intervals (0, x).
  attained.push_back(
      {0.0, describe_interval(ctx, dom, 0.0, table.invert(volume))});
  attained.back().perimeter = attained.back().desc.perimeter;

  // Half-lines containing +inf, or the fleeing infimum there.
  if (table.upper_end_finite()) {
    const double t = table.invert(table.upper_end_mass() - volume);
    if (t > 0.0)
      attained.push_back({ctx.f(t), describe_interval(ctx, dom, t, kInf)});
  } else if (std::isfinite(right.limit_f)) {
    if (auto c = plateau_candidate(ctx, right, +1)) {
      attained.push_back(*c);
    } else {
      limits.push_back({2.0 * right.limit_f, kInf});
    }
  }

  // Interior intervals.
  const double total = table.total();
  if (std::isfinite(total)) {
    sweep_all_intervals(ctx, dom, volume, false, attained);
    sweep_all_intervals(ctx, dom, total - volume, true, attained);
  } else if (shape.shape == ShapeClass::IncreasingDecreasing ||
             shape.shape == ShapeClass::DecreasingIncreasing) {
    const double x0 = std::max(shape.change_point.value_or(0.0), 0.0);
    const FamilyEnd fl{0.0, ctx.endpoint_cost(0.0)};
    const FamilyEnd fr{kInf, right.limit_f};
    scan_family(ctx, dom, IntervalFamily(ctx, x0, volume, fl, fr), attained);
  }

  return assemble(ctx, std::move(attained), limits);
}

// ---------------------------------------------------------------------------
// Compact interval [a, b].

ProfileResult solve_profile_compact(const DensityModel& density,
                                    double volume, bool free_boundary,
                                    const ProfileOptions& opts) {
  const Domain dom = density.domain();
  if (!dom.is_compact())
    throw std::invalid_argument("density domain must be compact");
  const MeasureTable table(density);
  Ctx ctx{density, table, volume, opts, free_boundary};
  require_volume_in_range(ctx);

  const double total = table.total();
  const double cum_lo = table.cumulative(dom.lo);

  std::vector<Candidate> attained;

  // Anchored intervals at both endpoints.
  attained.push_back(
      {0.0, describe_interval(ctx, dom, dom.lo, table.invert(cum_lo + volume))});
  attained.back().perimeter = attained.back().desc.perimeter;
  attained.push_back(
      {0.0, describe_interval(ctx, dom,
                              table.invert(cum_lo + total - volume), dom.hi)});
  attained.back().perimeter = attained.back().desc.perimeter;

  // Every interval of volume V, and complements of every interval of
  // volume total - V.
  sweep_all_intervals(ctx, dom, volume, false, attained);
  sweep_all_intervals(ctx, dom, total - volume, true, attained);

  return assemble(ctx, std::move(attained), {});
}

// ---------------------------------------------------------------------------

StationarityResult stationarity_check(const DensityModel& density, double a,
                                      double b) {
  StationarityResult r;
  r.residual_rr =
      std::abs(density.dpsi(a, Side::Right) + density.dpsi(b, Side::Right));
  r.residual_ll =
      std::abs(density.dpsi(a, Side::Left) + density.dpsi(b, Side::Left));
  const double rl =
      std::abs(density.dpsi(a, Side::Right) + density.dpsi(b, Side::Left));
  const double lr =
      std::abs(density.dpsi(a, Side::Left) + density.dpsi(b, Side::Right));
  r.residual = std::min({r.residual_rr, r.residual_ll, rl, lr});
  r.stationary = r.residual <= 1e-9;
  return r;
}

}  // namespace isodense
