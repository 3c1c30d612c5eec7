#include "isodense/columnar.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "isodense/numerics.hpp"

namespace isodense {

using json = nlohmann::ordered_json;

bool ColumnarSet::empty_set() const {
  for (const Region1D& col : columns)
    if (!col.empty()) return false;
  return true;
}

double ColumnarSet::bounding_radius() const {
  double r = 0.0;
  for (int k = 0; k < count(); ++k) {
    const double p = base_coord(k);
    for (const Interval& iv : columns[k].intervals()) {
      const double t = std::max(std::abs(iv.a), std::abs(iv.b));
      r = std::max(r, std::hypot(p, t));
    }
  }
  return r;
}

ColumnarSet make_columnar(double h, double c, double half_width) {
  ColumnarSet set;
  set.h = h;
  set.c = c;
  const int half_cells = std::max(1, static_cast<int>(std::ceil(half_width / h)));
  set.half_width = half_cells * h;
  set.columns.assign(2 * half_cells, Region1D{});
  return set;
}

void add_disk(ColumnarSet& set, double cx, double cy, double radius) {
  for (int k = 0; k < set.count(); ++k) {
    const double dx = set.base_coord(k) - cx;
    if (std::abs(dx) >= radius) continue;
    const double half = std::sqrt(radius * radius - dx * dx);
    set.columns[k] =
        set.columns[k].unite(Region1D::interval(cy - half, cy + half));
  }
}

void add_rectangle(ColumnarSet& set, double x0, double x1, double y0,
                   double y1) {
  for (int k = 0; k < set.count(); ++k) {
    const double p = set.base_coord(k);
    if (p <= x0 || p >= x1) continue;
    set.columns[k] = set.columns[k].unite(Region1D::interval(y0, y1));
  }
}

// ---------------------------------------------------------------------------
// Cumulative exp(c t^2) table.

namespace {
// 15-point Gauss-Legendre nodes cached per process.
const std::vector<double>& gl15_nodes() {
  static std::vector<double> nodes = [] {
    std::vector<double> n, w;
    gauss_legendre(15, n, w);
    return n;
  }();
  return nodes;
}
const std::vector<double>& gl15_weights() {
  static std::vector<double> weights = [] {
    std::vector<double> n, w;
    gauss_legendre(15, n, w);
    return w;
  }();
  return weights;
}

double gl15(const RealFn& f, double a, double b) {
  const auto& xs = gl15_nodes();
  const auto& ws = gl15_weights();
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    sum += ws[i] * f(mid + half * xs[i]);
  return half * sum;
}
}  // namespace

GaussExpTable::GaussExpTable(double c, double t_max) : c_(c), t_max_(t_max) {
  const int cells = std::max(64, static_cast<int>(std::ceil(t_max / 0.01)));
  cell_ = t_max_ / cells;
  prefix_.assign(cells + 1, 0.0);
  auto f = [c](double t) { return std::exp(c * t * t); };
  for (int i = 1; i <= cells; ++i)
    prefix_[i] = prefix_[i - 1] + gl15(f, (i - 1) * cell_, i * cell_);
}

double GaussExpTable::G(double a) const {
  if (a <= 0.0) return 0.0;
  if (a >= t_max_) {
    // Rare overshoot beyond the table: extend by direct quadrature.
    return prefix_.back() +
           gl15([this](double t) { return std::exp(c_ * t * t); }, t_max_, a);
  }
  const int i = static_cast<int>(a / cell_);
  return prefix_[i] +
         gl15([this](double t) { return std::exp(c_ * t * t); }, i * cell_, a);
}

double GaussExpTable::signed_cumulative(double x) const {
  return x >= 0.0 ? G(x) : -G(-x);
}

double GaussExpTable::weighted_length(const Region1D& region) const {
  double total = 0.0;
  for (const Interval& iv : region.intervals())
    total += signed_cumulative(iv.b) - signed_cumulative(iv.a);
  return total;
}

double GaussExpTable::invert(double target) const {
  if (target <= 0.0) return 0.0;
  // G' = exp(c a^2) >= 1 (c >= 0); Newton from a = target with a
  // bisection safeguard.
  double lo = 0.0, hi = t_max_;
  while (G(hi) < target) hi *= 2.0;
  double a = std::min(target, hi);
  for (int it = 0; it < 100; ++it) {
    const double g = G(a) - target;
    if (g > 0.0)
      hi = a;
    else
      lo = a;
    const double step = g / std::exp(c_ * a * a);
    double next = a - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - a) <= 1e-16 * std::max(1.0, a) &&
        std::abs(g) <= 1e-13 * std::max(1.0, target))
      return next;
    a = next;
  }
  return a;
}

// ---------------------------------------------------------------------------
// Volume / perimeter estimators.

namespace {
GaussExpTable make_table(const ColumnarSet& set) {
  double t_max = set.half_width;
  for (const Region1D& col : set.columns)
    for (const Interval& iv : col.intervals())
      t_max = std::max({t_max, std::abs(iv.a), std::abs(iv.b)});
  return GaussExpTable(set.c, t_max + 1.0);
}
}  // namespace

double weighted_volume_columnar(const ColumnarSet& set) {
  const GaussExpTable table = make_table(set);
  double total = 0.0;
  for (int k = 0; k < set.count(); ++k) {
    if (set.columns[k].empty()) continue;
    const double p = set.base_coord(k);
    total += set.h * std::exp(set.c * p * p) *
             table.weighted_length(set.columns[k]);
  }
  return total;
}

double weighted_perimeter_columnar(const ColumnarSet& set) {
  const GaussExpTable table = make_table(set);
  const double h = set.h;
  double total = 0.0;
  auto endpoint_list = [](const Region1D& r) {
    std::vector<double> e;
    for (const Interval& iv : r.intervals()) {
      e.push_back(iv.a);
      e.push_back(iv.b);
    }
    return e;
  };
  for (int k = -1; k < set.count(); ++k) {
    const Region1D empty;
    const Region1D& left = k >= 0 ? set.columns[k] : empty;
    const Region1D& right = k + 1 < set.count() ? set.columns[k + 1] : empty;
    if (left.empty() && right.empty()) continue;
    const double p_mid =
        k >= 0 ? set.base_coord(k) + 0.5 * h : set.base_coord(0) - 0.5 * h;
    if (left.size() == right.size() && !left.empty()) {
      // Graph segments between order-matched endpoints.
      const auto el = endpoint_list(left);
      const auto er = endpoint_list(right);
      for (std::size_t j = 0; j < el.size(); ++j) {
        const double tm = 0.5 * (el[j] + er[j]);
        const double w = std::exp(set.c * (p_mid * p_mid + tm * tm));
        total += w * std::hypot(h, er[j] - el[j]);
      }
    } else {
      // Topology change: the symmetric difference becomes a wall.
      const Region1D wall = left.symmetric_difference(right);
      total += std::exp(set.c * p_mid * p_mid) * table.weighted_length(wall);
    }
  }
  return total;
}

double perimeter_step_allowance(const ColumnarSet& set,
                                double perimeter_before) {
  // O(sqrt(h)) near-tangency error of the wall/graph estimator; the
  // constant is stated here once and asserted by the test suites.
  return std::sqrt(set.h) * (0.25 + 0.05 * perimeter_before);
}

// ---------------------------------------------------------------------------
// Steiner symmetrization.

namespace {

double wrap_angle(double a) {
  while (a <= -M_PI / 2) a += M_PI;
  while (a > M_PI / 2) a -= M_PI;
  return a;
}

ColumnarSet symmetrize_columns(const ColumnarSet& set) {
  const GaussExpTable table = make_table(set);
  ColumnarSet out = set;
  parallel_for(set.count(), [&](int k) {
    const Region1D& col = set.columns[k];
    if (col.empty()) return;
    // A single centered interval is the construction's fixed point;
    // leaving it untouched keeps idempotence bit-exact.
    if (col.size() == 1 && col.intervals()[0].b == -col.intervals()[0].a)
      return;
    const double half_target = 0.5 * table.weighted_length(col);
    const double a = table.invert(half_target);
    out.columns[k] =
        a > 0.0 ? Region1D::interval(-a, a) : Region1D{};
  });
  return out;
}

}  // namespace

ColumnarSet resample(const ColumnarSet& set, double frame_angle) {
  frame_angle = wrap_angle(frame_angle);
  const double radius = set.bounding_radius();
  ColumnarSet out = make_columnar(set.h, set.c, radius + 4.0 * set.h);
  out.frame_angle = frame_angle;
  if (set.empty_set()) return out;

  const double rel = frame_angle - set.frame_angle;
  const double cr = std::cos(rel), sr = std::sin(rel);
  // Map (p', t') in the new frame to (p, t) in the old frame.
  auto to_old = [&](double pn, double tn) {
    return std::pair<double, double>{pn * cr - tn * sr, pn * sr + tn * cr};
  };
  auto member = [&](double pn, double tn) {
    auto [p, t] = to_old(pn, tn);
    const int k = static_cast<int>(std::floor((p + set.half_width) / set.h));
    if (k < 0 || k >= set.count()) return false;
    return set.columns[k].contains(t);
  };

  const double step = 0.5 * set.h;
  const double t_lim = out.half_width;
  parallel_for(out.count(), [&](int k) {
    const double pn = out.base_coord(k);
    std::vector<Interval> intervals;
    bool inside = false;
    double start = 0.0;
    double prev = -t_lim;
    for (double t = -t_lim; t <= t_lim + 0.5 * step; t += step) {
      const bool in = member(pn, t);
      if (in && !inside) {
        // Refine the entry point between prev and t.
        double lo = prev, hi = t;
        for (int it = 0; it < 30; ++it) {
          const double m = 0.5 * (lo + hi);
          if (member(pn, m))
            hi = m;
          else
            lo = m;
        }
        start = hi;
        inside = true;
      } else if (!in && inside) {
        double lo = prev, hi = t;
        for (int it = 0; it < 30; ++it) {
          const double m = 0.5 * (lo + hi);
          if (member(pn, m))
            lo = m;
          else
            hi = m;
        }
        if (lo > start) intervals.push_back({start, lo});
        inside = false;
      }
      prev = t;
    }
    if (inside && t_lim > start) intervals.push_back({start, t_lim});
    out.columns[k] = Region1D(std::move(intervals));
  });
  return out;
}

ColumnarSet steiner_symmetrize_direction(const ColumnarSet& set,
                                         double theta) {
  // Columns run orthogonally to the base axis: lines of direction theta
  // need frame angle theta - pi/2.
  const double want = wrap_angle(theta - M_PI / 2);
  const double have = wrap_angle(set.frame_angle);
  if (std::abs(want - have) < 1e-12) return symmetrize_columns(set);
  return symmetrize_columns(resample(set, want));
}

ColumnarSet steiner_symmetrize(const ColumnarSet& set, int axis) {
  if (axis != 0 && axis != 1)
    throw std::invalid_argument("axis must be 0 or 1");
  return steiner_symmetrize_direction(set, axis == 0 ? 0.0 : M_PI / 2);
}

double symmetric_difference_columnar(const ColumnarSet& a,
                                     const ColumnarSet& b) {
  const ColumnarSet* pb = &b;
  ColumnarSet resampled;
  if (std::abs(wrap_angle(a.frame_angle - b.frame_angle)) > 1e-12) {
    resampled = resample(b, a.frame_angle);
    pb = &resampled;
  }
  if (std::abs(a.h - pb->h) > 1e-15)
    throw std::invalid_argument("symmetric difference needs matching spacing");
  const GaussExpTable table = make_table(a);
  // Walk the union of the two base windows; columns align by their base
  // coordinate (both grids are cell-centered with the same spacing).
  const double w = std::max(a.half_width, pb->half_width);
  const int n = static_cast<int>(std::llround(2.0 * w / a.h));
  const Region1D empty;
  double total = 0.0;
  for (int k = 0; k < n; ++k) {
    const double p = -w + (k + 0.5) * a.h;
    auto column_of = [&](const ColumnarSet& s) -> const Region1D& {
      const int j = static_cast<int>(std::floor((p + s.half_width) / s.h));
      if (j < 0 || j >= s.count()) return empty;
      return s.columns[j];
    };
    const Region1D diff =
        column_of(a).symmetric_difference(column_of(*pb));
    if (diff.empty()) continue;
    total += a.h * std::exp(a.c * p * p) * table.weighted_length(diff);
  }
  return total;
}

ColumnarSet ball_of_volume(const ColumnarSet& like, double volume,
                           double* radius_out) {
  if (!(volume > 0.0)) throw std::invalid_argument("volume must be positive");
  auto ball_volume = [&](double R) {
    return integrate(
        [&](double r) {
          return 2.0 * M_PI * r * std::exp(like.c * r * r);
        },
        0.0, R, {1e-13, 48, true});
  };
  double hi = 1.0;
  while (ball_volume(hi) < volume) hi *= 2.0;
  const double R =
      bisect([&](double r) { return ball_volume(r) - volume; }, 0.0, hi,
             1e-13);
  if (radius_out) *radius_out = R;
  ColumnarSet ball = make_columnar(like.h, like.c,
                                   std::max(like.half_width, R + 4.0 * like.h));
  ball.frame_angle = like.frame_angle;
  add_disk(ball, 0.0, 0.0, R);
  return ball;
}

// ---------------------------------------------------------------------------
// Hsiang reflection.

namespace {

// Perimeter of the set restricted to the open half {base > 0} or
// {base < 0}, not counting boundary on the dividing hyperplane.
double relative_perimeter_base_half(const ColumnarSet& set, int sign) {
  ColumnarSet half = set;
  for (int k = 0; k < set.count(); ++k) {
    if (sign > 0 ? set.base_coord(k) < 0.0 : set.base_coord(k) > 0.0)
      half.columns[k] = Region1D{};
  }
  // The pairwise estimator adds a wall at the interface between kept
  // and cleared columns; subtract it (boundary on the hyperplane).
  double perim = weighted_perimeter_columnar(half);
  const GaussExpTable table = make_table(set);
  const int mid = set.count() / 2;  // first positive column
  const int kept_edge = sign > 0 ? mid : mid - 1;
  if (kept_edge >= 0 && kept_edge < set.count() &&
      !half.columns[kept_edge].empty()) {
    const double p_mid = sign > 0 ? set.base_coord(mid) - 0.5 * set.h
                                  : set.base_coord(mid - 1) + 0.5 * set.h;
    perim -= std::exp(set.c * p_mid * p_mid) *
             table.weighted_length(half.columns[kept_edge]);
  }
  return perim;
}

double relative_perimeter_column_half(const ColumnarSet& set, int sign,
                                      double* volume_out) {
  ColumnarSet half = set;
  for (int k = 0; k < set.count(); ++k) {
    const Region1D window = sign > 0
                                ? Region1D::interval(0.0, kInf)
                                : Region1D::interval(-kInf, 0.0);
    half.columns[k] = set.columns[k].intersect(window);
  }
  if (volume_out) *volume_out = weighted_volume_columnar(half);
  double perim = weighted_perimeter_columnar(half);
  // Remove the trace on the hyperplane t = 0: every column whose
  // clipped interval touches 0 contributes an h-wide strip there.
  for (int k = 0; k < set.count(); ++k) {
    for (const Interval& iv : half.columns[k].intervals()) {
      const double touch = sign > 0 ? iv.a : iv.b;
      if (std::abs(touch) <= 1e-12) {
        const double p = set.base_coord(k);
        perim -= set.h * std::exp(set.c * p * p);
        break;
      }
    }
  }
  return perim;
}

}  // namespace

HsiangResult hsiang_reflect(const ColumnarSet& set, int hyperplane_normal) {
  if (hyperplane_normal != 0 && hyperplane_normal != 1)
    throw std::invalid_argument("hyperplane normal must be 0 or 1");
  HsiangResult result;
  if (hyperplane_normal == 0) {
    // Split by the sign of the base coordinate.
    ColumnarSet pos = set, neg = set;
    for (int k = 0; k < set.count(); ++k) {
      if (set.base_coord(k) < 0.0) pos.columns[k] = Region1D{};
      if (set.base_coord(k) > 0.0) neg.columns[k] = Region1D{};
    }
    result.volume_positive = weighted_volume_columnar(pos);
    result.volume_negative = weighted_volume_columnar(neg);
    result.relative_perimeter_positive =
        relative_perimeter_base_half(set, +1);
    result.relative_perimeter_negative =
        relative_perimeter_base_half(set, -1);
    result.kept_positive = result.relative_perimeter_positive <=
                           result.relative_perimeter_negative;
    const ColumnarSet& kept = result.kept_positive ? pos : neg;
    ColumnarSet out = kept;
    const int n = set.count();
    for (int k = 0; k < n; ++k) {
      const int mirror = n - 1 - k;  // base_coord(mirror) = -base_coord(k)
      if (!kept.columns[k].empty()) out.columns[mirror] = kept.columns[k];
    }
    result.set = std::move(out);
  } else {
    double vol_pos = 0.0, vol_neg = 0.0;
    result.relative_perimeter_positive =
        relative_perimeter_column_half(set, +1, &vol_pos);
    result.relative_perimeter_negative =
        relative_perimeter_column_half(set, -1, &vol_neg);
    result.volume_positive = vol_pos;
    result.volume_negative = vol_neg;
    result.kept_positive = result.relative_perimeter_positive <=
                           result.relative_perimeter_negative;
    ColumnarSet out = set;
    for (int k = 0; k < set.count(); ++k) {
      const Region1D window = result.kept_positive
                                  ? Region1D::interval(0.0, kInf)
                                  : Region1D::interval(-kInf, 0.0);
      const Region1D half = set.columns[k].intersect(window);
      out.columns[k] = half.unite(half.reflected());
    }
    result.set = std::move(out);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Convergence driver.

ConvergenceResult converge_to_ball(const ColumnarSet& set, int max_steps,
                                   double tol) {
  ConvergenceResult result;
  result.converged = false;

  const double volume = weighted_volume_columnar(set);
  double radius = 0.0;
  const ColumnarSet reference_ball = ball_of_volume(set, volume, &radius);
  result.ball_radius = radius;

  // Axis directions first, then progressively finer diagonals: the
  // two-axis alternation alone has rectangle-type fixed points.
  // Schedule: 0, pi/2, pi/4, 3pi/4, pi/8, 3pi/8, 5pi/8, 7pi/8, ...
  std::vector<double> schedule{0.0};
  for (int depth = 1; depth <= 4; ++depth) {
    const int denom = 1 << depth;  // odd multiples of pi / 2^depth
    for (int k = 1; k < denom; k += 2) schedule.push_back(M_PI * k / denom);
  }

  ColumnarSet current = set;
  int step = 0;
  int quiet = 0;
  std::size_t schedule_pos = 0;
  while (step < max_steps) {
    const double angle = schedule[schedule_pos % schedule.size()];
    ++schedule_pos;
    const double vol_before = weighted_volume_columnar(current);
    const double per_before = weighted_perimeter_columnar(current);
    ColumnarSet next = steiner_symmetrize_direction(current, angle);
    const double vol_after = weighted_volume_columnar(next);
    const double per_after = weighted_perimeter_columnar(next);
    const double moved = symmetric_difference_columnar(next, current);
    const double to_ball = symmetric_difference_columnar(next, reference_ball);
    result.log.push_back({++step, angle, vol_before, vol_after, per_before,
                          per_after, moved, to_ball});
    current = std::move(next);
    quiet = moved < tol ? quiet + 1 : 0;
    // Quiet across one full round of the finest schedule depth means a
    // genuine fixed point.
    if (quiet >= static_cast<int>(schedule.size())) {
      result.converged = true;
      break;
    }
  }
  result.final_set = std::move(current);
  return result;
}

// ---------------------------------------------------------------------------

ConvexityCheck convexity_inequality(const std::vector<double>& alphas,
                                    const std::vector<double>& as,
                                    double alpha, double a) {
  if (alphas.size() != as.size())
    throw std::invalid_argument("alphas and as must have equal length");
  if (alpha < 0.0 || a < 0.0)
    throw std::invalid_argument("alpha and a must be nonnegative");
  double sum_alpha = 0.0, sum_alpha_a = 0.0;
  for (std::size_t j = 0; j < alphas.size(); ++j) {
    if (alphas[j] < 0.0 || as[j] < 0.0)
      throw std::invalid_argument("entries must be nonnegative");
    sum_alpha += alphas[j];
    sum_alpha_a += alphas[j] * as[j];
  }
  if (sum_alpha_a < 2.0 * alpha * a - 1e-15 ||
      sum_alpha < 2.0 * alpha - 1e-15)
    throw std::invalid_argument("inputs violate the lemma's hypotheses");
  ConvexityCheck check;
  check.lhs = 0.0;
  for (std::size_t j = 0; j < alphas.size(); ++j)
    check.lhs += alphas[j] * std::sqrt(1.0 + as[j] * as[j]);
  check.rhs = 2.0 * alpha * std::sqrt(1.0 + a * a);
  check.holds = check.lhs >= check.rhs - 1e-12 * std::max(1.0, check.rhs);
  bool all_equal = true;
  for (double aj : as)
    if (std::abs(aj - a) > 1e-12 * std::max(1.0, std::abs(a)))
      all_equal = false;
  check.equality =
      all_equal &&
      std::abs(sum_alpha - 2.0 * alpha) <= 1e-12 * std::max(1.0, sum_alpha) &&
      std::abs(check.lhs - check.rhs) <= 1e-9 * std::max(1.0, check.rhs);
  return check;
}

// ---------------------------------------------------------------------------
// JSON round-trip.

std::string to_json(const ColumnarSet& set) {
  json j;
  j["h"] = set.h;
  j["window"] = {-set.half_width, set.half_width};
  j["c"] = set.c;
  if (set.frame_angle != 0.0) j["frame_angle"] = set.frame_angle;
  json cols = json::array();
  for (int k = 0; k < set.count(); ++k) {
    if (set.columns[k].empty()) continue;
    json col;
    col["p"] = set.base_coord(k);
    json ivs = json::array();
    for (const Interval& iv : set.columns[k].intervals())
      ivs.push_back({iv.a, iv.b});
    col["intervals"] = std::move(ivs);
    cols.push_back(std::move(col));
  }
  j["columns"] = std::move(cols);
  return j.dump(2);
}

ColumnarSet columnar_from_json(const std::string& text) {
  const json j = json::parse(text);
  ColumnarSet set;
  set.h = j.at("h").get<double>();
  set.c = j.at("c").get<double>();
  const double lo = j.at("window").at(0).get<double>();
  const double hi = j.at("window").at(1).get<double>();
  if (!(hi > 0.0) || std::abs(lo + hi) > 1e-12)
    throw std::invalid_argument("window must be symmetric about 0");
  set = make_columnar(set.h, set.c, hi);
  if (j.contains("frame_angle"))
    set.frame_angle = j.at("frame_angle").get<double>();
  for (const json& col : j.at("columns")) {
    const double p = col.at("p").get<double>();
    const int k = static_cast<int>(std::floor((p + set.half_width) / set.h));
    if (k < 0 || k >= set.count())
      throw std::invalid_argument("column outside the window");
    std::vector<Interval> ivs;
    for (const json& iv : col.at("intervals"))
      ivs.push_back({iv.at(0).get<double>(), iv.at(1).get<double>()});
    set.columns[k] = Region1D(std::move(ivs));
  }
  return set;
}

}  // namespace isodense
