#include "isodense/profile.hpp"

#include <algorithm>
#include <cmath>

namespace isodense {

namespace {

struct Grid {
  std::vector<double> x;   // nodes, size N+1
  std::vector<double> fx;  // f at nodes
  std::vector<double> M;   // prefix mass from x[0] to x[i]
  std::vector<double> suffix_min_f;
  double tail_left = kInf;   // mass of (domain lo, x[0]); may be inf
  double tail_right = kInf;  // mass of (x[N], domain hi); may be inf
  double left_anchor_cost = 0.0;   // f at a finite domain endpoint
  double right_anchor_cost = 0.0;  // (0 for infinite ends)
  double vol_tol = 0.0;
};

Grid build_grid(const DensityModel& d, const MeasureTable& table, double lo,
                double hi, int n_points, double slack_cells) {
  Grid g;
  if (std::isfinite(d.domain().lo)) g.left_anchor_cost = d.f(d.domain().lo);
  if (std::isfinite(d.domain().hi)) g.right_anchor_cost = d.f(d.domain().hi);
  g.x.resize(n_points + 1);
  g.fx.resize(n_points + 1);
  g.M.resize(n_points + 1);
  for (int i = 0; i <= n_points; ++i) {
    g.x[i] = lo + (hi - lo) * i / n_points;
    g.fx[i] = d.f(g.x[i]);
  }
  const double cum0 = table.cumulative(lo);
  double max_cell = 0.0;
  g.M[0] = 0.0;
  for (int i = 1; i <= n_points; ++i) {
    g.M[i] = table.cumulative(g.x[i]) - cum0;
    max_cell = std::max(max_cell, g.M[i] - g.M[i - 1]);
  }
  g.vol_tol = slack_cells * max_cell;
  g.tail_left = table.lower_end_finite()
                    ? table.lower_end_mass() + cum0
                    : kInf;
  g.tail_right = table.upper_end_finite()
                     ? table.upper_end_mass() - table.cumulative(hi)
                     : kInf;
  g.suffix_min_f.assign(n_points + 1, kInf);
  double m = kInf;
  for (int i = n_points; i >= 0; --i) {
    m = std::min(m, g.fx[i]);
    g.suffix_min_f[i] = m;
  }
  return g;
}

struct SearchState {
  const Grid& g;
  double target_volume;
  int max_components;
  double best_perim = kInf;
  std::vector<Interval> best_region;
  double best_volume = 0.0;

  void consider(double perim, double vol,
                const std::vector<Interval>& components) {
    if (perim < best_perim) {
      best_perim = perim;
      best_region = components;
      best_volume = vol;
    }
  }
};

/// Places components left to right.  Every prefix may be closed by a
/// final component whose right endpoint is found by binary search on
/// the prefix masses (or by a half-line using the right tail mass).
void search(SearchState& st, int level, int start, double vol, double perim,
            std::vector<Interval>& stack) {
  const Grid& g = st.g;
  const int n = static_cast<int>(g.x.size()) - 1;
  const double V = st.target_volume;
  const double tol = g.vol_tol;

  for (int s = start; s <= n; ++s) {
    if (perim + g.fx[s] >= st.best_perim) continue;
    // Close with a right half-line (s, domain hi).
    if (std::isfinite(g.tail_right)) {
      const double m = g.M[n] - g.M[s] + g.tail_right;
      if (std::abs(vol + m - V) <= tol) {
        stack.push_back({g.x[s], kInf});
        st.consider(perim + g.fx[s] + g.right_anchor_cost, vol + m, stack);
        stack.pop_back();
      }
    }
    // Close with a bounded interval (s, e): binary search on mass.
    {
      const double target = g.M[s] + (V - vol);
      auto it = std::lower_bound(g.M.begin() + s + 1, g.M.end(), target);
      for (int e = static_cast<int>(it - g.M.begin()) - 1;
           e <= static_cast<int>(it - g.M.begin()) + 1; ++e) {
        if (e <= s || e > n) continue;
        const double m = g.M[e] - g.M[s];
        if (std::abs(vol + m - V) > tol) continue;
        const double p = perim + g.fx[s] + g.fx[e];
        if (p >= st.best_perim) continue;
        stack.push_back({g.x[s], g.x[e]});
        st.consider(p, vol + m, stack);
        stack.pop_back();
      }
    }
    // Keep (s, e) open and recurse for more components.
    if (level + 1 < st.max_components) {
      for (int e = s + 1; e <= n; ++e) {
        const double m = g.M[e] - g.M[s];
        if (vol + m > V + tol) break;
        const double p = perim + g.fx[s] + g.fx[e];
        if (p + g.suffix_min_f[e] >= st.best_perim) continue;
        if (e + 2 > n) continue;
        stack.push_back({g.x[s], g.x[e]});
        search(st, level + 1, e + 2, vol + m, p, stack);
        stack.pop_back();
      }
    }
  }
}

/// Components whose first piece is the left half-line (-inf, e).
void search_with_left_halfline(SearchState& st,
                               std::vector<Interval>& stack) {
  const Grid& g = st.g;
  if (!std::isfinite(g.tail_left)) return;
  const int n = static_cast<int>(g.x.size()) - 1;
  const double V = st.target_volume;
  const double tol = g.vol_tol;

  // Close immediately: (domain lo, e).
  {
    const double target = V - g.tail_left;
    auto it = std::lower_bound(g.M.begin(), g.M.end(), target);
    for (int e = static_cast<int>(it - g.M.begin()) - 1;
         e <= static_cast<int>(it - g.M.begin()) + 1; ++e) {
      if (e < 0 || e > n) continue;
      const double m = g.tail_left + g.M[e];
      if (std::abs(m - V) > tol) continue;
      const double p = g.fx[e] + g.left_anchor_cost;
      if (p >= st.best_perim) continue;
      stack.push_back({-kInf, g.x[e]});
      st.consider(p, m, stack);
      stack.pop_back();
    }
  }
  // Close with the complement shape (lo, e) u (s, hi).
  if (std::isfinite(g.tail_right)) {
    for (int e = 0; e <= n; ++e) {
      const double m1 = g.tail_left + g.M[e];
      if (m1 > V + tol) break;
      const double target = g.M[n] + g.tail_right - (V - m1);
      auto it = std::lower_bound(g.M.begin() + e + 1, g.M.end(), target);
      for (int s = static_cast<int>(it - g.M.begin()) - 1;
           s <= static_cast<int>(it - g.M.begin()) + 1; ++s) {
        if (s <= e + 1 || s > n) continue;
        const double m2 = g.M[n] - g.M[s] + g.tail_right;
        if (std::abs(m1 + m2 - V) > tol) continue;
        const double p =
            g.fx[e] + g.fx[s] + g.left_anchor_cost + g.right_anchor_cost;
        if (p >= st.best_perim) continue;
        stack.push_back({-kInf, g.x[e]});
        stack.push_back({g.x[s], kInf});
        st.consider(p, m1 + m2, stack);
        stack.pop_back();
        stack.pop_back();
      }
    }
  }
  // Keep (lo, e) open and add bounded components after it.
  if (st.max_components >= 2) {
    for (int e = 0; e <= n; ++e) {
      const double m = g.tail_left + g.M[e];
      if (m > V + tol) break;
      const double p0 = g.fx[e] + g.left_anchor_cost;
      if (p0 + g.suffix_min_f[e] >= st.best_perim) continue;
      if (e + 2 > n) continue;
      stack.push_back({-kInf, g.x[e]});
      search(st, 1, e + 2, m, p0, stack);
      stack.pop_back();
    }
  }
}

}  // namespace

BruteForceResult brute_force_profile(const DensityModel& density,
                                     double volume,
                                     const BruteForceOptions& opts) {
  if (!(volume > 0.0)) throw std::invalid_argument("volume must be positive");
  if (opts.max_components < 1)
    throw std::invalid_argument("max_components must be >= 1");
  const MeasureTable table(density);
  const double total = table.total();
  if (std::isfinite(total) && volume >= total)
    throw std::invalid_argument("volume must be below the total measure");
  const Domain& dom = density.domain();

  // Initial window: the quantile span of a few volumes around the
  // anchor, clipped to the domain.
  double lo, hi;
  if (opts.window) {
    lo = (*opts.window)[0];
    hi = (*opts.window)[1];
  } else {
    const double probe_l =
        std::min({2.0 * volume,
                  table.lower_end_finite()
                      ? (1.0 - 1e-12) * table.lower_end_mass()
                      : kInf});
    const double probe_r = std::min(
        {2.0 * volume,
         table.upper_end_finite() ? (1.0 - 1e-12) * table.upper_end_mass()
                                  : kInf});
    lo = std::min(table.anchor() - 2.0,
                  probe_l > 0.0 ? table.invert(-probe_l) : -2.0);
    hi = std::max(table.anchor() + 2.0,
                  probe_r > 0.0 ? table.invert(probe_r) : 2.0);
    lo = std::max(lo, dom.lo);
    hi = std::min(hi, dom.hi);
  }

  bool truncated = false;
  if (!opts.window) {
    // Expand until boundaries beyond the window cannot matter: either f
    // there exceeds twice the current single-interval optimum, or the
    // tail cannot move volume by more than the grid tolerance.
    bool settled = false;
    for (int round = 0; round < 24 && !settled; ++round) {
      Grid g = build_grid(density, table, lo, hi, opts.grid_points,
                          opts.volume_slack_cells);
      SearchState st{g, volume, 1};
      std::vector<Interval> stack;
      search_with_left_halfline(st, stack);
      search(st, 0, 0, 0.0, 0.0, stack);
      const double best1 = st.best_perim;
      const bool left_done =
          lo <= dom.lo ||
          density.f(lo) > 2.0 * best1 ||
          (std::isfinite(g.tail_left) && g.tail_left <= g.vol_tol);
      const bool right_done =
          hi >= dom.hi ||
          density.f(hi) > 2.0 * best1 ||
          (std::isfinite(g.tail_right) && g.tail_right <= g.vol_tol);
      settled = left_done && right_done;
      if (!settled) {
        const double width = hi - lo;
        if (!left_done) lo = std::max(dom.lo, lo - 0.5 * width);
        if (!right_done) hi = std::min(dom.hi, hi + 0.5 * width);
      }
    }
    truncated = !settled;
  }

  Grid g = build_grid(density, table, lo, hi, opts.grid_points,
                      opts.volume_slack_cells);
  SearchState st{g, volume, opts.max_components};
  std::vector<Interval> stack;
  search_with_left_halfline(st, stack);
  search(st, 0, 0, 0.0, 0.0, stack);

  BruteForceResult result;
  result.perimeter = st.best_perim;
  result.region = Region1D(st.best_region);
  result.volume = st.best_volume;
  result.volume_tolerance = g.vol_tol;
  result.window = {lo, hi};
  result.cell_width = (hi - lo) / opts.grid_points;
  result.truncated = truncated;
  if (!std::isfinite(st.best_perim))
    throw NumericError(
        "brute force found no region meeting the volume constraint",
        g.vol_tol);
  return result;
}

}  // namespace isodense
