#include "isodense/measure.hpp"

#include <algorithm>
#include <cmath>

namespace isodense {

namespace {

// Integrate f = e^psi over finite [a, b], never straddling a kink.
double integrate_f_split(const DensityModel& d, double a, double b,
                         const QuadratureOptions& opts) {
  if (a >= b) return 0.0;
  auto f = [&](double t) { return d.f(t); };
  const auto kinks = d.kinks(a, b);
  double total = 0.0;
  double cursor = a;
  for (double k : kinks) {
    if (k > cursor && k < b) {
      total += integrate(f, cursor, k, opts);
      cursor = k;
    }
  }
  total += integrate(f, cursor, b, opts);
  return total;
}

// Mass of the tail beyond x toward the given infinite end.  The caller
// guarantees the tail is integrable.
double tail_mass(const DensityModel& d, double x, int direction,
                 const QuadratureOptions& opts) {
  auto f = [&](double t) { return d.f(t); };
  // Kinks live in bounded regions; put the improper part beyond them.
  double split = x;
  const auto kinks = direction > 0 ? d.kinks(x, x + 64.0)
                                   : d.kinks(x - 64.0, x);
  for (double k : kinks)
    split = direction > 0 ? std::max(split, k + 1.0) : std::min(split, k - 1.0);
  double total = 0.0;
  if (direction > 0) {
    total += integrate_f_split(d, x, split, opts);
    total += integrate_to_pinf(f, split, opts);
  } else {
    total += integrate_f_split(d, split, x, opts);
    total += integrate_to_minf(f, split, opts);
  }
  return total;
}

}  // namespace

double weighted_volume(const DensityModel& density, const Region1D& region,
                       const QuadratureOptions& opts) {
  const Domain& dom = density.domain();
  double total = 0.0;
  for (const Interval& iv : region.intervals()) {
    const double a = std::max(iv.a, dom.lo);
    const double b = std::min(iv.b, dom.hi);
    if (!(a < b)) continue;
    const bool lower_inf = a == -kInf;
    const bool upper_inf = b == kInf;
    if (lower_inf) {
      auto probe = probe_tail([&](double t) { return density.f(t); },
                              std::min(b, 0.0) - 1.0, -1, opts);
      if (!probe.finite) return kInf;
    }
    if (upper_inf) {
      auto probe = probe_tail([&](double t) { return density.f(t); },
                              std::max(a, 0.0) + 1.0, +1, opts);
      if (!probe.finite) return kInf;
    }
    if (lower_inf && upper_inf) {
      total += tail_mass(density, 0.0, -1, opts) +
               tail_mass(density, 0.0, +1, opts);
    } else if (lower_inf) {
      total += tail_mass(density, b, -1, opts);
    } else if (upper_inf) {
      total += tail_mass(density, a, +1, opts);
    } else {
      total += integrate_f_split(density, a, b, opts);
    }
  }
  return total;
}

double weighted_perimeter_1d(const DensityModel& density,
                             const Region1D& region, BoundaryPolicy policy) {
  const Domain& dom = density.domain();
  double total = 0.0;
  for (double p : region.boundary()) {
    if (policy == BoundaryPolicy::FreeAtDomainEndpoints &&
        (p == dom.lo || p == dom.hi))
      continue;
    if (p < dom.lo || p > dom.hi) continue;
    total += density.f(p);
  }
  return total;
}

MeasureTable::MeasureTable(const DensityModel& density,
                           const QuadratureOptions& opts)
    : density_(density), opts_(opts) {
  const Domain& dom = density.domain();
  anchor_ = dom.contains(0.0) ? 0.0 : dom.lo;

  auto f = [this](double t) { return density_.f(t); };

  // End finiteness and masses.
  if (std::isfinite(dom.lo)) {
    lower_finite_ = true;
    lower_mass_ = integrate_f_split(density_, dom.lo, anchor_, opts_);
  } else {
    auto probe = probe_tail(f, anchor_ - 1.0, -1, opts_);
    lower_finite_ = probe.finite;
    lower_mass_ = probe.finite ? tail_mass(density_, anchor_, -1, opts_) : kInf;
  }
  if (std::isfinite(dom.hi)) {
    upper_finite_ = true;
    upper_mass_ = integrate_f_split(density_, anchor_, dom.hi, opts_);
  } else {
    auto probe = probe_tail(f, anchor_ + 1.0, +1, opts_);
    upper_finite_ = probe.finite;
    upper_mass_ = probe.finite ? tail_mass(density_, anchor_, +1, opts_) : kInf;
  }

  // Core window: domain endpoints where finite; otherwise wide enough
  // that the remaining tail is negligible (finite mass) or generously
  // sized (infinite mass; queries beyond integrate lazily).
  double w_lo, w_hi;
  if (std::isfinite(dom.lo)) {
    w_lo = dom.lo;
  } else if (lower_finite_) {
    w_lo = anchor_ - 1.0;
    while (tail_mass(density_, w_lo, -1, opts_) >
           1e-15 * std::max(lower_mass_, 1e-12))
      w_lo = anchor_ + 2.0 * (w_lo - anchor_);
  } else {
    // Infinite mass: stop once f is astronomically large (all further
    // mass lives beyond psi ~ 40) or at a generous fixed window;
    // queries beyond the table integrate lazily.
    w_lo = anchor_ - 1.0;
    while (w_lo > anchor_ - 64.0 && density_.psi(w_lo) <= 40.0)
      w_lo = anchor_ + 2.0 * (w_lo - anchor_);
  }
  if (std::isfinite(dom.hi)) {
    w_hi = dom.hi;
  } else if (upper_finite_) {
    w_hi = anchor_ + 1.0;
    while (tail_mass(density_, w_hi, +1, opts_) >
           1e-15 * std::max(upper_mass_, 1e-12))
      w_hi = anchor_ + 2.0 * (w_hi - anchor_);
  } else {
    w_hi = anchor_ + 1.0;
    while (w_hi < anchor_ + 64.0 && density_.psi(w_hi) <= 40.0)
      w_hi = anchor_ + 2.0 * (w_hi - anchor_);
  }

  // Node grid including anchor and kinks.
  const int kNodes = 1024;
  nodes_.reserve(kNodes + 8);
  for (int i = 0; i <= kNodes; ++i)
    nodes_.push_back(w_lo + (w_hi - w_lo) * i / kNodes);
  nodes_.push_back(anchor_);
  for (double k : density_.kinks(w_lo, w_hi)) nodes_.push_back(k);
  std::sort(nodes_.begin(), nodes_.end());
  nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());

  cumulative_.assign(nodes_.size(), 0.0);
  const auto anchor_it =
      std::lower_bound(nodes_.begin(), nodes_.end(), anchor_);
  const int ai = static_cast<int>(anchor_it - nodes_.begin());
  for (int i = ai + 1; i < static_cast<int>(nodes_.size()); ++i)
    cumulative_[i] = cumulative_[i - 1] +
                     integrate_f_split(density_, nodes_[i - 1], nodes_[i],
                                       opts_);
  for (int i = ai - 1; i >= 0; --i)
    cumulative_[i] = cumulative_[i + 1] -
                     integrate_f_split(density_, nodes_[i], nodes_[i + 1],
                                       opts_);
}

double MeasureTable::integrate_f(double a, double b) const {
  return integrate_f_split(density_, a, b, opts_);
}

double MeasureTable::cumulative(double x) const {
  const Domain& dom = density_.domain();
  x = std::clamp(x, dom.lo, dom.hi);
  if (x == -kInf) return -lower_mass_;
  if (x == kInf) return upper_mass_;
  if (x <= nodes_.front())
    return cumulative_.front() - integrate_f(x, nodes_.front());
  if (x >= nodes_.back())
    return cumulative_.back() + integrate_f(nodes_.back(), x);
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  const int i = static_cast<int>(it - nodes_.begin()) - 1;
  return cumulative_[i] + integrate_f(nodes_[i], x);
}

double MeasureTable::volume_between(double a, double b) const {
  if (a >= b) return 0.0;
  if (a == -kInf && !lower_finite_) return kInf;
  if (b == kInf && !upper_finite_) return kInf;
  return cumulative(b) - cumulative(a);
}

double MeasureTable::invert(double v) const {
  if (v < -lower_mass_ || v > upper_mass_)
    throw std::invalid_argument("MeasureTable::invert: value out of range");
  // Bracket with the node table, expanding beyond it if needed.
  double lo, hi;
  if (v <= cumulative_.front()) {
    hi = nodes_.front();
    lo = hi - 1.0;
    while (cumulative(lo) > v) {
      lo = hi + 2.0 * (lo - hi);
      if (lo < -1e300) throw NumericError("invert: bracket failed", v);
    }
  } else if (v >= cumulative_.back()) {
    lo = nodes_.back();
    hi = lo + 1.0;
    while (cumulative(hi) < v) {
      hi = lo + 2.0 * (hi - lo);
      if (hi > 1e300) throw NumericError("invert: bracket failed", v);
    }
  } else {
    const auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), v);
    const int i = static_cast<int>(it - cumulative_.begin());
    lo = nodes_[std::max(0, i - 1)];
    hi = nodes_[i];
  }
  return bisect([&](double x) { return cumulative(x) - v; }, lo, hi,
                1e-14 * std::max(1.0, std::max(std::abs(lo), std::abs(hi))));
}

double MeasureTable::total() const {
  if (!lower_finite_ || !upper_finite_) return kInf;
  return lower_mass_ + upper_mass_;
}

std::shared_ptr<const MeasureTable> build_measure_table(
    const DensityModel& density, const QuadratureOptions& opts) {
  return std::make_shared<const MeasureTable>(density, opts);
}

}  // namespace isodense
