#include "isodense/region.hpp"

#include <algorithm>
#include <cmath>

namespace isodense {

Region1D::Region1D(std::vector<Interval> intervals) {
  for (const Interval& iv : intervals) {
    if (std::isnan(iv.a) || std::isnan(iv.b) || !(iv.a < iv.b))
      throw std::invalid_argument("Region1D: interval needs a < b");
  }
  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& x, const Interval& y) { return x.a < y.a; });
  for (const Interval& iv : intervals) {
    if (!intervals_.empty() && iv.a <= intervals_.back().b) {
      intervals_.back().b = std::max(intervals_.back().b, iv.b);
    } else {
      intervals_.push_back(iv);
    }
  }
}

Region1D Region1D::interval(double a, double b) {
  return Region1D({Interval{a, b}});
}

bool Region1D::contains(double x) const {
  for (const Interval& iv : intervals_)
    if (x > iv.a && x < iv.b) return true;
  return false;
}

Region1D Region1D::unite(const Region1D& other) const {
  std::vector<Interval> all = intervals_;
  all.insert(all.end(), other.intervals_.begin(), other.intervals_.end());
  return Region1D(std::move(all));
}

Region1D Region1D::intersect(const Region1D& other) const {
  std::vector<Interval> out;
  std::size_t i = 0, j = 0;
  while (i < intervals_.size() && j < other.intervals_.size()) {
    const Interval& p = intervals_[i];
    const Interval& q = other.intervals_[j];
    const double lo = std::max(p.a, q.a);
    const double hi = std::min(p.b, q.b);
    if (lo < hi) out.push_back({lo, hi});
    if (p.b < q.b)
      ++i;
    else
      ++j;
  }
  return Region1D(std::move(out));
}

Region1D Region1D::complement(double lo, double hi) const {
  std::vector<Interval> out;
  double cursor = lo;
  for (const Interval& iv : intervals_) {
    const double a = std::max(iv.a, lo);
    const double b = std::min(iv.b, hi);
    if (a >= hi) break;
    if (b <= lo) continue;
    if (cursor < a) out.push_back({cursor, a});
    cursor = std::max(cursor, b);
  }
  if (cursor < hi) out.push_back({cursor, hi});
  return Region1D(std::move(out));
}

Region1D Region1D::symmetric_difference(const Region1D& other) const {
  const Region1D u = unite(other);
  const Region1D i = intersect(other);
  return u.intersect(i.complement());
}

Region1D Region1D::reflected() const {
  std::vector<Interval> out;
  out.reserve(intervals_.size());
  for (const Interval& iv : intervals_) out.push_back({-iv.b, -iv.a});
  return Region1D(std::move(out));
}

std::vector<double> Region1D::boundary() const {
  std::vector<double> pts;
  for (const Interval& iv : intervals_) {
    if (std::isfinite(iv.a)) pts.push_back(iv.a);
    if (std::isfinite(iv.b)) pts.push_back(iv.b);
  }
  return pts;
}

double Region1D::length() const {
  double total = 0.0;
  for (const Interval& iv : intervals_) total += iv.b - iv.a;
  return total;
}

}  // namespace isodense
