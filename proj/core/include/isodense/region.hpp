#pragma once

#include <vector>

#include "isodense/common.hpp"

namespace isodense {

struct Interval {
  double a, b;  // a < b; endpoints may be +-inf
};

/// Finite union of disjoint open intervals with endpoints in R u {+-inf}.
/// Construction merges touching/overlapping pieces and keeps the list
/// sorted; at most one interval is unbounded on each side.
class Region1D {
 public:
  Region1D() = default;
  explicit Region1D(std::vector<Interval> intervals);
  static Region1D interval(double a, double b);

  const std::vector<Interval>& intervals() const { return intervals_; }
  bool empty() const { return intervals_.empty(); }
  std::size_t size() const { return intervals_.size(); }

  bool contains(double x) const;
  Region1D unite(const Region1D& other) const;
  Region1D intersect(const Region1D& other) const;
  /// Complement within [lo, hi] (either may be infinite).
  Region1D complement(double lo = -kInf, double hi = kInf) const;
  Region1D symmetric_difference(const Region1D& other) const;
  /// Mirror through 0: (a, b) -> (-b, -a).
  Region1D reflected() const;

  /// Finite boundary points (interval endpoints), sorted.
  std::vector<double> boundary() const;
  /// Total Euclidean length (+inf if unbounded).
  double length() const;

  bool operator==(const Region1D& other) const {
    return intervals_ == other.intervals_;
  }

 private:
  std::vector<Interval> intervals_;
};

inline bool operator==(const Interval& x, const Interval& y) {
  return x.a == y.a && x.b == y.b;
}

}  // namespace isodense
