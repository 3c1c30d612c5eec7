#include "isodense/existence.hpp"

#include <algorithm>
#include <cmath>

namespace isodense {

ZetaSequence zeta_sequence(const RadialDensity& density, int m_max,
                           ZetaMode mode) {
  if (m_max < 0) throw std::invalid_argument("m_max must be nonnegative");
  ZetaSequence seq;
  seq.n = density.n();
  seq.mode = mode;
  const double exponent = static_cast<double>(seq.n) / (seq.n + 1);
  seq.log_values.reserve(m_max + 1);
  for (int m = 0; m <= m_max; ++m) {
    double value;
    if (mode == ZetaMode::RadialFormula) {
      value = density.delta(m) - exponent * density.delta(m + 2.0);
    } else {
      // min psi - (n/(n+1)) max psi over dense samples of [m, m+2].
      const int samples = 256;
      double lo = kInf, hi = -kInf;
      for (int i = 0; i <= samples; ++i) {
        const double r = m + 2.0 * i / samples;
        const double p = density.delta(r);
        lo = std::min(lo, p);
        hi = std::max(hi, p);
      }
      value = lo - exponent * hi;
    }
    seq.log_values.emplace_back(m, value);
  }
  return seq;
}

std::string to_string(DivergenceVerdict v) {
  switch (v) {
    case DivergenceVerdict::Diverges: return "diverges";
    case DivergenceVerdict::Bounded: return "bounded";
    case DivergenceVerdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

DivergenceVerdict divergence_verdict(const ZetaSequence& seq, int horizon) {
  const int n = static_cast<int>(seq.log_values.size());
  if (horizon > n)
    throw std::invalid_argument("horizon exceeds available values");
  if (horizon < 3) return DivergenceVerdict::Inconclusive;
  const auto& v = seq.log_values;
  const double last = v[horizon - 1].second;

  // Mean second difference over the last (up to) 10 samples.
  const int tail = std::min(10, horizon - 2);
  double mean_dd = 0.0;
  for (int i = horizon - tail; i < horizon; ++i)
    mean_dd += v[i].second - 2.0 * v[i - 1].second + v[i - 2].second;
  mean_dd /= tail;

  if (last > 50.0 && mean_dd > 0.0) return DivergenceVerdict::Diverges;
  double tail_max = -kInf;
  for (int i = std::max(0, horizon - 10); i < horizon; ++i)
    tail_max = std::max(tail_max, v[i].second);
  if (tail_max <= 10.0) return DivergenceVerdict::Bounded;
  return DivergenceVerdict::Inconclusive;
}

bool growth_bound_check(const RadialDensity& density, double C, double eps,
                        double r0, double r1, int samples) {
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("eps must lie in (0, 1)");
  const double base = static_cast<double>(density.n() + 1) / density.n() - eps;
  for (int i = 0; i <= samples; ++i) {
    const double r = r0 + (r1 - r0) * i / samples;
    if (density.delta(r) > C * std::pow(base, 0.5 * r)) return false;
  }
  return true;
}

AnnulusCheck planar_annulus_inequality_check(const ColumnarSet& set,
                                             double r0) {
  if (!(r0 > 0.0)) throw std::invalid_argument("r0 must be positive");
  // Containment in {|x| >= r0}.
  for (int k = 0; k < set.count(); ++k) {
    const double p = set.base_coord(k);
    if (std::abs(p) >= r0) continue;
    const double gap = std::sqrt(r0 * r0 - p * p);
    for (const Interval& iv : set.columns[k].intervals()) {
      if (iv.b > -gap && iv.a < gap)
        throw std::invalid_argument(
            "set is not contained in {|x| >= r0}");
    }
  }
  AnnulusCheck check;
  check.perimeter = weighted_perimeter_columnar(set);
  check.volume = weighted_volume_columnar(set);
  const double f_r0 = std::exp(set.c * r0 * r0);
  check.in_scope = check.perimeter < 2.0 * M_PI * r0 * f_r0;
  check.holds =
      check.perimeter * check.perimeter >= 2.0 * f_r0 * check.volume;
  return check;
}

}  // namespace isodense
