#pragma once

#include <string>
#include <vector>

#include "isodense/columnar.hpp"
#include "isodense/variational.hpp"

namespace isodense {

enum class ZetaMode { RadialFormula, AnnulusMinMax };

struct ZetaSequence {
  int n = 1;
  ZetaMode mode = ZetaMode::RadialFormula;
  std::vector<std::pair<int, double>> log_values;  // (m, log zeta(m))
};

/// log zeta(m) = psi(m) - n/(n+1) psi(m+2) for m = 0..m_max (radial
/// formula), or the annulus min/max ratio sampled densely on [m, m+2].
/// Everything stays in log space so exp(|x|^2)-class densities never
/// overflow.
ZetaSequence zeta_sequence(const RadialDensity& density, int m_max,
                           ZetaMode mode = ZetaMode::RadialFormula);

enum class DivergenceVerdict { Diverges, Bounded, Inconclusive };

std::string to_string(DivergenceVerdict v);

/// Diagnostic verdict on the tail of log zeta: diverges needs the last
/// value above 50 with positive second differences over the last 10
/// samples; bounded needs the tail to stay small.  No finite sample
/// proves the limit; the verdict is labeled diagnostic in all outputs.
DivergenceVerdict divergence_verdict(const ZetaSequence& seq, int horizon);

/// Pointwise check of psi(r) <= C ((n+1)/n - eps)^{r/2} on a sample
/// grid over [r0, r1].
bool growth_bound_check(const RadialDensity& density, double C, double eps,
                        double r0, double r1, int samples = 512);

struct AnnulusCheck {
  double perimeter;
  double volume;
  bool holds;         // P^2 >= 2 f(r0) vol
  bool in_scope;      // the lemma's hypothesis P < 2 pi r0 f(r0) held
};

/// The planar annulus isoperimetric inequality for a columnar set
/// contained in {|x| >= r0} (containment violations throw).
AnnulusCheck planar_annulus_inequality_check(const ColumnarSet& set,
                                             double r0);

}  // namespace isodense
