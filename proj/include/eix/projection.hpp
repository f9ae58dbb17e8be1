#pragma once

#include <cstddef>

#include <json.hpp>

#include "eix/engine.hpp"
#include "eix/granule.hpp"

namespace eix {

// Trapezoid on (a, b, c, d): support [a, d], core [b, c]. b == c gives a
// triangle.
struct TrapezoidMF {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
};

// Interval type-2 set: the region between the two curves is the footprint
// of uncertainty. lower(x) <= upper(x) for all x by construction.
struct IntervalType2MF {
  TrapezoidMF lower;
  TrapezoidMF upper;
};

// Per-dimension projections of a granule. Type-1 maps the double boundary
// straight onto a trapezoid (outer bounds as support, inner as core); the
// type-2 upper set is that same trapezoid and the lower set is the triangle
// through (inner.lower, 0), (center, 1), (inner.upper, 0).
// Throws std::out_of_range when j >= dim(g).
TrapezoidMF project_type1(const Granule& g, std::size_t j);
IntervalType2MF project_type2(const Granule& g, std::size_t j);

// Piecewise-linear evaluation: 1 on [b, c], 0 at or outside [a, d]. Uses
// the same ramp arithmetic as the granule membership, so evaluating a
// type-1 projection reproduces dim_membership exactly.
double eval_mf(const TrapezoidMF& m, double x);

double area(const TrapezoidMF& m);

// Footprint-of-uncertainty area: upper area minus lower area. Never
// negative, since the lower triangle sits inside the upper trapezoid.
double fou_area(const IntervalType2MF& m);

// One fuzzy rule per granule: per-dimension antecedent sets plus the
// granule's majority label (null when unlabeled or tied) as consequent.
nlohmann::json export_rulebase(const ModelState& s, bool type2);

}  // namespace eix
