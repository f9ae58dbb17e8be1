#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace eix {

enum class TNorm { Min, Product };

struct Box {
  std::vector<double> lower;
  std::vector<double> upper;
};

// Information granule: a pair of nested axis-aligned boxes around a center.
// Points inside the inner box carry full membership; between the inner and
// outer box membership ramps linearly down to zero.
//
// Shape invariants, restored by enforce_floors() after every mutating op:
//   outer.lower[j] <= inner.lower[j] <= center[j] - eps/2
//   center[j] + eps/2 <= inner.upper[j] <= outer.upper[j]
// which keeps the inner width >= eps and the outer width >= 2*eps.
struct Granule {
  std::vector<double> center;
  Box inner;
  Box outer;
  std::int64_t support = 1;                 // inner-hit count, starts at 1
  std::map<int, std::int64_t> label_tally;  // class -> observed count
};

std::size_t dim(const Granule& g);

// Fresh granule centered on x: inner = x -+ eps/2, outer = x -+ eps.
// Throws std::invalid_argument if x is empty or not all coordinates are
// finite. Coordinates outside [0,1] are accepted; the unit hypercube is the
// intended operating range, not an enforced one.
Granule make_granule(std::span<const double> x, double epsilon);

// Strict containment: points on a bound are outside.
bool contains_inner(const Granule& g, std::span<const double> x);
bool contains_outer(const Granule& g, std::span<const double> x);

// One dimension of the membership ramp: 1 on [il, iu] (closed), 0 at or
// beyond the outer bounds, linear in between. Note the closed core: a point
// exactly on an inner bound has membership 1 even though strict containment
// says it is not "inside".
double dim_membership(double ol, double il, double iu, double ou, double x);

// Aggregates the per-dimension ramps with the chosen T-norm.
double membership(const Granule& g, std::span<const double> x, TNorm tnorm);

// Contraction factor for an inner hit, clamped into [0, beta]. Zero when x
// sits at an inner bound, beta when x sits at the center.
double shrink_factor(double center, double inner_lower, double x, double beta);

// Stretch factors for an outer-band hit. The lower-band factor lies in
// [0, beta] and reaches beta when x sits at the outer lower bound; the
// upper-band factor mirrors it in [-beta, 0].
double expand_factor_lower(double inner_lower, double outer_lower, double x,
                           double beta);
double expand_factor_upper(double inner_upper, double outer_upper, double x,
                           double beta);

// Contract both boxes toward the center. Per dimension the factor d scales
// the magnitude of the lower bounds; the same absolute delta is applied
// mirrored to both sides, so bounds only ever move inward. The _raw variant
// skips the floor clamp (bounds may cross the center); the guarded variant
// requires contains_inner and restores the floors.
void shrink_on_inner_raw(Granule& g, std::span<const double> x, double beta);
void shrink_on_inner(Granule& g, std::span<const double> x, double beta,
                     double epsilon);

// Translate the whole granule toward x by (x - center) / (support + 1).
// All five vectors move by the same delta; widths are preserved. Does not
// touch support; the caller decides when a hit counts.
void slide_toward(Granule& g, std::span<const double> x);

// Stretch both boxes away from the center for a point in the outer band.
// Per dimension only the band containing x fires; deltas mirror to the
// opposite side, so bounds only ever move outward. Same _raw/guarded split
// as shrink; the guarded variant requires contains_outer and not
// contains_inner.
void expand_on_outer_raw(Granule& g, std::span<const double> x, double beta);
void expand_on_outer(Granule& g, std::span<const double> x, double beta,
                     double epsilon);

// Clamp bounds back to the minimum widths around the center, then restore
// outer-contains-inner ordering.
void enforce_floors(Granule& g, double epsilon);

// New granule with support-weighted parameters: every vector moves from a
// toward b by support_b / (support_a + support_b). Supports and tallies add.
Granule merge_weighted_mean(const Granule& a, const Granule& b);

// New granule spanning both operands: per-box min/max bounds, center at the
// midpoint of the merged inner box. Supports and tallies add.
Granule merge_convex_hull(const Granule& a, const Granule& b);

// Shape check used by tests and debug asserts: ordering and width floors,
// with slack tol on the floor comparisons.
bool is_valid(const Granule& g, double epsilon, double tol = 1e-12);

}  // namespace eix
