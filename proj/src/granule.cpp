#include "eix/granule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eix {

std::size_t dim(const Granule& g) { return g.center.size(); }

namespace {

void require_point(const Granule& g, std::span<const double> x) {
  if (x.size() != dim(g))
    throw std::invalid_argument("point dimension does not match granule");
  for (double v : x)
    if (!std::isfinite(v))
      throw std::invalid_argument("point has a non-finite coordinate");
}

}  // namespace

Granule make_granule(std::span<const double> x, double epsilon) {
  if (x.empty()) throw std::invalid_argument("empty point");
  for (double v : x)
    if (!std::isfinite(v))
      throw std::invalid_argument("point has a non-finite coordinate");

  Granule g;
  const std::size_t n = x.size();
  g.center.assign(x.begin(), x.end());
  g.inner.lower.resize(n);
  g.inner.upper.resize(n);
  g.outer.lower.resize(n);
  g.outer.upper.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    g.inner.lower[j] = x[j] - epsilon / 2;
    g.inner.upper[j] = x[j] + epsilon / 2;
    g.outer.lower[j] = x[j] - epsilon;
    g.outer.upper[j] = x[j] + epsilon;
  }
  g.support = 1;
  return g;
}

bool contains_inner(const Granule& g, std::span<const double> x) {
  require_point(g, x);
  for (std::size_t j = 0; j < x.size(); ++j)
    if (!(g.inner.lower[j] < x[j] && x[j] < g.inner.upper[j])) return false;
  return true;
}

bool contains_outer(const Granule& g, std::span<const double> x) {
  require_point(g, x);
  for (std::size_t j = 0; j < x.size(); ++j)
    if (!(g.outer.lower[j] < x[j] && x[j] < g.outer.upper[j])) return false;
  return true;
}

double dim_membership(double ol, double il, double iu, double ou, double x) {
  if (x >= il && x <= iu) return 1.0;
  if (x <= ol || x >= ou) return 0.0;
  if (x < il) return (x - ol) / (il - ol);
  return (ou - x) / (ou - iu);
}

double membership(const Granule& g, std::span<const double> x, TNorm tnorm) {
  require_point(g, x);
  double acc = 1.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double mu = dim_membership(g.outer.lower[j], g.inner.lower[j],
                                     g.inner.upper[j], g.outer.upper[j], x[j]);
    acc = tnorm == TNorm::Min ? std::min(acc, mu) : acc * mu;
  }
  return acc;
}

double shrink_factor(double center, double inner_lower, double x,
                     double beta) {
  const double d = beta - beta * (std::abs(center - x) / (center - inner_lower));
  return std::max(0.0, d);
}

double expand_factor_lower(double inner_lower, double outer_lower, double x,
                           double beta) {
  if (!(inner_lower > outer_lower)) return 0.0;
  const double f = beta * ((inner_lower - x) / (inner_lower - outer_lower));
  return std::clamp(f, 0.0, beta);
}

double expand_factor_upper(double inner_upper, double outer_upper, double x,
                           double beta) {
  if (!(outer_upper > inner_upper)) return 0.0;
  const double f = -(beta * ((x - inner_upper) / (outer_upper - inner_upper)));
  return std::clamp(f, -beta, 0.0);
}

void shrink_on_inner_raw(Granule& g, std::span<const double> x, double beta) {
  require_point(g, x);
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double d = shrink_factor(g.center[j], g.inner.lower[j], x[j], beta);
    const double di = d * std::abs(g.inner.lower[j]);
    const double dn = d * std::abs(g.outer.lower[j]);
    g.inner.lower[j] += di;
    g.inner.upper[j] -= di;
    g.outer.lower[j] += dn;
    g.outer.upper[j] -= dn;
  }
}

void shrink_on_inner(Granule& g, std::span<const double> x, double beta,
                     double epsilon) {
  if (!contains_inner(g, x))
    throw std::invalid_argument("shrink_on_inner: point not inside inner box");
  shrink_on_inner_raw(g, x, beta);
  enforce_floors(g, epsilon);
}

void slide_toward(Granule& g, std::span<const double> x) {
  require_point(g, x);
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double delta =
        (x[j] - g.center[j]) / static_cast<double>(g.support + 1);
    g.center[j] += delta;
    g.inner.lower[j] += delta;
    g.inner.upper[j] += delta;
    g.outer.lower[j] += delta;
    g.outer.upper[j] += delta;
  }
}

void expand_on_outer_raw(Granule& g, std::span<const double> x, double beta) {
  require_point(g, x);
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] <= g.inner.lower[j]) {
      const double f =
          expand_factor_lower(g.inner.lower[j], g.outer.lower[j], x[j], beta);
      const double di = f * std::abs(g.inner.lower[j]);
      const double dn = f * std::abs(g.outer.lower[j]);
      g.inner.lower[j] -= di;
      g.inner.upper[j] += di;
      g.outer.lower[j] -= dn;
      g.outer.upper[j] += dn;
    } else if (x[j] >= g.inner.upper[j]) {
      const double f = -expand_factor_upper(g.inner.upper[j], g.outer.upper[j],
                                            x[j], beta);
      const double di = f * std::abs(g.inner.upper[j]);
      const double dn = f * std::abs(g.outer.upper[j]);
      g.inner.upper[j] += di;
      g.inner.lower[j] -= di;
      g.outer.upper[j] += dn;
      g.outer.lower[j] -= dn;
    }
  }
}

void expand_on_outer(Granule& g, std::span<const double> x, double beta,
                     double epsilon) {
  if (!contains_outer(g, x) || contains_inner(g, x))
    throw std::invalid_argument(
        "expand_on_outer: point not inside the outer band");
  expand_on_outer_raw(g, x, beta);
  enforce_floors(g, epsilon);
}

void enforce_floors(Granule& g, double epsilon) {
  for (std::size_t j = 0; j < dim(g); ++j) {
    const double c = g.center[j];
    g.inner.lower[j] = std::min(g.inner.lower[j], c - epsilon / 2);
    g.inner.upper[j] = std::max(g.inner.upper[j], c + epsilon / 2);
    g.outer.lower[j] = std::min(g.outer.lower[j], c - epsilon);
    g.outer.upper[j] = std::max(g.outer.upper[j], c + epsilon);
    g.outer.lower[j] = std::min(g.outer.lower[j], g.inner.lower[j]);
    g.outer.upper[j] = std::max(g.outer.upper[j], g.inner.upper[j]);
  }
}

namespace {

void require_same_dim(const Granule& a, const Granule& b) {
  if (dim(a) != dim(b))
    throw std::invalid_argument("granule dimensions do not match");
}

void merge_bookkeeping(Granule& out, const Granule& a, const Granule& b) {
  out.support = a.support + b.support;
  out.label_tally = a.label_tally;
  for (const auto& [label, count] : b.label_tally)
    out.label_tally[label] += count;
}

}  // namespace

Granule merge_weighted_mean(const Granule& a, const Granule& b) {
  require_same_dim(a, b);
  const double w = static_cast<double>(b.support) /
                   static_cast<double>(a.support + b.support);
  const std::size_t n = dim(a);
  Granule out;
  out.center.resize(n);
  out.inner.lower.resize(n);
  out.inner.upper.resize(n);
  out.outer.lower.resize(n);
  out.outer.upper.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.center[j] = a.center[j] - w * (a.center[j] - b.center[j]);
    out.inner.lower[j] =
        a.inner.lower[j] - w * (a.inner.lower[j] - b.inner.lower[j]);
    out.inner.upper[j] =
        a.inner.upper[j] - w * (a.inner.upper[j] - b.inner.upper[j]);
    out.outer.lower[j] =
        a.outer.lower[j] - w * (a.outer.lower[j] - b.outer.lower[j]);
    out.outer.upper[j] =
        a.outer.upper[j] - w * (a.outer.upper[j] - b.outer.upper[j]);
  }
  merge_bookkeeping(out, a, b);
  return out;
}

Granule merge_convex_hull(const Granule& a, const Granule& b) {
  require_same_dim(a, b);
  const std::size_t n = dim(a);
  Granule out;
  out.center.resize(n);
  out.inner.lower.resize(n);
  out.inner.upper.resize(n);
  out.outer.lower.resize(n);
  out.outer.upper.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    out.inner.lower[j] = std::min(a.inner.lower[j], b.inner.lower[j]);
    out.inner.upper[j] = std::max(a.inner.upper[j], b.inner.upper[j]);
    out.outer.lower[j] = std::min(a.outer.lower[j], b.outer.lower[j]);
    out.outer.upper[j] = std::max(a.outer.upper[j], b.outer.upper[j]);
    out.center[j] = (out.inner.lower[j] + out.inner.upper[j]) / 2;
  }
  merge_bookkeeping(out, a, b);
  return out;
}

bool is_valid(const Granule& g, double epsilon, double tol) {
  const std::size_t n = dim(g);
  if (g.inner.lower.size() != n || g.inner.upper.size() != n ||
      g.outer.lower.size() != n || g.outer.upper.size() != n)
    return false;
  if (g.support < 1) return false;
  for (std::size_t j = 0; j < n; ++j) {
    const double c = g.center[j];
    if (!std::isfinite(c)) return false;
    if (g.outer.lower[j] > g.inner.lower[j] + tol) return false;
    if (g.inner.upper[j] > g.outer.upper[j] + tol) return false;
    if (g.inner.lower[j] > c - epsilon / 2 + tol) return false;
    if (g.inner.upper[j] < c + epsilon / 2 - tol) return false;
    if (g.outer.lower[j] > c - epsilon + tol) return false;
    if (g.outer.upper[j] < c + epsilon - tol) return false;
  }
  return true;
}

}  // namespace eix
