#include "eix/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace eix {

std::string to_string(MergeMethod m) {
  return m == MergeMethod::WeightedMean ? "weighted-mean" : "convex-hull";
}

std::string to_string(TNorm t) { return t == TNorm::Min ? "min" : "product"; }

std::optional<MergeMethod> parse_merge_method(std::string_view s) {
  if (s == "weighted-mean") return MergeMethod::WeightedMean;
  if (s == "convex-hull") return MergeMethod::ConvexHull;
  return std::nullopt;
}

std::optional<TNorm> parse_tnorm(std::string_view s) {
  if (s == "min") return TNorm::Min;
  if (s == "product") return TNorm::Product;
  return std::nullopt;
}

void validate(const EngineConfig& cfg) {
  const auto bad = [](const std::string& what) {
    throw std::invalid_argument("config: " + what);
  };
  if (!std::isfinite(cfg.epsilon) || cfg.epsilon <= 0.0 || cfg.epsilon > 0.5)
    bad("epsilon must be in (0, 0.5]");
  if (!std::isfinite(cfg.rho) || cfg.rho < 0.0 || cfg.rho > 1.0)
    bad("rho must be in [0, 1]");
  if (!std::isfinite(cfg.alpha) || cfg.alpha < 0.0 || cfg.alpha > 1.0)
    bad("alpha must be in [0, 1]");
  if (!std::isfinite(cfg.beta) || cfg.beta <= 0.0 || cfg.beta >= 1.0)
    bad("beta must be in (0, 1)");
}

double linf_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("dimension mismatch in distance");
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j)
    acc = std::max(acc, std::abs(a[j] - b[j]));
  return acc;
}

namespace {

std::optional<Selection> best_candidate(const ModelState& s,
                                        std::span<const double> x,
                                        bool want_inner) {
  std::optional<Selection> best;
  for (std::size_t i = 0; i < s.granules.size(); ++i) {
    const auto& e = s.granules[i];
    const bool in_inner = contains_inner(e.granule, x);
    const bool hit = want_inner ? in_inner
                                : (!in_inner && contains_outer(e.granule, x));
    if (!hit) continue;
    const double d = linf_distance(e.granule.center, x);
    if (!best || d < best->distance ||
        (d == best->distance && e.id < best->id))
      best = Selection{i, e.id, want_inner, d};
  }
  return best;
}

}  // namespace

std::optional<Selection> select_granule(const ModelState& s,
                                        std::span<const double> x) {
  if (auto inner = best_candidate(s, x, true)) return inner;
  return best_candidate(s, x, false);
}

std::vector<MergeRecord> merge_pass(ModelState& s, const EngineConfig& cfg) {
  std::vector<MergeRecord> records;
  for (;;) {
    bool found = false;
    double best_d = 0.0;
    std::uint64_t best_lo = 0, best_hi = 0;
    std::size_t best_i = 0, best_j = 0;
    for (std::size_t i = 0; i + 1 < s.granules.size(); ++i) {
      for (std::size_t j = i + 1; j < s.granules.size(); ++j) {
        const double d = linf_distance(s.granules[i].granule.center,
                                       s.granules[j].granule.center);
        if (d > cfg.rho) continue;
        const auto [lo, hi] =
            std::minmax(s.granules[i].id, s.granules[j].id);
        if (!found || d < best_d ||
            (d == best_d &&
             (lo < best_lo || (lo == best_lo && hi < best_hi)))) {
          found = true;
          best_d = d;
          best_lo = lo;
          best_hi = hi;
          best_i = i;
          best_j = j;
        }
      }
    }
    if (!found) break;

    const Granule& a = s.granules[best_i].granule;
    const Granule& b = s.granules[best_j].granule;
    Granule merged = cfg.merge_method == MergeMethod::WeightedMean
                         ? merge_weighted_mean(a, b)
                         : merge_convex_hull(a, b);
    enforce_floors(merged, cfg.epsilon);

    const std::uint64_t merged_id = s.next_id++;
    records.push_back({s.clock, best_lo, best_hi, merged_id});
    s.granules.erase(s.granules.begin() + static_cast<std::ptrdiff_t>(best_j));
    s.granules.erase(s.granules.begin() + static_cast<std::ptrdiff_t>(best_i));
    s.granules.push_back({merged_id, std::move(merged)});
    s.stats.merges += 1;
  }
  s.merge_log.insert(s.merge_log.end(), records.begin(), records.end());
  return records;
}

void balance_pass(ModelState& s, const EngineConfig& cfg) {
  const std::size_t k = s.granules.size();
  if (k == 0) return;
  const std::size_t n = s.dimension ? s.dimension : dim(s.granules[0].granule);

  std::vector<double> mean_inner(n, 0.0), mean_outer(n, 0.0);
  for (const auto& e : s.granules) {
    for (std::size_t j = 0; j < n; ++j) {
      mean_inner[j] += e.granule.inner.upper[j] - e.granule.inner.lower[j];
      mean_outer[j] += e.granule.outer.upper[j] - e.granule.outer.lower[j];
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    mean_inner[j] /= static_cast<double>(k);
    mean_outer[j] /= static_cast<double>(k);
  }

  for (auto& e : s.granules) {
    Granule& g = e.granule;
    for (std::size_t j = 0; j < n; ++j) {
      const double wi = g.inner.upper[j] - g.inner.lower[j];
      const double wo = g.outer.upper[j] - g.outer.lower[j];
      const double di = cfg.alpha * (mean_inner[j] - wi);
      const double dn = cfg.alpha * (mean_outer[j] - wo);
      g.inner.lower[j] -= di;
      g.inner.upper[j] += di;
      g.outer.lower[j] -= dn;
      g.outer.upper[j] += dn;
    }
    enforce_floors(g, cfg.epsilon);
  }
}

namespace {

void require_instance(const ModelState& s, std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("empty instance");
  if (s.dimension != 0 && x.size() != s.dimension)
    throw std::invalid_argument("instance dimension does not match model");
  for (double v : x)
    if (!std::isfinite(v))
      throw std::invalid_argument("instance has a non-finite coordinate");
}

}  // namespace

StepEvent process(ModelState& s, std::span<const double> x,
                  const EngineConfig& cfg) {
  require_instance(s, x);
  if (s.dimension == 0) s.dimension = x.size();
  s.clock += 1;

  StepEvent ev;
  const auto sel = select_granule(s, x);
  if (!sel) {
    Granule g = make_granule(x, cfg.epsilon);
    const std::uint64_t id = s.next_id++;
    s.granules.push_back({id, std::move(g)});
    s.creation_log.push_back({s.clock, id});
    s.stats.creations += 1;
    ev.kind = StepEvent::Kind::Created;
    ev.granule_id = id;
    ev.membership_at_arrival = 0.0;
  } else {
    Granule& g = s.granules[sel->index].granule;
    ev.granule_id = sel->id;
    ev.membership_at_arrival = membership(g, x, cfg.tnorm);
    if (sel->inner) {
      ev.kind = StepEvent::Kind::InnerUpdate;
      shrink_on_inner(g, x, cfg.beta, cfg.epsilon);
      slide_toward(g, x);
      g.support += 1;
      s.stats.inner_updates += 1;
    } else {
      ev.kind = StepEvent::Kind::OuterUpdate;
      expand_on_outer(g, x, cfg.beta, cfg.epsilon);
      s.stats.outer_updates += 1;
    }
  }

  ev.merges = merge_pass(s, cfg);
  for (const auto& m : ev.merges)
    if (ev.granule_id == m.first_id || ev.granule_id == m.second_id)
      ev.granule_id = m.merged_id;

  balance_pass(s, cfg);
  return ev;
}

StepEvent process(ModelState& s, std::span<const double> x, int label,
                  const EngineConfig& cfg) {
  StepEvent ev = process(s, x, cfg);
  add_label(s, ev.granule_id, label);
  return ev;
}

void add_label(ModelState& s, std::uint64_t granule_id, int label) {
  for (auto& e : s.granules) {
    if (e.id == granule_id) {
      e.granule.label_tally[label] += 1;
      return;
    }
  }
  throw std::invalid_argument("add_label: no granule with the given id");
}

std::optional<int> majority_label(const Granule& g) {
  std::optional<int> best;
  std::int64_t best_count = 0;
  bool tied = false;
  for (const auto& [label, count] : g.label_tally) {
    if (count > best_count) {
      best = label;
      best_count = count;
      tied = false;
    } else if (count == best_count) {
      tied = true;
    }
  }
  if (!best || tied) return std::nullopt;
  return best;
}

std::optional<int> predict_label(const ModelState& s,
                                 std::span<const double> x) {
  if (s.granules.empty()) return std::nullopt;
  if (const auto sel = select_granule(s, x))
    return majority_label(s.granules[sel->index].granule);

  std::size_t best_i = 0;
  double best_d = std::numeric_limits<double>::infinity();
  std::uint64_t best_id = 0;
  bool found = false;
  for (std::size_t i = 0; i < s.granules.size(); ++i) {
    const double d = linf_distance(s.granules[i].granule.center, x);
    if (!found || d < best_d || (d == best_d && s.granules[i].id < best_id)) {
      found = true;
      best_i = i;
      best_d = d;
      best_id = s.granules[i].id;
    }
  }
  return majority_label(s.granules[best_i].granule);
}

}  // namespace eix
