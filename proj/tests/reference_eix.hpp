#pragma once

// Independent straight-line re-implementation of the online step, used as
// an oracle: everything in one place, no code shared with the library. The
// arithmetic follows the same update formulas written out longhand so state
// trajectories must match the library bit for bit.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

namespace refimpl {

struct RefGranule {
  std::vector<double> c, il, iu, ol, ou;
  std::int64_t n = 1;
  std::uint64_t id = 0;
  std::map<int, std::int64_t> tally;
};

struct RefModel {
  double eps = 0.055;
  double rho = 0.45;
  double alpha = 0.3;
  double beta = 0.3;
  bool weighted_merge = false;
  std::vector<RefGranule> gs;
  std::uint64_t next_id = 1;
  std::uint64_t h = 0;
};

inline void ref_floors(RefGranule& g, double eps) {
  for (std::size_t j = 0; j < g.c.size(); ++j) {
    const double c = g.c[j];
    g.il[j] = std::min(g.il[j], c - eps / 2);
    g.iu[j] = std::max(g.iu[j], c + eps / 2);
    g.ol[j] = std::min(g.ol[j], c - eps);
    g.ou[j] = std::max(g.ou[j], c + eps);
    g.ol[j] = std::min(g.ol[j], g.il[j]);
    g.ou[j] = std::max(g.ou[j], g.iu[j]);
  }
}

inline double ref_dist(const std::vector<double>& a,
                       const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j)
    acc = std::max(acc, std::abs(a[j] - b[j]));
  return acc;
}

inline void ref_merge_pass(RefModel& m, std::vector<std::uint64_t>* touched,
                           std::uint64_t* owner) {
  for (;;) {
    bool found = false;
    double best_d = 0.0;
    std::uint64_t best_lo = 0, best_hi = 0;
    std::size_t best_i = 0, best_j = 0;
    for (std::size_t i = 0; i + 1 < m.gs.size(); ++i) {
      for (std::size_t j = i + 1; j < m.gs.size(); ++j) {
        const double d = ref_dist(m.gs[i].c, m.gs[j].c);
        if (d > m.rho) continue;
        std::uint64_t lo = m.gs[i].id, hi = m.gs[j].id;
        if (lo > hi) std::swap(lo, hi);
        if (!found || d < best_d ||
            (d == best_d && (lo < best_lo || (lo == best_lo && hi < best_hi)))) {
          found = true;
          best_d = d;
          best_lo = lo;
          best_hi = hi;
          best_i = i;
          best_j = j;
        }
      }
    }
    if (!found) return;

    const RefGranule& a = m.gs[best_i];
    const RefGranule& b = m.gs[best_j];
    const std::size_t dims = a.c.size();
    RefGranule out;
    out.c.resize(dims);
    out.il.resize(dims);
    out.iu.resize(dims);
    out.ol.resize(dims);
    out.ou.resize(dims);
    if (m.weighted_merge) {
      const double w =
          static_cast<double>(b.n) / static_cast<double>(a.n + b.n);
      for (std::size_t j = 0; j < dims; ++j) {
        out.c[j] = a.c[j] - w * (a.c[j] - b.c[j]);
        out.il[j] = a.il[j] - w * (a.il[j] - b.il[j]);
        out.iu[j] = a.iu[j] - w * (a.iu[j] - b.iu[j]);
        out.ol[j] = a.ol[j] - w * (a.ol[j] - b.ol[j]);
        out.ou[j] = a.ou[j] - w * (a.ou[j] - b.ou[j]);
      }
    } else {
      for (std::size_t j = 0; j < dims; ++j) {
        out.il[j] = std::min(a.il[j], b.il[j]);
        out.iu[j] = std::max(a.iu[j], b.iu[j]);
        out.ol[j] = std::min(a.ol[j], b.ol[j]);
        out.ou[j] = std::max(a.ou[j], b.ou[j]);
        out.c[j] = (out.il[j] + out.iu[j]) / 2;
      }
    }
    out.n = a.n + b.n;
    out.tally = a.tally;
    for (const auto& kv : b.tally) out.tally[kv.first] += kv.second;
    ref_floors(out, m.eps);
    out.id = m.next_id++;

    if (owner && (*owner == best_lo || *owner == best_hi)) *owner = out.id;
    if (touched) {
      touched->push_back(best_lo);
      touched->push_back(best_hi);
    }
    m.gs.erase(m.gs.begin() + static_cast<std::ptrdiff_t>(best_j));
    m.gs.erase(m.gs.begin() + static_cast<std::ptrdiff_t>(best_i));
    m.gs.push_back(std::move(out));
  }
}

inline void ref_balance(RefModel& m) {
  const std::size_t k = m.gs.size();
  if (k == 0) return;
  const std::size_t dims = m.gs[0].c.size();
  std::vector<double> mean_in(dims, 0.0), mean_out(dims, 0.0);
  for (const RefGranule& g : m.gs) {
    for (std::size_t j = 0; j < dims; ++j) {
      mean_in[j] += g.iu[j] - g.il[j];
      mean_out[j] += g.ou[j] - g.ol[j];
    }
  }
  for (std::size_t j = 0; j < dims; ++j) {
    mean_in[j] /= static_cast<double>(k);
    mean_out[j] /= static_cast<double>(k);
  }
  for (RefGranule& g : m.gs) {
    for (std::size_t j = 0; j < dims; ++j) {
      const double wi = g.iu[j] - g.il[j];
      const double wo = g.ou[j] - g.ol[j];
      const double di = m.alpha * (mean_in[j] - wi);
      const double dn = m.alpha * (mean_out[j] - wo);
      g.il[j] -= di;
      g.iu[j] += di;
      g.ol[j] -= dn;
      g.ou[j] += dn;
    }
    ref_floors(g, m.eps);
  }
}

// One online step; returns the id of the granule owning x afterwards.
inline std::uint64_t ref_process(RefModel& m, const std::vector<double>& x) {
  m.h += 1;
  const std::size_t dims = x.size();

  // pick the target: strict inner containment first, then the outer band
  std::size_t target = m.gs.size();
  bool target_inner = false;
  {
    double best_d = 0.0;
    std::uint64_t best_id = 0;
    bool found = false;
    for (std::size_t i = 0; i < m.gs.size(); ++i) {
      const RefGranule& g = m.gs[i];
      bool inside = true;
      for (std::size_t j = 0; j < dims; ++j)
        if (!(g.il[j] < x[j] && x[j] < g.iu[j])) inside = false;
      if (!inside) continue;
      const double d = ref_dist(g.c, x);
      if (!found || d < best_d || (d == best_d && g.id < best_id)) {
        found = true;
        best_d = d;
        best_id = g.id;
        target = i;
      }
    }
    if (found) {
      target_inner = true;
    } else {
      for (std::size_t i = 0; i < m.gs.size(); ++i) {
        const RefGranule& g = m.gs[i];
        bool inside_inner = true, inside_outer = true;
        for (std::size_t j = 0; j < dims; ++j) {
          if (!(g.il[j] < x[j] && x[j] < g.iu[j])) inside_inner = false;
          if (!(g.ol[j] < x[j] && x[j] < g.ou[j])) inside_outer = false;
        }
        if (inside_inner || !inside_outer) continue;
        const double d = ref_dist(g.c, x);
        if (!found || d < best_d || (d == best_d && g.id < best_id)) {
          found = true;
          best_d = d;
          best_id = g.id;
          target = i;
        }
      }
    }
  }

  std::uint64_t owner = 0;
  if (target == m.gs.size()) {
    RefGranule g;
    g.c.assign(x.begin(), x.end());
    g.il.resize(dims);
    g.iu.resize(dims);
    g.ol.resize(dims);
    g.ou.resize(dims);
    for (std::size_t j = 0; j < dims; ++j) {
      g.il[j] = x[j] - m.eps / 2;
      g.iu[j] = x[j] + m.eps / 2;
      g.ol[j] = x[j] - m.eps;
      g.ou[j] = x[j] + m.eps;
    }
    g.n = 1;
    g.id = m.next_id++;
    owner = g.id;
    m.gs.push_back(std::move(g));
  } else if (target_inner) {
    RefGranule& g = m.gs[target];
    owner = g.id;
    for (std::size_t j = 0; j < dims; ++j) {
      double d = m.beta - m.beta * (std::abs(g.c[j] - x[j]) / (g.c[j] - g.il[j]));
      d = std::max(0.0, d);
      const double di = d * std::abs(g.il[j]);
      const double dn = d * std::abs(g.ol[j]);
      g.il[j] += di;
      g.iu[j] -= di;
      g.ol[j] += dn;
      g.ou[j] -= dn;
    }
    ref_floors(g, m.eps);
    for (std::size_t j = 0; j < dims; ++j) {
      const double delta = (x[j] - g.c[j]) / static_cast<double>(g.n + 1);
      g.c[j] += delta;
      g.il[j] += delta;
      g.iu[j] += delta;
      g.ol[j] += delta;
      g.ou[j] += delta;
    }
    g.n += 1;
  } else {
    RefGranule& g = m.gs[target];
    owner = g.id;
    for (std::size_t j = 0; j < dims; ++j) {
      if (x[j] <= g.il[j]) {
        double f = 0.0;
        if (g.il[j] > g.ol[j]) {
          f = m.beta * ((g.il[j] - x[j]) / (g.il[j] - g.ol[j]));
          if (f < 0.0) f = 0.0;
          if (f > m.beta) f = m.beta;
        }
        const double di = f * std::abs(g.il[j]);
        const double dn = f * std::abs(g.ol[j]);
        g.il[j] -= di;
        g.iu[j] += di;
        g.ol[j] -= dn;
        g.ou[j] += dn;
      } else if (x[j] >= g.iu[j]) {
        double f = 0.0;
        if (g.ou[j] > g.iu[j]) {
          f = m.beta * ((x[j] - g.iu[j]) / (g.ou[j] - g.iu[j]));
          if (f < 0.0) f = 0.0;
          if (f > m.beta) f = m.beta;
        }
        const double di = f * std::abs(g.iu[j]);
        const double dn = f * std::abs(g.ou[j]);
        g.iu[j] += di;
        g.il[j] -= di;
        g.ou[j] += dn;
        g.ol[j] -= dn;
      }
    }
    ref_floors(g, m.eps);
  }

  ref_merge_pass(m, nullptr, &owner);
  ref_balance(m);
  return owner;
}

inline void ref_process(RefModel& m, const std::vector<double>& x, int label) {
  const std::uint64_t owner = ref_process(m, x);
  for (RefGranule& g : m.gs)
    if (g.id == owner) g.tally[label] += 1;
}

}  // namespace refimpl
