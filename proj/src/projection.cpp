#include "eix/projection.hpp"

#include <stdexcept>

namespace eix {

namespace {

void require_dim(const Granule& g, std::size_t j) {
  if (j >= dim(g)) throw std::out_of_range("projection: dimension index");
}

}  // namespace

TrapezoidMF project_type1(const Granule& g, std::size_t j) {
  require_dim(g, j);
  return {g.outer.lower[j], g.inner.lower[j], g.inner.upper[j],
          g.outer.upper[j]};
}

IntervalType2MF project_type2(const Granule& g, std::size_t j) {
  require_dim(g, j);
  IntervalType2MF m;
  m.upper = project_type1(g, j);
  m.lower = {g.inner.lower[j], g.center[j], g.center[j], g.inner.upper[j]};
  return m;
}

double eval_mf(const TrapezoidMF& m, double x) {
  return dim_membership(m.a, m.b, m.c, m.d, x);
}

double area(const TrapezoidMF& m) { return ((m.d - m.a) + (m.c - m.b)) / 2; }

double fou_area(const IntervalType2MF& m) {
  return area(m.upper) - area(m.lower);
}

namespace {

nlohmann::json mf_json(const TrapezoidMF& m) {
  return nlohmann::json{{"a", m.a}, {"b", m.b}, {"c", m.c}, {"d", m.d}};
}

}  // namespace

nlohmann::json export_rulebase(const ModelState& s, bool type2) {
  nlohmann::json rules = nlohmann::json::array();
  for (const auto& e : s.granules) {
    nlohmann::json antecedents = nlohmann::json::array();
    for (std::size_t j = 0; j < dim(e.granule); ++j) {
      if (type2) {
        const IntervalType2MF m = project_type2(e.granule, j);
        antecedents.push_back({{"lower", mf_json(m.lower)},
                               {"upper", mf_json(m.upper)},
                               {"fou_area", fou_area(m)}});
      } else {
        antecedents.push_back(mf_json(project_type1(e.granule, j)));
      }
    }
    const auto label = majority_label(e.granule);
    rules.push_back({{"granule_id", e.id},
                     {"support", e.granule.support},
                     {"antecedents", std::move(antecedents)},
                     {"label", label ? nlohmann::json(*label)
                                     : nlohmann::json(nullptr)}});
  }
  return nlohmann::json{{"kind", type2 ? "type-2" : "type-1"},
                        {"dimension", s.dimension},
                        {"rules", std::move(rules)}};
}

}  // namespace eix
