#include "eix/snapshot.hpp"

#include <algorithm>
#include <fstream>

#include "eix/csv.hpp"

namespace eix {

namespace {

nlohmann::json tally_json(const std::map<int, std::int64_t>& tally) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [label, count] : tally)
    out[std::to_string(label)] = count;
  return out;
}

}  // namespace

nlohmann::json to_snapshot_json(const ModelState& s, const EngineConfig& cfg) {
  nlohmann::json granules = nlohmann::json::array();
  for (const auto& e : s.granules) {
    granules.push_back({{"id", e.id},
                        {"center", e.granule.center},
                        {"inner_lower", e.granule.inner.lower},
                        {"inner_upper", e.granule.inner.upper},
                        {"outer_lower", e.granule.outer.lower},
                        {"outer_upper", e.granule.outer.upper},
                        {"support", e.granule.support},
                        {"label_tally", tally_json(e.granule.label_tally)}});
  }
  return nlohmann::json{
      {"version", kSnapshotVersion},
      {"config",
       {{"epsilon", cfg.epsilon},
        {"rho", cfg.rho},
        {"alpha", cfg.alpha},
        {"beta", cfg.beta},
        {"merge_method", to_string(cfg.merge_method)},
        {"tnorm", to_string(cfg.tnorm)}}},
      {"h", s.clock},
      {"granules", std::move(granules)}};
}

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw SnapshotError("snapshot: " + what);
}

std::vector<double> vector_field(const nlohmann::json& g, const char* key,
                                 std::size_t n) {
  if (!g.contains(key) || !g[key].is_array()) fail(std::string(key) + " missing");
  std::vector<double> v = g[key].get<std::vector<double>>();
  if (v.size() != n) fail(std::string(key) + " has wrong length");
  return v;
}

}  // namespace

std::pair<ModelState, EngineConfig> from_snapshot_json(
    const nlohmann::json& j) {
  try {
    if (!j.is_object()) fail("document is not an object");
    if (!j.contains("version") || !j["version"].is_number_integer())
      fail("version missing");
    if (j["version"].get<int>() != kSnapshotVersion)
      fail("unsupported version " + j["version"].dump());

    EngineConfig cfg;
    const auto& c = j.at("config");
    cfg.epsilon = c.at("epsilon").get<double>();
    cfg.rho = c.at("rho").get<double>();
    cfg.alpha = c.at("alpha").get<double>();
    cfg.beta = c.at("beta").get<double>();
    const auto mm = parse_merge_method(c.at("merge_method").get<std::string>());
    if (!mm) fail("unknown merge_method");
    cfg.merge_method = *mm;
    const auto tn = parse_tnorm(c.at("tnorm").get<std::string>());
    if (!tn) fail("unknown tnorm");
    cfg.tnorm = *tn;
    try {
      validate(cfg);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }

    ModelState s;
    s.clock = j.at("h").get<std::uint64_t>();
    std::uint64_t max_id = 0;
    for (const auto& gj : j.at("granules")) {
      GranuleEntry e;
      e.id = gj.at("id").get<std::uint64_t>();
      if (e.id == 0) fail("granule id 0");
      const std::size_t n = gj.at("center").size();
      if (n == 0) fail("granule with empty center");
      e.granule.center = vector_field(gj, "center", n);
      e.granule.inner.lower = vector_field(gj, "inner_lower", n);
      e.granule.inner.upper = vector_field(gj, "inner_upper", n);
      e.granule.outer.lower = vector_field(gj, "outer_lower", n);
      e.granule.outer.upper = vector_field(gj, "outer_upper", n);
      e.granule.support = gj.at("support").get<std::int64_t>();
      if (e.granule.support < 1) fail("granule support < 1");
      if (gj.contains("label_tally")) {
        for (const auto& [key, val] : gj.at("label_tally").items()) {
          std::size_t pos = 0;
          int label = 0;
          try {
            label = std::stoi(key, &pos);
          } catch (const std::exception&) {
            fail("bad label key '" + key + "'");
          }
          if (pos != key.size()) fail("bad label key '" + key + "'");
          e.granule.label_tally[label] = val.get<std::int64_t>();
        }
      }
      if (s.dimension == 0)
        s.dimension = n;
      else if (n != s.dimension)
        fail("granules with mixed dimensions");
      for (const auto& other : s.granules)
        if (other.id == e.id) fail("duplicate granule id");
      max_id = std::max(max_id, e.id);
      s.granules.push_back(std::move(e));
    }
    s.next_id = max_id + 1;
    return {std::move(s), cfg};
  } catch (const SnapshotError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    fail(e.what());
  }
}

void save_snapshot(const std::filesystem::path& file, const ModelState& s,
                   const EngineConfig& cfg) {
  csv::atomic_write_text(file, to_snapshot_json(s, cfg).dump(2) + "\n");
}

std::pair<ModelState, EngineConfig> load_snapshot(
    const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw SnapshotError("snapshot: cannot open " + file.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SnapshotError(std::string("snapshot: ") + e.what());
  }
  return from_snapshot_json(j);
}

}  // namespace eix
