#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eix/granule.hpp"

namespace eix {

enum class MergeMethod { WeightedMean, ConvexHull };

std::string to_string(MergeMethod m);
std::string to_string(TNorm t);
std::optional<MergeMethod> parse_merge_method(std::string_view s);
std::optional<TNorm> parse_tnorm(std::string_view s);

struct EngineConfig {
  double epsilon = 0.055;  // minimum inner width, in (0, 0.5]
  double rho = 0.45;       // merge threshold on center distance, in [0, 1]
  double alpha = 0.3;      // width balancing rate, in [0, 1]
  double beta = 0.3;       // shrink/expand rate, in (0, 1)
  MergeMethod merge_method = MergeMethod::ConvexHull;
  TNorm tnorm = TNorm::Min;
};

// Throws std::invalid_argument naming the offending parameter.
void validate(const EngineConfig& cfg);

struct GranuleEntry {
  std::uint64_t id = 0;
  Granule granule;
};

struct CreationRecord {
  std::uint64_t h = 0;
  std::uint64_t id = 0;
};

// first_id < second_id always; merged_id is freshly assigned.
struct MergeRecord {
  std::uint64_t h = 0;
  std::uint64_t first_id = 0;
  std::uint64_t second_id = 0;
  std::uint64_t merged_id = 0;
};

struct RunStats {
  std::uint64_t inner_updates = 0;
  std::uint64_t outer_updates = 0;
  std::uint64_t creations = 0;
  std::uint64_t merges = 0;
};

// Whole model: granule list plus bookkeeping. The instance counter (clock)
// and the logs advance only through process(); dimension is fixed by the
// first instance seen.
struct ModelState {
  std::vector<GranuleEntry> granules;
  std::uint64_t clock = 0;
  std::uint64_t next_id = 1;
  std::size_t dimension = 0;
  std::vector<CreationRecord> creation_log;
  std::vector<MergeRecord> merge_log;
  RunStats stats;
};

struct Selection {
  std::size_t index = 0;   // position in state.granules
  std::uint64_t id = 0;
  bool inner = false;      // inner hit; false means outer-band hit
  double distance = 0.0;   // center distance, max norm
};

struct StepEvent {
  enum class Kind { InnerUpdate, OuterUpdate, Created };
  Kind kind = Kind::Created;
  // Owner of x after the step. When the target granule was merged away this
  // step, the id follows the merge chain to the surviving granule.
  std::uint64_t granule_id = 0;
  // Membership against the target granule as it was on arrival, before any
  // update: 1 for inner hits, in (0, 1] for outer hits, 0 for creations.
  double membership_at_arrival = 0.0;
  std::vector<MergeRecord> merges;
};

double linf_distance(std::span<const double> a, std::span<const double> b);

// Picks the granule x belongs to: granules whose inner box strictly
// contains x first, otherwise granules whose outer box strictly contains
// it; nearest center (max norm) wins, ties go to the lowest id. Empty
// optional means x belongs to no granule and a new one is due.
std::optional<Selection> select_granule(const ModelState& s,
                                        std::span<const double> x);

// Repeatedly merges the closest pair of granules with center distance
// <= cfg.rho until no pair qualifies. Distance ties pick the pair whose
// sorted id pair is lexicographically smallest. Each merged granule gets a
// fresh id and the width floors are re-applied to it. Never increases the
// granule count. Returns the merges performed, in order.
std::vector<MergeRecord> merge_pass(ModelState& s, const EngineConfig& cfg);

// Moves every granule's per-dimension widths toward the current mean width
// (inner and outer separately) at rate cfg.alpha, then re-applies floors.
// While no floor clamp engages, per-axis mean widths are preserved and each
// width deviation from the mean contracts by the factor (1 - 2*alpha).
void balance_pass(ModelState& s, const EngineConfig& cfg);

// One online step: route x to a granule (inner update: shrink, slide, then
// support + 1; outer update: expand; no match: create), then one merge
// pass, then one balance pass. Throws std::invalid_argument and leaves the
// state untouched when x has non-finite coordinates or the wrong dimension.
StepEvent process(ModelState& s, std::span<const double> x,
                  const EngineConfig& cfg);

// Same, then counts label on the granule that owns x after the step.
StepEvent process(ModelState& s, std::span<const double> x, int label,
                  const EngineConfig& cfg);

// Throws std::invalid_argument if no granule has this id.
void add_label(ModelState& s, std::uint64_t granule_id, int label);

// Highest-count label; empty or tied tally gives no label.
std::optional<int> majority_label(const Granule& g);

// Majority label of the granule select_granule picks; when none contains x,
// the granule with the nearest center (max norm, ties to lowest id). Empty
// model, empty tally or tie give no label.
std::optional<int> predict_label(const ModelState& s,
                                 std::span<const double> x);

}  // namespace eix
