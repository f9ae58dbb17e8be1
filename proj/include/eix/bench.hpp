#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eix/engine.hpp"

namespace eix::bench {

// Rotating twin-Gaussians stream. Two class clusters sit on a circle of
// radius sqrt(2) around (5, 5), class 1 starting at 225 degrees (so at
// (4, 4)) and class 2 at 45 degrees (at (6, 6)). Classes alternate
// deterministically, class 1 on odd h. After stationary_steps both cluster
// centers advance by phi_deg per step, so the second half of the default
// stream drifts by 0.45 * 200 = 90 degrees. Coordinates get isotropic
// N(0, sigma^2) noise, then are divided by 10 to land (mostly) in the unit
// square; samples falling outside are kept as-is.
struct GeneratorConfig {
  std::uint64_t steps = 400;
  std::uint64_t stationary_steps = 200;
  double phi_deg = 0.45;
  double sigma = 0.8;
  std::uint64_t seed = 1;
};

struct StreamInstance {
  std::uint64_t h = 0;
  std::vector<double> x;
  int label = 0;
};

// Deterministic per seed: exactly two noise draws per step from a
// mt19937_64 stream, same sequence on every run.
std::vector<StreamInstance> twin_gaussians(const GeneratorConfig& gc);

// Class 1 counts as positive. Wrong or missing predictions are false
// negatives when the true class is 1, false positives when it is 2, so
// (tp + tn) / total always equals the fraction of correct predictions.
struct Confusion {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;
};

double accuracy_pct(const Confusion& c);

struct StepRecord {
  std::uint64_t h = 0;  // 1-based position in the run
  std::size_t k = 0;    // granule count after the step
  std::optional<int> predicted;
  int actual = 0;
  bool correct = false;
  double cumulative_accuracy_pct = 0.0;
};

struct StageMetrics {
  std::string name;
  std::uint64_t instances = 0;
  Confusion confusion;
  std::uint64_t correct = 0;
  double accuracy_pct = 0.0;
  double mean_granules = 0.0;
  std::uint64_t creations = 0;
};

struct RunMetrics {
  std::vector<StepRecord> steps;
  StageMetrics overall;
  std::vector<StageMetrics> stages;  // stationary/nonstationary when split
  double wall_time_s = 0.0;
  std::size_t final_k = 0;
};

// Interleaved test-then-train over a labeled stream: predict each instance
// with the model as it stands, score it, then feed it to the engine. A
// stage_split strictly inside the stream adds per-stage metrics (the first
// stage_split instances against the rest). Throws std::invalid_argument on
// an invalid config; instance errors from the engine propagate.
RunMetrics prequential_run(const EngineConfig& cfg,
                           const std::vector<StreamInstance>& stream,
                           std::uint64_t stage_split);

// Same, but continues on an existing model (e.g. one restored from a
// snapshot). Metrics cover only the instances of this call.
RunMetrics prequential_run(const EngineConfig& cfg,
                           const std::vector<StreamInstance>& stream,
                           std::uint64_t stage_split, ModelState& model);

struct SweepCell {
  double epsilon = 0.0;
  double rho = 0.0;
};

struct SweepRow {
  double epsilon = 0.0;
  double rho = 0.0;
  std::string stage;
  double accuracy_pct = 0.0;
  double mean_granules = 0.0;
  double time_s = 0.0;
};

struct SweepSeriesPoint {
  double epsilon = 0.0;
  double rho = 0.0;
  std::uint64_t h = 0;
  double k_mean = 0.0;  // granule count averaged over seeds
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<SweepSeriesPoint> series;
};

// One prequential run per (cell, seed) on freshly generated streams; per
// cell and stage the rows carry seed-averaged accuracy, mean granule count
// and wall time. Throws std::invalid_argument when cells or seeds are
// empty.
SweepResult sweep(const EngineConfig& base, const GeneratorConfig& gen_base,
                  const std::vector<SweepCell>& cells,
                  const std::vector<std::uint64_t>& seeds);

}  // namespace eix::bench
