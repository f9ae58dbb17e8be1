#include "eix/bench.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace eix::bench {

std::vector<StreamInstance> twin_gaussians(const GeneratorConfig& gc) {
  constexpr double kPivot = 5.0;
  const double radius = std::sqrt(2.0);
  constexpr double kDegree = std::numbers::pi / 180.0;

  std::mt19937_64 rng(gc.seed);
  std::normal_distribution<double> noise(0.0, gc.sigma);

  double theta1 = 225.0 * kDegree;
  double theta2 = 45.0 * kDegree;
  const double phi = gc.phi_deg * kDegree;

  std::vector<StreamInstance> stream;
  stream.reserve(gc.steps);
  for (std::uint64_t h = 1; h <= gc.steps; ++h) {
    if (h > gc.stationary_steps) {
      theta1 += phi;
      theta2 += phi;
    }
    const int label = (h % 2 == 1) ? 1 : 2;
    const double theta = label == 1 ? theta1 : theta2;
    const double cx = kPivot + radius * std::cos(theta);
    const double cy = kPivot + radius * std::sin(theta);
    const double n1 = noise(rng);
    const double n2 = noise(rng);
    stream.push_back(
        {h, {(cx + n1) / 10.0, (cy + n2) / 10.0}, label});
  }
  return stream;
}

double accuracy_pct(const Confusion& c) {
  const std::uint64_t total = c.tp + c.fp + c.tn + c.fn;
  if (total == 0) return 0.0;
  return 100.0 * static_cast<double>(c.tp + c.tn) /
         static_cast<double>(total);
}

namespace {

void score(Confusion& c, int actual, bool correct) {
  if (actual == 1) {
    correct ? ++c.tp : ++c.fn;
  } else if (actual == 2) {
    correct ? ++c.tn : ++c.fp;
  }
}

void finish_stage(StageMetrics& m, double k_sum) {
  m.accuracy_pct = m.instances == 0
                       ? 0.0
                       : 100.0 * static_cast<double>(m.correct) /
                             static_cast<double>(m.instances);
  m.mean_granules =
      m.instances == 0 ? 0.0 : k_sum / static_cast<double>(m.instances);
}

}  // namespace

RunMetrics prequential_run(const EngineConfig& cfg,
                           const std::vector<StreamInstance>& stream,
                           std::uint64_t stage_split) {
  ModelState model;
  return prequential_run(cfg, stream, stage_split, model);
}

RunMetrics prequential_run(const EngineConfig& cfg,
                           const std::vector<StreamInstance>& stream,
                           std::uint64_t stage_split, ModelState& model) {
  validate(cfg);
  const bool staged = stage_split > 0 && stage_split < stream.size();

  RunMetrics rm;
  rm.overall.name = "overall";
  StageMetrics st1, st2;
  st1.name = "stationary";
  st2.name = "nonstationary";
  double k_sum_all = 0.0, k_sum_1 = 0.0, k_sum_2 = 0.0;
  std::uint64_t creations_before = model.stats.creations;

  const auto t0 = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const StreamInstance& inst = stream[i];
    const auto pred = predict_label(model, inst.x);
    const bool correct = pred.has_value() && *pred == inst.label;

    process(model, inst.x, inst.label, cfg);

    const std::uint64_t h = static_cast<std::uint64_t>(i) + 1;
    const std::size_t k = model.granules.size();
    const std::uint64_t created = model.stats.creations - creations_before;
    creations_before = model.stats.creations;

    rm.overall.instances += 1;
    rm.overall.correct += correct ? 1 : 0;
    rm.overall.creations += created;
    score(rm.overall.confusion, inst.label, correct);
    k_sum_all += static_cast<double>(k);

    if (staged) {
      StageMetrics& st = h <= stage_split ? st1 : st2;
      double& ks = h <= stage_split ? k_sum_1 : k_sum_2;
      st.instances += 1;
      st.correct += correct ? 1 : 0;
      st.creations += created;
      score(st.confusion, inst.label, correct);
      ks += static_cast<double>(k);
    }

    rm.steps.push_back(
        {h, k, pred, inst.label, correct,
         100.0 * static_cast<double>(rm.overall.correct) /
             static_cast<double>(h)});
  }
  const auto t1 = std::chrono::steady_clock::now();
  rm.wall_time_s = std::chrono::duration<double>(t1 - t0).count();

  finish_stage(rm.overall, k_sum_all);
  if (staged) {
    finish_stage(st1, k_sum_1);
    finish_stage(st2, k_sum_2);
    rm.stages.push_back(std::move(st1));
    rm.stages.push_back(std::move(st2));
  }
  rm.final_k = stream.empty() ? 0 : rm.steps.back().k;
  return rm;
}

SweepResult sweep(const EngineConfig& base, const GeneratorConfig& gen_base,
                  const std::vector<SweepCell>& cells,
                  const std::vector<std::uint64_t>& seeds) {
  if (cells.empty()) throw std::invalid_argument("sweep: no cells");
  if (seeds.empty()) throw std::invalid_argument("sweep: no seeds");

  SweepResult out;
  for (const SweepCell& cell : cells) {
    EngineConfig cfg = base;
    cfg.epsilon = cell.epsilon;
    cfg.rho = cell.rho;
    validate(cfg);

    const bool staged = gen_base.stationary_steps > 0 &&
                        gen_base.stationary_steps < gen_base.steps;
    const std::size_t n_stages = staged ? 2 : 1;
    std::vector<double> acc_sum(n_stages, 0.0), k_sum(n_stages, 0.0);
    double time_sum = 0.0;
    std::vector<double> k_series(gen_base.steps, 0.0);

    for (const std::uint64_t seed : seeds) {
      GeneratorConfig gc = gen_base;
      gc.seed = seed;
      const auto stream = twin_gaussians(gc);
      const RunMetrics rm =
          prequential_run(cfg, stream, gc.stationary_steps);
      time_sum += rm.wall_time_s;
      if (staged) {
        for (std::size_t si = 0; si < 2; ++si) {
          acc_sum[si] += rm.stages[si].accuracy_pct;
          k_sum[si] += rm.stages[si].mean_granules;
        }
      } else {
        acc_sum[0] += rm.overall.accuracy_pct;
        k_sum[0] += rm.overall.mean_granules;
      }
      for (std::size_t i = 0; i < rm.steps.size(); ++i)
        k_series[i] += static_cast<double>(rm.steps[i].k);
    }

    const double n_seeds = static_cast<double>(seeds.size());
    const double mean_time = time_sum / n_seeds;
    for (std::size_t si = 0; si < n_stages; ++si) {
      const char* name =
          !staged ? "overall" : (si == 0 ? "stationary" : "nonstationary");
      out.rows.push_back({cell.epsilon, cell.rho, name, acc_sum[si] / n_seeds,
                          k_sum[si] / n_seeds, mean_time});
    }
    for (std::uint64_t h = 1; h <= gen_base.steps; ++h)
      out.series.push_back(
          {cell.epsilon, cell.rho, h, k_series[h - 1] / n_seeds});
  }
  return out;
}

}  // namespace eix::bench
