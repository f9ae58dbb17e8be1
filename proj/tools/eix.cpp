#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eix/bench.hpp"
#include "eix/csv.hpp"
#include "eix/engine.hpp"
#include "eix/projection.hpp"
#include "eix/snapshot.hpp"

namespace {

using eix::csv::format_double;

struct EngineFlags {
  double epsilon = 0.055;
  double rho = 0.45;
  double alpha = 0.3;
  double beta = 0.3;
  std::string merge = "convex-hull";
  std::string tnorm = "min";

  CLI::Option* epsilon_opt = nullptr;
  CLI::Option* rho_opt = nullptr;
  CLI::Option* alpha_opt = nullptr;
  CLI::Option* beta_opt = nullptr;
  CLI::Option* merge_opt = nullptr;
  CLI::Option* tnorm_opt = nullptr;

  void attach(CLI::App* cmd) {
    epsilon_opt = cmd->add_option("--epsilon", epsilon,
                                  "minimum inner box width, in (0, 0.5]")
                      ->capture_default_str();
    rho_opt = cmd->add_option("--rho", rho,
                              "merge threshold on center distance, in [0, 1]")
                  ->capture_default_str();
    alpha_opt =
        cmd->add_option("--alpha", alpha, "width balancing rate, in [0, 1]")
            ->capture_default_str();
    beta_opt =
        cmd->add_option("--beta", beta, "shrink/expand rate, in (0, 1)")
            ->capture_default_str();
    merge_opt = cmd->add_option("--merge", merge, "merge method")
                    ->check(CLI::IsMember({"weighted-mean", "convex-hull"}))
                    ->capture_default_str();
    tnorm_opt = cmd->add_option("--tnorm", tnorm, "membership aggregation")
                    ->check(CLI::IsMember({"min", "product"}))
                    ->capture_default_str();
  }

  // Build a config from the flags; with a base (a restored snapshot's
  // config), only flags given explicitly override it.
  eix::EngineConfig to_config(
      const std::optional<eix::EngineConfig>& base) const {
    eix::EngineConfig cfg = base.value_or(eix::EngineConfig{});
    if (!base || epsilon_opt->count()) cfg.epsilon = epsilon;
    if (!base || rho_opt->count()) cfg.rho = rho;
    if (!base || alpha_opt->count()) cfg.alpha = alpha;
    if (!base || beta_opt->count()) cfg.beta = beta;
    if (!base || merge_opt->count()) cfg.merge_method = *eix::parse_merge_method(merge);
    if (!base || tnorm_opt->count()) cfg.tnorm = *eix::parse_tnorm(tnorm);
    eix::validate(cfg);
    return cfg;
  }
};

std::vector<double> parse_double_list(const std::string& s,
                                      const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw std::invalid_argument(flag + ": bad number '" + item + "'");
    }
  }
  if (out.empty()) throw std::invalid_argument(flag + ": empty list");
  return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& s,
                                           const std::string& flag) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      const unsigned long long v = std::stoull(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw std::invalid_argument(flag + ": bad seed '" + item + "'");
    }
  }
  if (out.empty()) throw std::invalid_argument(flag + ": empty list");
  return out;
}

std::string stream_csv_text(const std::vector<eix::bench::StreamInstance>& v) {
  std::string out = "h,x1,x2,label\n";
  for (const auto& inst : v) {
    out += std::to_string(inst.h);
    for (const double c : inst.x) {
      out += ',';
      out += format_double(c);
    }
    out += ',';
    out += std::to_string(inst.label);
    out += '\n';
  }
  return out;
}

void append_stage_summary(std::string& out, const eix::bench::StageMetrics& m,
                          bool labeled) {
  out += "# " + m.name + "," + std::to_string(m.instances);
  if (labeled) {
    out += "," + format_double(m.accuracy_pct);
  }
  out += "," + format_double(m.mean_granules) + "," +
         std::to_string(m.creations);
  if (labeled) {
    const auto& c = m.confusion;
    out += "," + std::to_string(c.tp) + "," + std::to_string(c.fp) + "," +
           std::to_string(c.tn) + "," + std::to_string(c.fn);
  }
  out += '\n';
}

std::string metrics_csv_text(const eix::bench::RunMetrics& rm, bool labeled) {
  std::string out = "h,k,pred,true,correct,cum_acc\n";
  for (const auto& st : rm.steps) {
    out += std::to_string(st.h) + "," + std::to_string(st.k) + ",";
    if (labeled) {
      if (st.predicted) out += std::to_string(*st.predicted);
      out += "," + std::to_string(st.actual) + "," +
             (st.correct ? "1" : "0") + "," +
             format_double(st.cumulative_accuracy_pct);
    } else {
      out += ",,,";
    }
    out += '\n';
  }
  out += labeled
             ? "# stage,instances,accuracy_pct,mean_granules,creations,tp,fp,tn,fn\n"
             : "# stage,instances,mean_granules,creations\n";
  append_stage_summary(out, rm.overall, labeled);
  for (const auto& st : rm.stages) append_stage_summary(out, st, labeled);
  out += "# wall_time_s," + format_double(rm.wall_time_s) + "\n";
  out += "# final_k," + std::to_string(rm.final_k) + "\n";
  return out;
}

// Unlabeled variant of the prequential loop: clustering only.
eix::bench::RunMetrics cluster_run(const eix::EngineConfig& cfg,
                                   const std::vector<eix::csv::StreamRow>& rows,
                                   std::uint64_t stage_split,
                                   eix::ModelState& model) {
  eix::validate(cfg);
  eix::bench::RunMetrics rm;
  rm.overall.name = "overall";
  const bool staged = stage_split > 0 && stage_split < rows.size();
  eix::bench::StageMetrics st1, st2;
  st1.name = "stationary";
  st2.name = "nonstationary";
  double k_all = 0.0, k_1 = 0.0, k_2 = 0.0;
  std::uint64_t creations_before = model.stats.creations;

  const auto t0 = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    eix::process(model, rows[i].x, cfg);
    const std::uint64_t h = static_cast<std::uint64_t>(i) + 1;
    const std::size_t k = model.granules.size();
    const std::uint64_t created = model.stats.creations - creations_before;
    creations_before = model.stats.creations;
    rm.overall.instances += 1;
    rm.overall.creations += created;
    k_all += static_cast<double>(k);
    if (staged) {
      auto& st = h <= stage_split ? st1 : st2;
      (h <= stage_split ? k_1 : k_2) += static_cast<double>(k);
      st.instances += 1;
      st.creations += created;
    }
    rm.steps.push_back({h, k, std::nullopt, 0, false, 0.0});
  }
  const auto t1 = std::chrono::steady_clock::now();
  rm.wall_time_s = std::chrono::duration<double>(t1 - t0).count();

  rm.overall.mean_granules =
      rm.overall.instances == 0
          ? 0.0
          : k_all / static_cast<double>(rm.overall.instances);
  if (staged) {
    st1.mean_granules = st1.instances ? k_1 / static_cast<double>(st1.instances) : 0.0;
    st2.mean_granules = st2.instances ? k_2 / static_cast<double>(st2.instances) : 0.0;
    rm.stages.push_back(std::move(st1));
    rm.stages.push_back(std::move(st2));
  }
  rm.final_k = model.granules.size();
  return rm;
}

std::string grid_csv_text(const eix::ModelState& model,
                          const eix::EngineConfig& cfg, std::size_t res) {
  std::string out = "x1,x2,label,membership,granule_id\n";
  for (std::size_t iy = 0; iy < res; ++iy) {
    for (std::size_t ix = 0; ix < res; ++ix) {
      const double x1 =
          res == 1 ? 0.0 : static_cast<double>(ix) / static_cast<double>(res - 1);
      const double x2 =
          res == 1 ? 0.0 : static_cast<double>(iy) / static_cast<double>(res - 1);
      const std::vector<double> x{x1, x2};
      double best_mu = 0.0;
      for (const auto& e : model.granules)
        best_mu = std::max(best_mu, eix::membership(e.granule, x, cfg.tnorm));
      const auto label = eix::predict_label(model, x);

      std::optional<std::uint64_t> owner;
      if (const auto sel = eix::select_granule(model, x)) {
        owner = sel->id;
      } else if (!model.granules.empty()) {
        double best_d = 0.0;
        for (const auto& e : model.granules) {
          const double d = eix::linf_distance(e.granule.center, x);
          if (!owner || d < best_d) {
            owner = e.id;
            best_d = d;
          }
        }
      }

      out += format_double(x1) + "," + format_double(x2) + ",";
      if (label) out += std::to_string(*label);
      out += "," + format_double(best_mu) + ",";
      if (owner) out += std::to_string(*owner);
      out += '\n';
    }
  }
  return out;
}

struct GenArgs {
  std::string output;
  std::uint64_t steps = 400;
  std::uint64_t stage_split = 200;
  std::uint64_t seed = 1;
  double phi_deg = 0.45;
  double sigma = 0.8;
};

struct RunArgs {
  std::string input;
  std::string output;
  std::string snapshot_out;
  std::string resume;
  std::string grid_out;
  std::size_t grid_res = 101;
  std::uint64_t stage_split = 0;
  EngineFlags flags;
};

struct ExportArgs {
  std::string snapshot;
  std::string output;
  std::string kind = "type-1";
};

struct SweepArgs {
  std::string output;
  std::string series_out;
  std::string epsilon_grid = "0.035,0.045,0.055,0.065";
  std::string rho_grid = "0.25,0.35,0.45,0.55";
  std::string seeds = "1,2,3,4,5,6,7,8,9,10";
  std::uint64_t steps = 400;
  std::uint64_t stage_split = 200;
  double phi_deg = 0.45;
  double sigma = 0.8;
  EngineFlags flags;
};

void check_generator(double sigma, double phi_deg) {
  if (!std::isfinite(sigma) || sigma <= 0.0)
    throw std::invalid_argument("sigma must be positive");
  if (!std::isfinite(phi_deg))
    throw std::invalid_argument("phi-deg must be finite");
}

int cmd_gen(const GenArgs& a) {
  check_generator(a.sigma, a.phi_deg);
  eix::bench::GeneratorConfig gc;
  gc.steps = a.steps;
  gc.stationary_steps = a.stage_split;
  gc.phi_deg = a.phi_deg;
  gc.sigma = a.sigma;
  gc.seed = a.seed;
  const auto stream = eix::bench::twin_gaussians(gc);
  eix::csv::atomic_write_text(a.output, stream_csv_text(stream));
  std::cout << "wrote " << stream.size() << " instances to " << a.output
            << "\n";
  return 0;
}

int cmd_run(const RunArgs& a) {
  std::optional<eix::EngineConfig> base;
  eix::ModelState model;
  if (!a.resume.empty()) {
    auto [restored, cfg0] = eix::load_snapshot(a.resume);
    model = std::move(restored);
    base = cfg0;
  }
  const eix::EngineConfig cfg = a.flags.to_config(base);

  const eix::csv::StreamFile in = eix::csv::read_stream_csv(a.input);
  eix::bench::RunMetrics rm;
  if (in.labeled) {
    std::vector<eix::bench::StreamInstance> stream;
    stream.reserve(in.rows.size());
    for (std::size_t i = 0; i < in.rows.size(); ++i)
      stream.push_back({static_cast<std::uint64_t>(i) + 1, in.rows[i].x,
                        *in.rows[i].label});
    rm = eix::bench::prequential_run(cfg, stream, a.stage_split, model);
  } else {
    rm = cluster_run(cfg, in.rows, a.stage_split, model);
  }

  if (!a.grid_out.empty() && model.dimension != 2)
    throw std::invalid_argument("--grid-out needs a 2-dimensional model");

  if (!a.output.empty())
    eix::csv::atomic_write_text(a.output, metrics_csv_text(rm, in.labeled));
  if (!a.snapshot_out.empty()) eix::save_snapshot(a.snapshot_out, model, cfg);
  if (!a.grid_out.empty())
    eix::csv::atomic_write_text(a.grid_out, grid_csv_text(model, cfg, a.grid_res));

  std::cout << "instances=" << rm.overall.instances << " final_k=" << rm.final_k
            << " mean_k=" << format_double(rm.overall.mean_granules);
  if (in.labeled)
    std::cout << " accuracy=" << format_double(rm.overall.accuracy_pct) << "%";
  for (const auto& st : rm.stages) {
    std::cout << " " << st.name << "=";
    if (in.labeled)
      std::cout << format_double(st.accuracy_pct) << "%/";
    std::cout << "k" << format_double(st.mean_granules);
  }
  std::cout << " wall=" << format_double(rm.wall_time_s) << "s\n";
  return 0;
}

int cmd_export_rules(const ExportArgs& a) {
  const auto [model, cfg] = eix::load_snapshot(a.snapshot);
  (void)cfg;
  const nlohmann::json rules =
      eix::export_rulebase(model, a.kind == "type-2");
  eix::csv::atomic_write_text(a.output, rules.dump(2) + "\n");
  std::cout << "wrote " << rules["rules"].size() << " rules to " << a.output
            << "\n";
  return 0;
}

int cmd_sweep(const SweepArgs& a) {
  check_generator(a.sigma, a.phi_deg);
  const auto eps_grid = parse_double_list(a.epsilon_grid, "--epsilon-grid");
  const auto rho_grid = parse_double_list(a.rho_grid, "--rho-grid");
  const auto seeds = parse_seed_list(a.seeds, "--seeds");

  std::vector<eix::bench::SweepCell> cells;
  for (const double e : eps_grid)
    for (const double r : rho_grid) cells.push_back({e, r});

  eix::bench::GeneratorConfig gc;
  gc.steps = a.steps;
  gc.stationary_steps = a.stage_split;
  gc.phi_deg = a.phi_deg;
  gc.sigma = a.sigma;

  const eix::EngineConfig base = a.flags.to_config(std::nullopt);
  const eix::bench::SweepResult res =
      eix::bench::sweep(base, gc, cells, seeds);

  std::string out = "epsilon,rho,stage,acc,avg_granules,time_s\n";
  for (const auto& row : res.rows)
    out += format_double(row.epsilon) + "," + format_double(row.rho) + "," +
           row.stage + "," + format_double(row.accuracy_pct) + "," +
           format_double(row.mean_granules) + "," +
           format_double(row.time_s) + "\n";
  eix::csv::atomic_write_text(a.output, out);

  if (!a.series_out.empty()) {
    std::string series = "epsilon,rho,h,k_mean\n";
    for (const auto& p : res.series)
      series += format_double(p.epsilon) + "," + format_double(p.rho) + "," +
                std::to_string(p.h) + "," + format_double(p.k_mean) + "\n";
    eix::csv::atomic_write_text(a.series_out, series);
  }
  std::cout << "swept " << cells.size() << " cells x " << seeds.size()
            << " seeds into " << a.output << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evolving double-boundary fuzzy clustering over data streams"};
  app.require_subcommand(1);
  app.set_config("--config", "", "configuration file (also via EIX_CONFIG)")
      ->envname("EIX_CONFIG");

  GenArgs gen;
  CLI::App* cgen = app.add_subcommand("gen", "generate a benchmark stream");
  cgen->add_option("--output", gen.output, "stream CSV path")->required();
  cgen->add_option("--steps", gen.steps, "stream length")
      ->capture_default_str();
  cgen->add_option("--stage-split", gen.stage_split,
                   "steps before drift begins")
      ->capture_default_str();
  cgen->add_option("--seed", gen.seed, "generator seed")->capture_default_str();
  cgen->add_option("--phi-deg", gen.phi_deg, "drift, degrees per step")
      ->capture_default_str();
  cgen->add_option("--sigma", gen.sigma, "noise standard deviation")
      ->capture_default_str();

  RunArgs run;
  CLI::App* crun = app.add_subcommand("run", "process a stream CSV");
  crun->add_option("--input", run.input, "stream CSV path")->required();
  crun->add_option("--output", run.output, "metrics CSV path");
  crun->add_option("--snapshot", run.snapshot_out,
                   "write the final model as JSON");
  crun->add_option("--resume", run.resume, "start from a model snapshot");
  crun->add_option("--grid-out", run.grid_out,
                   "decision grid CSV over the unit square (2-D models)");
  crun->add_option("--grid-res", run.grid_res, "grid points per axis")
      ->capture_default_str();
  crun->add_option("--stage-split", run.stage_split,
                   "instances in the first metrics stage (0 = single stage)")
      ->capture_default_str();
  run.flags.attach(crun);

  ExportArgs exp;
  CLI::App* cexp =
      app.add_subcommand("export-rules", "project a snapshot to fuzzy rules");
  cexp->add_option("--snapshot", exp.snapshot, "model snapshot path")
      ->required();
  cexp->add_option("--output", exp.output, "rulebase JSON path")->required();
  cexp->add_option("--kind", exp.kind, "rule kind")
      ->check(CLI::IsMember({"type-1", "type-2"}))
      ->capture_default_str();

  SweepArgs sweep;
  CLI::App* csweep =
      app.add_subcommand("sweep", "grid evaluation on generated streams");
  csweep->add_option("--output", sweep.output, "summary CSV path")->required();
  csweep->add_option("--series-out", sweep.series_out,
                     "per-step mean granule counts CSV");
  csweep->add_option("--epsilon-grid", sweep.epsilon_grid,
                     "comma-separated epsilon values")
      ->capture_default_str();
  csweep->add_option("--rho-grid", sweep.rho_grid,
                     "comma-separated rho values")
      ->capture_default_str();
  csweep->add_option("--seeds", sweep.seeds, "comma-separated seeds")
      ->capture_default_str();
  csweep->add_option("--steps", sweep.steps, "stream length")
      ->capture_default_str();
  csweep->add_option("--stage-split", sweep.stage_split,
                     "steps before drift begins")
      ->capture_default_str();
  csweep->add_option("--phi-deg", sweep.phi_deg, "drift, degrees per step")
      ->capture_default_str();
  csweep->add_option("--sigma", sweep.sigma, "noise standard deviation")
      ->capture_default_str();
  sweep.flags.attach(csweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cgen->parsed()) return cmd_gen(gen);
    if (crun->parsed()) return cmd_run(run);
    if (cexp->parsed()) return cmd_export_rules(exp);
    if (csweep->parsed()) return cmd_sweep(sweep);
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const eix::csv::CsvError& e) {
    std::cerr << "data error at line " << e.line << ": " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
