#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "horient/checkpoint.hpp"
#include "horient/config.hpp"
#include "horient/dataset.hpp"
#include "horient/errors.hpp"
#include "horient/evalreport.hpp"
#include "horient/sim.hpp"
#include "horient/train.hpp"

namespace fs = std::filesystem;
using horient::ConfigError;
using horient::ConfigTable;
using nlohmann::ordered_json;

namespace {

// precedence: flag > config file > built-in default
template <class T>
void resolve(const ConfigTable& table, const std::string& key, T& var,
             const CLI::Option* opt) {
  if (opt->count() > 0) return;
  horient::config_get(table, key, var);
}

ConfigTable load_table(const std::string& config_path,
                       const std::string& command,
                       const std::vector<std::string>& own_sections,
                       const std::vector<std::string>& known_keys) {
  if (config_path.empty()) return {};
  ConfigTable table = horient::load_config(config_path);
  std::string declared;
  if (horient::config_get(table, "command", declared) && declared != command) {
    throw ConfigError(config_path + " was resolved for '" + declared +
                      "', not '" + command + "'");
  }
  for (const auto& [key, value] : table) {
    if (key == "command") continue;
    auto dot = key.find('.');
    if (dot == std::string::npos) continue;
    const std::string section = key.substr(0, dot);
    bool own = std::find(own_sections.begin(), own_sections.end(), section) !=
               own_sections.end();
    if (!own) continue;  // sections for other subcommands are fine to carry
    if (std::find(known_keys.begin(), known_keys.end(), key) ==
        known_keys.end()) {
      throw ConfigError(config_path + ": unknown key '" + key + "'");
    }
  }
  return table;
}

void write_resolved(const std::string& path, const ordered_json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw horient::IoError("cannot open " + path + " for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw horient::IoError("failed writing " + path);
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw horient::IoError("cannot create output directory " + dir);
}

std::vector<horient::ModeWeight> parse_mix(const std::string& s) {
  std::vector<horient::ModeWeight> mix;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    std::string entry =
        s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t colon = entry.rfind(':');
    if (entry.empty() || colon == std::string::npos || colon + 1 >= entry.size()) {
      throw ConfigError("bad mix entry '" + entry +
                        "' (expected mode:weight, e.g. full:0.5)");
    }
    horient::ModeWeight mw;
    try {
      mw.mode = horient::OcclusionMode::parse(entry.substr(0, colon));
      std::size_t used = 0;
      mw.weight = std::stod(entry.substr(colon + 1), &used);
      if (used != entry.size() - colon - 1) throw std::invalid_argument(entry);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("bad mix entry '" + entry + "': " + e.what());
    }
    mix.push_back(mw);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return mix;
}

std::vector<int> parse_hidden(const std::string& s) {
  std::vector<int> dims;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    std::string entry =
        s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      std::size_t used = 0;
      dims.push_back(std::stoi(entry, &used));
      if (used != entry.size()) throw std::invalid_argument(entry);
    } catch (const std::exception&) {
      throw ConfigError("bad hidden layer list '" + s +
                        "' (expected e.g. 128,128)");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return dims;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    parts.push_back(s.substr(
        pos, comma == std::string::npos ? std::string::npos : comma - pos));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return parts;
}

// ---------------------------------------------------------------- gen-data

struct GenDataCmd {
  std::string config_path;
  std::int64_t n = 1000;
  std::string mix = "full:1";
  double noise_sigma = 0.02;
  std::uint64_t seed = 0;
  std::string out;

  CLI::Option *n_opt, *mix_opt, *noise_opt, *seed_opt, *out_opt;

  void add_to(CLI::App& app) {
    auto* cmd = app.add_subcommand("gen-data", "Generate a synthetic dataset");
    cmd->add_option("--config", config_path, "Config file (TOML or JSON)");
    n_opt = cmd->add_option("--n", n, "Number of samples");
    mix_opt = cmd->add_option("--mix", mix,
                              "Occlusion mix, e.g. full:0.5,lower:0.5");
    noise_opt = cmd->add_option("--noise-sigma", noise_sigma,
                                "Joint noise as a fraction of body height");
    seed_opt = cmd->add_option("--seed", seed, "Dataset seed");
    out_opt = cmd->add_option("--out", out, "Output dataset file (.jsonl)");
    cmd->callback([this] { run(); });
  }

  void run() {
    ConfigTable t = load_table(
        config_path, "gen-data", {"data"},
        {"data.n", "data.mix", "data.noise_sigma", "data.seed", "data.out"});
    resolve(t, "data.n", n, n_opt);
    resolve(t, "data.mix", mix, mix_opt);
    resolve(t, "data.noise_sigma", noise_sigma, noise_opt);
    resolve(t, "data.seed", seed, seed_opt);
    resolve(t, "data.out", out, out_opt);
    if (out.empty()) throw ConfigError("gen-data needs --out (or data.out)");

    horient::gen_dataset(out, n, parse_mix(mix), noise_sigma, seed);

    ordered_json doc;
    doc["command"] = "gen-data";
    doc["data"] = {{"n", n},
                   {"mix", mix},
                   {"noise_sigma", noise_sigma},
                   {"seed", seed},
                   {"out", out}};
    write_resolved(out + ".resolved_config.json", doc);
    std::printf("wrote %lld samples to %s (seed %llu)\n",
                static_cast<long long>(n), out.c_str(),
                static_cast<unsigned long long>(seed));
  }
};

// ------------------------------------------------------------------- train

struct TrainCmd {
  std::string config_path;
  std::string data;
  std::string out;
  std::string hidden = "128,128";
  horient::TrainConfig tc;

  CLI::Option *data_opt, *out_opt, *hidden_opt, *joints_opt, *hw_opt, *hh_opt,
      *hs_opt, *sb_opt, *lr_opt, *wd_opt, *ep_opt, *bs_opt, *l0_opt, *beta_opt,
      *gamma_opt, *vf_opt, *dtype_opt, *seed_opt;

  void add_to(CLI::App& app) {
    auto* cmd = app.add_subcommand("train", "Train the orientation model");
    cmd->add_option("--config", config_path, "Config file (TOML or JSON)");
    data_opt = cmd->add_option("--data", data, "Training dataset (.jsonl)");
    out_opt = cmd->add_option("--out", out, "Output directory");
    hidden_opt = cmd->add_option("--hidden", hidden, "Hidden sizes, e.g. 128,128");
    joints_opt = cmd->add_option("--joints", tc.joints, "Leading joints used");
    hw_opt = cmd->add_option("--heatmap-w", tc.heatmap_w, "Heatmap width");
    hh_opt = cmd->add_option("--heatmap-h", tc.heatmap_h, "Heatmap height");
    hs_opt = cmd->add_option("--heatmap-sigma", tc.heatmap_sigma,
                             "Heatmap Gaussian sigma, pixels");
    sb_opt = cmd->add_option("--sigma-bins", tc.sigma_bins,
                             "Target distribution sigma, bins");
    lr_opt = cmd->add_option("--lr", tc.learning_rate, "Learning rate");
    wd_opt = cmd->add_option("--weight-decay", tc.weight_decay, "Weight decay");
    ep_opt = cmd->add_option("--epochs", tc.epochs, "Training epochs");
    bs_opt = cmd->add_option("--batch-size", tc.batch_size, "Batch size");
    l0_opt = cmd->add_option("--lambda0", tc.lambda_init,
                             "Initial confidence weight");
    beta_opt = cmd->add_option("--beta", tc.lambda_beta,
                               "Confidence loss budget");
    gamma_opt = cmd->add_option("--gamma", tc.lambda_gamma,
                                "Lambda adaptation step");
    vf_opt = cmd->add_option("--val-fraction", tc.val_fraction,
                             "Held-out fraction");
    dtype_opt = cmd->add_option("--dtype", tc.dtype, "f32 or f64");
    seed_opt = cmd->add_option("--seed", tc.seed, "Training seed");
    cmd->callback([this] { run(); });
  }

  void run() {
    ConfigTable t = load_table(
        config_path, "train", {"train"},
        {"train.data", "train.out", "train.hidden", "train.joints",
         "train.heatmap_w", "train.heatmap_h", "train.heatmap_sigma",
         "train.sigma_bins", "train.lr", "train.weight_decay", "train.epochs",
         "train.batch_size", "train.lambda0", "train.beta", "train.gamma",
         "train.val_fraction", "train.dtype", "train.seed"});
    resolve(t, "train.data", data, data_opt);
    resolve(t, "train.out", out, out_opt);
    resolve(t, "train.hidden", hidden, hidden_opt);
    resolve(t, "train.joints", tc.joints, joints_opt);
    resolve(t, "train.heatmap_w", tc.heatmap_w, hw_opt);
    resolve(t, "train.heatmap_h", tc.heatmap_h, hh_opt);
    resolve(t, "train.heatmap_sigma", tc.heatmap_sigma, hs_opt);
    resolve(t, "train.sigma_bins", tc.sigma_bins, sb_opt);
    resolve(t, "train.lr", tc.learning_rate, lr_opt);
    resolve(t, "train.weight_decay", tc.weight_decay, wd_opt);
    resolve(t, "train.epochs", tc.epochs, ep_opt);
    resolve(t, "train.batch_size", tc.batch_size, bs_opt);
    resolve(t, "train.lambda0", tc.lambda_init, l0_opt);
    resolve(t, "train.beta", tc.lambda_beta, beta_opt);
    resolve(t, "train.gamma", tc.lambda_gamma, gamma_opt);
    resolve(t, "train.val_fraction", tc.val_fraction, vf_opt);
    resolve(t, "train.dtype", tc.dtype, dtype_opt);
    resolve(t, "train.seed", tc.seed, seed_opt);
    tc.hidden = parse_hidden(hidden);
    if (data.empty()) throw ConfigError("train needs --data (or train.data)");
    if (out.empty()) throw ConfigError("train needs --out (or train.out)");
    tc.validate();

    horient::Dataset ds = horient::load_dataset(data);
    horient::TrainOutput result = horient::train(ds, tc);

    ensure_out_dir(out);
    horient::save_checkpoint((fs::path(out) / "checkpoint.json").string(),
                             result.params);
    horient::write_metrics_csv((fs::path(out) / "metrics.csv").string(),
                               result.history);

    ordered_json doc;
    doc["command"] = "train";
    doc["train"] = {{"data", data},
                    {"out", out},
                    {"hidden", hidden},
                    {"joints", tc.joints},
                    {"heatmap_w", tc.heatmap_w},
                    {"heatmap_h", tc.heatmap_h},
                    {"heatmap_sigma", tc.heatmap_sigma},
                    {"sigma_bins", tc.sigma_bins},
                    {"lr", tc.learning_rate},
                    {"weight_decay", tc.weight_decay},
                    {"epochs", tc.epochs},
                    {"batch_size", tc.batch_size},
                    {"lambda0", tc.lambda_init},
                    {"beta", tc.lambda_beta},
                    {"gamma", tc.lambda_gamma},
                    {"val_fraction", tc.val_fraction},
                    {"dtype", tc.dtype},
                    {"seed", tc.seed}};
    write_resolved((fs::path(out) / "resolved_config.json").string(), doc);

    const horient::EpochStats& last = result.history.back();
    if (std::isnan(last.val_acc30)) {
      std::printf("trained %d epochs (no validation split)\n", last.epoch);
    } else {
      std::printf("trained %d epochs: val_acc30=%.3f val_mae=%.2f\n",
                  last.epoch, last.val_acc30, last.val_mae);
    }
  }
};

// -------------------------------------------------------------------- eval

struct EvalCmd {
  std::string config_path;
  std::string checkpoint;
  std::string data;
  std::string estimator = "model";
  std::uint64_t seed = 0;
  std::string out;

  CLI::Option *ckpt_opt, *data_opt, *est_opt, *seed_opt, *out_opt;

  void add_to(CLI::App& app) {
    auto* cmd = app.add_subcommand("eval", "Orientation accuracy report");
    cmd->add_option("--config", config_path, "Config file (TOML or JSON)");
    ckpt_opt = cmd->add_option("--checkpoint", checkpoint, "Model checkpoint");
    data_opt = cmd->add_option("--data", data, "Test dataset (.jsonl)");
    est_opt = cmd->add_option("--estimator", estimator,
                              "model | gt-echo | uniform-random");
    seed_opt = cmd->add_option("--seed", seed, "Seed for uniform-random");
    out_opt = cmd->add_option("--out", out, "Output directory");
    cmd->callback([this] { run(); });
  }

  void run() {
    ConfigTable t = load_table(config_path, "eval", {"eval"},
                               {"eval.checkpoint", "eval.data", "eval.estimator",
                                "eval.seed", "eval.out"});
    resolve(t, "eval.checkpoint", checkpoint, ckpt_opt);
    resolve(t, "eval.data", data, data_opt);
    resolve(t, "eval.estimator", estimator, est_opt);
    resolve(t, "eval.seed", seed, seed_opt);
    resolve(t, "eval.out", out, out_opt);
    if (data.empty()) throw ConfigError("eval needs --data (or eval.data)");
    if (out.empty()) throw ConfigError("eval needs --out (or eval.out)");

    horient::EstimatorKind kind = horient::parse_estimator(estimator);
    horient::Dataset ds = horient::load_dataset(data);

    horient::ModelParams<double> params{};
    const horient::ModelParams<double>* model = nullptr;
    if (kind == horient::EstimatorKind::kModel) {
      if (checkpoint.empty()) {
        throw ConfigError("the model estimator needs --checkpoint");
      }
      params = horient::as_f64(horient::load_checkpoint(checkpoint));
      model = &params;
    }

    auto rows = horient::mode_reports(model, kind, ds, seed);
    ensure_out_dir(out);
    horient::write_eval_csv((fs::path(out) / "eval.csv").string(), rows);
    const std::string table = horient::format_eval_table(rows);
    {
      std::ofstream txt((fs::path(out) / "eval.txt").string(), std::ios::binary);
      if (!txt) throw horient::IoError("cannot write eval.txt");
      txt << table;
    }

    ordered_json doc;
    doc["command"] = "eval";
    doc["eval"] = {{"checkpoint", checkpoint},
                   {"data", data},
                   {"estimator", estimator},
                   {"seed", seed},
                   {"out", out}};
    write_resolved((fs::path(out) / "resolved_config.json").string(), doc);
    std::fputs(table.c_str(), stdout);
  }
};

// --------------------------------------------------------- eval-confidence

struct EvalConfidenceCmd {
  std::string config_path;
  std::string checkpoint;
  std::string data;
  std::string out;

  CLI::Option *ckpt_opt, *data_opt, *out_opt;

  void add_to(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "eval-confidence", "Precision/recall of confidence gating");
    cmd->add_option("--config", config_path, "Config file (TOML or JSON)");
    ckpt_opt = cmd->add_option("--checkpoint", checkpoint, "Model checkpoint");
    data_opt = cmd->add_option("--data", data, "Test dataset (.jsonl)");
    out_opt = cmd->add_option("--out", out, "Output directory");
    cmd->callback([this] { run(); });
  }

  void run() {
    ConfigTable t = load_table(
        config_path, "eval-confidence", {"evalconf"},
        {"evalconf.checkpoint", "evalconf.data", "evalconf.out"});
    resolve(t, "evalconf.checkpoint", checkpoint, ckpt_opt);
    resolve(t, "evalconf.data", data, data_opt);
    resolve(t, "evalconf.out", out, out_opt);
    if (checkpoint.empty()) {
      throw ConfigError("eval-confidence needs --checkpoint");
    }
    if (data.empty()) throw ConfigError("eval-confidence needs --data");
    if (out.empty()) throw ConfigError("eval-confidence needs --out");

    horient::ModelParams<double> params =
        horient::as_f64(horient::load_checkpoint(checkpoint));
    horient::Dataset ds = horient::load_dataset(data);
    auto rows = horient::confidence_rows(params, ds);

    ensure_out_dir(out);
    ordered_json doc;
    doc["command"] = "eval-confidence";
    doc["evalconf"] = {{"checkpoint", checkpoint}, {"data", data}, {"out", out}};
    write_resolved((fs::path(out) / "resolved_config.json").string(), doc);

    for (bool use_confidence : {true, false}) {
      const std::string kind = use_confidence ? "confidence" : "max_prob";
      auto scored = horient::scores_from(rows, use_confidence);
      auto curve = horient::pr_curve(scored);
      double mr = horient::max_recall_at_full_precision(curve);
      horient::write_pr_csv((fs::path(out) / ("pr_" + kind + ".csv")).string(),
                            curve);
      horient::write_pr_summary(
          (fs::path(out) / ("summary_" + kind + ".json")).string(), mr,
          static_cast<std::int64_t>(rows.size()), kind);
      std::printf("%s: max_recall@p100=%.6f (n=%zu)\n", kind.c_str(), mr,
                  rows.size());
    }
  }
};

// ---------------------------------------------------------------- simulate

struct SimulateCmd {
  std::string config_path;
  std::string scenario_path;
  std::string checkpoint;
  std::string estimators = "cv_baseline,ground_truth";
  std::string task = "backward";
  std::uint64_t seed = 0;
  std::string out;
  horient::SimConfig sim;

  CLI::Option *scen_opt, *ckpt_opt, *est_opt, *task_opt, *seed_opt, *out_opt;

  void add_to(CLI::App& app) {
    auto* cmd = app.add_subcommand("simulate", "Robot-following simulation");
    cmd->add_option("--config", config_path, "Config file (TOML or JSON)");
    scen_opt = cmd->add_option("--scenario", scenario_path, "Scenario JSON");
    ckpt_opt = cmd->add_option("--checkpoint", checkpoint,
                               "Checkpoint for the model estimator");
    est_opt = cmd->add_option(
        "--estimator", estimators,
        "Comma list of cv_baseline | model | ground_truth");
    task_opt = cmd->add_option("--task", task,
                               "Comma list of backward | forward");
    seed_opt = cmd->add_option("--seed", seed, "Overrides the scenario seed");
    out_opt = cmd->add_option("--out", out, "Output directory");
    cmd->callback([this] { run(); });
  }

  void run() {
    ConfigTable t = load_table(
        config_path, "simulate", {"sim", "controller"},
        {"sim.scenario", "sim.checkpoint", "sim.estimators", "sim.task",
         "sim.seed", "sim.out", "sim.position_hz", "sim.orientation_hz",
         "sim.control_hz", "sim.follow_distance_m", "sim.gate_window",
         "sim.cv_eps_m", "sim.goal_lead_s", "sim.vel_ema_alpha",
         "controller.v_max", "controller.omega_max", "controller.v_samples",
         "controller.omega_samples", "controller.horizon", "controller.dt",
         "controller.w_pos", "controller.w_heading"});
    resolve(t, "sim.scenario", scenario_path, scen_opt);
    resolve(t, "sim.checkpoint", checkpoint, ckpt_opt);
    resolve(t, "sim.estimators", estimators, est_opt);
    resolve(t, "sim.task", task, task_opt);
    resolve(t, "sim.out", out, out_opt);
    horient::config_get(t, "sim.position_hz", sim.position_hz);
    horient::config_get(t, "sim.orientation_hz", sim.orientation_hz);
    horient::config_get(t, "sim.control_hz", sim.control_hz);
    horient::config_get(t, "sim.follow_distance_m", sim.follow_distance_m);
    horient::config_get(t, "sim.gate_window", sim.gate_window);
    horient::config_get(t, "sim.cv_eps_m", sim.cv_eps_m);
    horient::config_get(t, "sim.goal_lead_s", sim.goal_lead_s);
    horient::config_get(t, "sim.vel_ema_alpha", sim.vel_ema_alpha);
    horient::config_get(t, "controller.v_max", sim.controller.v_max);
    horient::config_get(t, "controller.omega_max", sim.controller.omega_max);
    horient::config_get(t, "controller.v_samples", sim.controller.v_samples);
    horient::config_get(t, "controller.omega_samples",
                        sim.controller.omega_samples);
    horient::config_get(t, "controller.horizon", sim.controller.horizon);
    horient::config_get(t, "controller.dt", sim.controller.dt);
    horient::config_get(t, "controller.w_pos", sim.controller.w_pos);
    horient::config_get(t, "controller.w_heading", sim.controller.w_heading);
    if (scenario_path.empty()) throw ConfigError("simulate needs --scenario");
    if (out.empty()) throw ConfigError("simulate needs --out");

    horient::Scenario scenario = horient::load_scenario(scenario_path);
    bool seed_overridden = seed_opt->count() > 0;
    std::uint64_t cfg_seed = 0;
    if (!seed_overridden && horient::config_get(t, "sim.seed", cfg_seed)) {
      seed = cfg_seed;
      seed_overridden = true;
    }
    if (seed_overridden) scenario.seed = seed;

    std::vector<horient::SimEstimator> kinds;
    for (const std::string& name : split_list(estimators)) {
      kinds.push_back(horient::parse_sim_estimator(name));
    }
    std::vector<horient::FollowTask> tasks;
    for (const std::string& name : split_list(task)) {
      tasks.push_back(horient::parse_task(name));
    }
    if (kinds.empty()) throw ConfigError("no estimators requested");
    if (tasks.empty()) throw ConfigError("no tasks requested");

    horient::ModelParams<double> params{};
    const horient::ModelParams<double>* model = nullptr;
    bool wants_model =
        std::find(kinds.begin(), kinds.end(),
                  horient::SimEstimator::kModel) != kinds.end();
    if (wants_model) {
      if (checkpoint.empty()) {
        throw ConfigError("the model estimator needs --checkpoint");
      }
      params = horient::as_f64(horient::load_checkpoint(checkpoint));
      model = &params;
    }

    ensure_out_dir(out);
    ordered_json doc;
    doc["command"] = "simulate";
    doc["sim"] = {{"scenario", scenario_path},
                  {"checkpoint", checkpoint},
                  {"estimators", estimators},
                  {"task", task},
                  {"seed", scenario.seed},
                  {"out", out},
                  {"position_hz", sim.position_hz},
                  {"orientation_hz", sim.orientation_hz},
                  {"control_hz", sim.control_hz},
                  {"follow_distance_m", sim.follow_distance_m},
                  {"gate_window", sim.gate_window},
                  {"cv_eps_m", sim.cv_eps_m},
                  {"goal_lead_s", sim.goal_lead_s},
                  {"vel_ema_alpha", sim.vel_ema_alpha}};
    doc["controller"] = {{"v_max", sim.controller.v_max},
                         {"omega_max", sim.controller.omega_max},
                         {"v_samples", sim.controller.v_samples},
                         {"omega_samples", sim.controller.omega_samples},
                         {"horizon", sim.controller.horizon},
                         {"dt", sim.controller.dt},
                         {"w_pos", sim.controller.w_pos},
                         {"w_heading", sim.controller.w_heading}};
    write_resolved((fs::path(out) / "resolved_config.json").string(), doc);

    ordered_json summary;
    summary["scenario"] = scenario.name;
    summary["seed"] = scenario.seed;
    summary["runs"] = ordered_json::array();
    for (horient::FollowTask ft : tasks) {
      for (horient::SimEstimator kind : kinds) {
        horient::SimConfig run_cfg = sim;
        run_cfg.task = ft;
        horient::SimResult res =
            horient::run_scenario(scenario, kind, model, run_cfg);
        const std::string label =
            horient::sim_estimator_name(kind) + "_" + horient::task_name(ft);
        horient::write_trajectory_csv(
            (fs::path(out) / ("trajectory_" + label + ".csv")).string(), res);
        summary["runs"].push_back({{"estimator", horient::sim_estimator_name(kind)},
                                   {"task", horient::task_name(ft)},
                                   {"ate_m", res.ate_m}});
        std::printf("%s %s ate_m=%.6f\n",
                    horient::sim_estimator_name(kind).c_str(),
                    horient::task_name(ft).c_str(), res.ate_m);
      }
    }
    {
      const std::string path = (fs::path(out) / "summary.json").string();
      std::ofstream sout(path, std::ios::binary);
      if (!sout) throw horient::IoError("cannot open " + path + " for writing");
      sout << summary.dump(2) << '\n';
    }
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Human-orientation estimation and robot-following toolkit"};
  app.require_subcommand(1);

  GenDataCmd gen_data;
  TrainCmd train;
  EvalCmd eval;
  EvalConfidenceCmd eval_confidence;
  SimulateCmd simulate;
  gen_data.add_to(app);
  train.add_to(app);
  eval.add_to(app);
  eval_confidence.add_to(app);
  simulate.add_to(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    // validation failures: bad angles, inputs, or model shapes
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const horient::ModelConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
