// Command-line driver: alpha-sweep experiments and GRU training.
//
//   tacf run   [--config FILE] [--cycle C]... [--predictor ca|gru]
//              [--alpha A]... [--out DIR] [--seed S] [--model FILE]
//              [--param key=value]...
//   tacf train [same flags; trains on the named cycle(s) and writes the
//              model file]
//
// Exit codes: 0 success, 1 run failure, 2 configuration error.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tacf/experiment.hpp"

namespace {

struct Flags {
  std::string config_path;
  std::vector<std::string> cycles;
  std::string predictor;
  std::vector<std::string> alphas;
  std::string out_dir;
  std::string model;
  std::string seed;
  std::vector<std::string> params;  // key=value
};

void add_common_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config_path,
                  "key = value config file; flags override its entries");
  cmd->add_option("--cycle", f.cycles,
                  "cycle CSV path or bundled preset (us06, nycc); repeatable");
  cmd->add_option("--predictor", f.predictor, "plan estimator: ca or gru");
  cmd->add_option("--alpha", f.alphas,
                  "explicability weight; repeatable or comma-separated");
  cmd->add_option("--out", f.out_dir, "output directory");
  cmd->add_option("--seed", f.seed, "seed for reproducible runs/training");
  cmd->add_option("--model", f.model, "GRU model file to load (run) or write "
                                      "(train)");
  cmd->add_option("--param", f.params,
                  "simulation parameter override, e.g. --param N=3; "
                  "repeatable");
}

tacf::ExperimentConfig build_config(const Flags& f) {
  tacf::ExperimentConfig cfg;
  if (!f.config_path.empty()) cfg = tacf::parse_config_file(f.config_path);
  if (!f.cycles.empty()) {
    std::string joined;
    for (std::size_t i = 0; i < f.cycles.size(); ++i)
      joined += (i ? "," : "") + f.cycles[i];
    tacf::apply_config_entry(cfg, "cycles", joined);
  }
  if (!f.predictor.empty())
    tacf::apply_config_entry(cfg, "predictor", f.predictor);
  if (!f.alphas.empty()) {
    std::string joined;
    for (std::size_t i = 0; i < f.alphas.size(); ++i)
      joined += (i ? "," : "") + f.alphas[i];
    tacf::apply_config_entry(cfg, "alphas", joined);
  }
  if (!f.out_dir.empty()) tacf::apply_config_entry(cfg, "out", f.out_dir);
  if (!f.seed.empty()) tacf::apply_config_entry(cfg, "seed", f.seed);
  if (!f.model.empty()) tacf::apply_config_entry(cfg, "model", f.model);
  for (const std::string& kv : f.params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw tacf::ConfigError("--param expects key=value, got '" + kv + "'");
    std::string key = kv.substr(0, eq);
    // accept both bare names (N=3) and qualified ones (param.N=3)
    if (key.rfind("param.", 0) != 0 && key.rfind("gru.", 0) != 0 &&
        key.rfind("human.", 0) != 0)
      key = "param." + key;
    tacf::apply_config_entry(cfg, key, kv.substr(eq + 1));
  }
  return cfg;
}

void print_metrics_table(const tacf::SweepResult& res) {
  std::printf("cycle %s\n", res.cycle.c_str());
  std::printf("  %-8s %-14s %-20s %-12s\n", "alpha", "final_trust",
              "avg_explicability", "rmse");
  for (std::size_t i = 0; i < res.metrics.size(); ++i) {
    const tacf::RunMetrics& m = res.metrics[i];
    std::printf("  %-8.4g %-14.6g %-20.6g %-12.6g\n", res.alphas[i],
                m.final_trust, m.avg_explicability, m.rmse_pred);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trust-aware car-following simulation and control"};
  app.require_subcommand(1);

  Flags run_flags, train_flags;
  CLI::App* cmd_run =
      app.add_subcommand("run", "execute a (cycle x alpha) experiment sweep");
  add_common_flags(cmd_run, run_flags);
  CLI::App* cmd_train = app.add_subcommand(
      "train", "train the GRU plan estimator on simulated trajectories");
  add_common_flags(cmd_train, train_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_run->parsed()) {
      const tacf::ExperimentConfig cfg = build_config(run_flags);
      tacf::validate_run_config(cfg);
      try {
        const auto results = tacf::run_experiment(cfg);
        for (const auto& res : results) {
          print_metrics_table(res);
          for (const std::string& a : res.artifacts)
            std::printf("  wrote %s\n", a.c_str());
        }
      } catch (const std::exception& ex) {
        std::fprintf(stderr, "run failed: %s\n", ex.what());
        return 1;
      }
      return 0;
    }

    const tacf::ExperimentConfig cfg = build_config(train_flags);
    try {
      const tacf::TrainResult tr = tacf::train_experiment(cfg);
      std::printf("trained on %zu pairs (%zu validation), %zu epochs\n",
                  tr.n_train + tr.n_val, tr.n_val, tr.trace.train.size());
      if (!tr.trace.val.empty())
        std::printf("final val mse %.6g\n", tr.trace.val.back());
      std::printf("wrote %s\n", tr.model_path.c_str());
      std::printf("wrote %s\n", tr.loss_csv_path.c_str());
    } catch (const tacf::ConfigError&) {
      throw;
    } catch (const std::exception& ex) {
      std::fprintf(stderr, "training failed: %s\n", ex.what());
      return 1;
    }
    return 0;
  } catch (const tacf::ConfigError& ex) {
    std::fprintf(stderr, "%s\n", ex.what());
    return 2;
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 2;
  }
}
