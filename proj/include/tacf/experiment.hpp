#pragma once

// Batch experiment driver behind the command-line tool: parse and validate
// experiment configurations, execute (cycle x alpha) sweeps in a worker
// pool, and persist run logs, metrics tables (CSV + JSON), loss curves and
// trust-trace SVG plots. All artifacts are written atomically.

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tacf/io.hpp"
#include "tacf/sim.hpp"

namespace tacf {

/// Invalid or inconsistent experiment configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::vector<std::string> cycles{"us06"};
  PredictorKind predictor = PredictorKind::ConstantAccel;
  std::vector<double> alphas{0.0, 0.25, 0.5, 0.75, 1.0};
  std::string out_dir = "out";
  std::uint64_t seed = 42;
  std::string model_path;  // gru model to load (run) or to write (train)
  SimParams params = SimParams::defaults();
  std::array<double, 4> human_weights{0.25, 0.25, 0.25, 0.25};
  double human_tau = 1.2;
  double human_v_des = -1.0;  // <0: cycle top speed
  int gru_hidden = 32;
  TrainConfig train;
};

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, sep)) out.push_back(trim(tok));
  return out;
}

inline double config_num(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(x)) throw std::exception();
    return x;
  } catch (...) {
    throw ConfigError("config: bad numeric value '" + v + "' for key '" +
                      key + "'");
  }
}

inline void apply_sim_param(SimParams& p, const std::string& name,
                            double value, const std::string& key) {
  if (name == "dt") p.dt = value;
  else if (name == "N") p.n_horizon = static_cast<int>(value);
  else if (name == "H") p.h_history = static_cast<int>(value);
  else if (name == "d_s") p.d_s = value;
  else if (name == "tau_r") p.tau_r = value;
  else if (name == "eps") p.eps = value;
  else if (name == "u_min") p.u_min = value;
  else if (name == "u_max") p.u_max = value;
  else if (name == "d_min") p.d_min = value;
  else if (name == "d_max") p.d_max = value;
  else if (name == "v_min") p.v_min = value;
  else if (name == "v_max") p.v_max = value;
  else if (name == "t_min") p.t_min = value;
  else if (name == "delta") p.delta = value;
  else if (name == "p_thre") p.p_thre = value;
  else if (name == "explicability_gain") p.explicability_gain = value;
  else throw ConfigError("config: unknown simulation parameter '" + key +
                         "'");
}

}  // namespace detail

/// Apply one `key = value` setting. Shared by the config-file parser and
/// the CLI's --param overrides.
inline void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                               const std::string& value) {
  using detail::config_num;
  if (key == "cycle" || key == "cycles") {
    cfg.cycles = detail::split(value, ',');
    if (cfg.cycles.empty() || value.empty())
      throw ConfigError("config: empty cycle list");
  } else if (key == "predictor") {
    if (value == "ca") cfg.predictor = PredictorKind::ConstantAccel;
    else if (value == "gru") cfg.predictor = PredictorKind::Gru;
    else throw ConfigError("config: predictor must be 'ca' or 'gru', got '" +
                           value + "'");
  } else if (key == "alphas" || key == "alpha") {
    cfg.alphas.clear();
    for (const std::string& tok : detail::split(value, ','))
      cfg.alphas.push_back(config_num(tok, key));
  } else if (key == "out") {
    cfg.out_dir = value;
  } else if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(config_num(value, key));
  } else if (key == "model") {
    cfg.model_path = value;
  } else if (key == "human.weights") {
    const auto toks = detail::split(value, ',');
    if (toks.size() != 4)
      throw ConfigError("config: human.weights needs 4 comma-separated "
                        "values");
    for (std::size_t i = 0; i < 4; ++i)
      cfg.human_weights[i] = config_num(toks[i], key);
  } else if (key == "human.tau") {
    cfg.human_tau = config_num(value, key);
  } else if (key == "human.v_des") {
    cfg.human_v_des = config_num(value, key);
  } else if (key == "gru.hidden") {
    cfg.gru_hidden = static_cast<int>(config_num(value, key));
  } else if (key == "gru.epochs") {
    cfg.train.epochs = static_cast<int>(config_num(value, key));
  } else if (key == "gru.lr") {
    cfg.train.learning_rate = config_num(value, key);
  } else if (key == "gru.batch") {
    cfg.train.batch_size = static_cast<int>(config_num(value, key));
  } else if (key == "gru.patience") {
    cfg.train.patience = static_cast<int>(config_num(value, key));
  } else if (key.rfind("param.", 0) == 0) {
    detail::apply_sim_param(cfg.params, key.substr(6), config_num(value, key),
                            key);
  } else {
    throw ConfigError("config: unknown key '" + key + "'");
  }
}

/// Parse a key-value config file. Lines are `key = value`; blank lines and
/// `#` comments are ignored.
inline ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: expected 'key = value' at line " +
                        std::to_string(lineno));
    try {
      apply_config_entry(cfg, detail::trim(t.substr(0, eq)),
                         detail::trim(t.substr(eq + 1)));
    } catch (const ConfigError& ex) {
      throw ConfigError(std::string(ex.what()) + " (line " +
                        std::to_string(lineno) + ")");
    }
  }
  return cfg;
}

inline ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

/// Render the configuration with every value explicit, in a form
/// parse_config accepts, so that parse . serialize is the identity.
inline std::string serialize_config(const ExperimentConfig& cfg) {
  std::string out;
  auto kv = [&](const std::string& k, const std::string& v) {
    out += k + " = " + v + "\n";
  };
  std::string cyc;
  for (std::size_t i = 0; i < cfg.cycles.size(); ++i)
    cyc += (i ? "," : "") + cfg.cycles[i];
  kv("cycles", cyc);
  kv("predictor", predictor_name(cfg.predictor));
  std::string al;
  for (std::size_t i = 0; i < cfg.alphas.size(); ++i)
    al += (i ? "," : "") + fmt_double(cfg.alphas[i]);
  kv("alphas", al);
  kv("out", cfg.out_dir);
  kv("seed", std::to_string(cfg.seed));
  kv("model", cfg.model_path);
  std::string hw;
  for (std::size_t i = 0; i < 4; ++i)
    hw += (i ? "," : "") + fmt_double(cfg.human_weights[i]);
  kv("human.weights", hw);
  kv("human.tau", fmt_double(cfg.human_tau));
  kv("human.v_des", fmt_double(cfg.human_v_des));
  kv("gru.hidden", std::to_string(cfg.gru_hidden));
  kv("gru.epochs", std::to_string(cfg.train.epochs));
  kv("gru.lr", fmt_double(cfg.train.learning_rate));
  kv("gru.batch", std::to_string(cfg.train.batch_size));
  kv("gru.patience", std::to_string(cfg.train.patience));
  const SimParams& p = cfg.params;
  kv("param.dt", fmt_double(p.dt));
  kv("param.N", std::to_string(p.n_horizon));
  kv("param.H", std::to_string(p.h_history));
  kv("param.d_s", fmt_double(p.d_s));
  kv("param.tau_r", fmt_double(p.tau_r));
  kv("param.eps", fmt_double(p.eps));
  kv("param.u_min", fmt_double(p.u_min));
  kv("param.u_max", fmt_double(p.u_max));
  kv("param.d_min", fmt_double(p.d_min));
  kv("param.d_max", fmt_double(p.d_max));
  kv("param.v_min", fmt_double(p.v_min));
  kv("param.v_max", fmt_double(p.v_max));
  kv("param.t_min", fmt_double(p.t_min));
  kv("param.delta", fmt_double(p.delta));
  kv("param.p_thre", fmt_double(p.p_thre));
  kv("param.explicability_gain", fmt_double(p.explicability_gain));
  return out;
}

/// Checks that must pass before any run starts: non-empty positive alpha
/// list, resolvable cycle sources, and a loadable model when the GRU
/// predictor is requested.
inline void validate_run_config(const ExperimentConfig& cfg) {
  if (cfg.alphas.empty()) throw ConfigError("config: empty alpha list");
  for (double a : cfg.alphas)
    if (!(a >= 0.0)) throw ConfigError("config: alpha values must be >= 0");
  if (cfg.cycles.empty()) throw ConfigError("config: empty cycle list");
  namespace fs = std::filesystem;
  for (const std::string& c : cfg.cycles) {
    if (!fs::exists(c) &&
        !fs::exists(fs::path(data_dir()) / (c + ".csv")))
      throw ConfigError("config: cycle '" + c +
                        "' is neither a file nor a bundled preset");
  }
  if (cfg.predictor == PredictorKind::Gru) {
    if (cfg.model_path.empty())
      throw ConfigError("config: predictor gru requires a model path");
    if (!fs::exists(cfg.model_path))
      throw ConfigError("config: model file '" + cfg.model_path +
                        "' does not exist");
  }
  try {
    SimParams p = cfg.params;
    if (p.v_max_from_cycle()) p.v_max = 1.0;  // resolved per cycle later
    p.alpha = cfg.alphas.front();
    p.validate();
  } catch (const std::exception& ex) {
    throw ConfigError(std::string("config: ") + ex.what());
  }
}

// ---------------------------------------------------------------------------
// Artifacts
// ---------------------------------------------------------------------------

namespace detail {

inline std::string alpha_tag(double a) { return fmt_double(a, 9); }

inline std::string metrics_csv(const std::vector<double>& alphas,
                               const std::vector<RunMetrics>& rows) {
  std::string out = "alpha,final_trust,avg_explicability,rmse\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out += fmt_double(alphas[i], 9);
    out += "," + fmt_double(rows[i].final_trust, 9);
    out += "," + fmt_double(rows[i].avg_explicability, 9);
    out += "," + fmt_double(rows[i].rmse_pred, 9) + "\n";
  }
  // Maximum improvement over the trust-unaware (alpha = 0) baseline,
  // mirroring the summary row of the comparison tables.
  std::size_t base = rows.size();
  for (std::size_t i = 0; i < alphas.size(); ++i)
    if (alphas[i] == 0.0) {
      base = i;
      break;
    }
  if (base != rows.size() && rows.size() > 1) {
    ImprovementPct best;
    bool any = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == base) continue;
      const ImprovementPct imp = improvement(rows[base], rows[i]);
      if (!any) {
        best = imp;
        any = true;
      } else {
        best.trust = std::max(best.trust, imp.trust);
        best.explicability = std::max(best.explicability, imp.explicability);
        best.rmse = std::max(best.rmse, imp.rmse);
      }
    }
    if (any) {
      out += "max_improvement_pct," + fmt_double(best.trust, 9) + "," +
             fmt_double(best.explicability, 9) + "," +
             fmt_double(best.rmse, 9) + "\n";
    }
  }
  return out;
}

inline nlohmann::json metrics_json(const std::string& cycle,
                                   PredictorKind kind, std::uint64_t seed,
                                   const std::vector<double>& alphas,
                                   const std::vector<RunMetrics>& rows) {
  nlohmann::json j;
  j["cycle"] = cycle;
  j["predictor"] = predictor_name(kind);
  j["seed"] = seed;
  j["rows"] = nlohmann::json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    nlohmann::json r;
    r["alpha"] = alphas[i];
    r["final_trust"] = rows[i].final_trust;
    r["avg_explicability"] = rows[i].avg_explicability;
    r["rmse"] = rows[i].rmse_pred;
    r["violations_av_gap"] = rows[i].violations.av_gap;
    r["violations_human_gap"] = rows[i].violations.human_gap;
    j["rows"].push_back(r);
  }
  std::size_t base = rows.size();
  for (std::size_t i = 0; i < alphas.size(); ++i)
    if (alphas[i] == 0.0) {
      base = i;
      break;
    }
  if (base != rows.size() && rows.size() > 1) {
    double bt = -1e300, be = -1e300, br = -1e300;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == base) continue;
      const ImprovementPct imp = improvement(rows[base], rows[i]);
      bt = std::max(bt, imp.trust);
      be = std::max(be, imp.explicability);
      br = std::max(br, imp.rmse);
    }
    j["max_improvement_pct"] = {{"final_trust", bt},
                                {"avg_explicability", be},
                                {"rmse", br}};
  }
  return j;
}

/// Minimal dependency-free SVG line chart of the trust traces, one polyline
/// per alpha, with axis ticks and a legend.
inline std::string trust_traces_svg(const std::vector<double>& alphas,
                                    const std::vector<RunLog>& logs,
                                    const std::string& title) {
  const double width = 860.0, height = 460.0;
  const double ml = 70.0, mr = 170.0, mt = 40.0, mb = 50.0;
  const double pw = width - ml - mr, ph = height - mt - mb;

  std::size_t max_len = 1;
  double t_lo = 0.0, t_hi = 1e-9;
  for (const RunLog& log : logs) {
    max_len = std::max(max_len, log.steps.size());
    for (const StepRecord& r : log.steps) {
      t_lo = std::min(t_lo, r.trust);
      t_hi = std::max(t_hi, r.trust);
    }
  }
  if (t_hi <= t_lo) t_hi = t_lo + 1.0;

  auto sx = [&](double t) {
    return ml + pw * t / static_cast<double>(max_len - 1 ? max_len - 1 : 1);
  };
  auto sy = [&](double v) { return mt + ph * (1.0 - (v - t_lo) / (t_hi - t_lo)); };

  static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c",
                                  "#d62728", "#9467bd", "#8c564b",
                                  "#e377c2", "#7f7f7f"};
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
       fmt_double(width, 6) + "\" height=\"" + fmt_double(height, 6) +
       "\" viewBox=\"0 0 " + fmt_double(width, 6) + " " +
       fmt_double(height, 6) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + fmt_double(ml, 6) + "\" y=\"24\" font-family=\"sans-serif\" "
       "font-size=\"15\" fill=\"#222\">" + title + "</text>\n";

  // axes
  s += "<line x1=\"" + fmt_double(ml, 6) + "\" y1=\"" + fmt_double(mt, 6) +
       "\" x2=\"" + fmt_double(ml, 6) + "\" y2=\"" + fmt_double(mt + ph, 6) +
       "\" stroke=\"#333\"/>\n";
  s += "<line x1=\"" + fmt_double(ml, 6) + "\" y1=\"" + fmt_double(mt + ph, 6) +
       "\" x2=\"" + fmt_double(ml + pw, 6) + "\" y2=\"" +
       fmt_double(mt + ph, 6) + "\" stroke=\"#333\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double fx = static_cast<double>(i) / 5.0;
    const double xv = fx * static_cast<double>(max_len - 1);
    const double yv = t_lo + fx * (t_hi - t_lo);
    const double px = ml + fx * pw;
    const double py = mt + ph * (1.0 - fx);
    s += "<line x1=\"" + fmt_double(px, 6) + "\" y1=\"" + fmt_double(mt + ph, 6) +
         "\" x2=\"" + fmt_double(px, 6) + "\" y2=\"" +
         fmt_double(mt + ph + 5, 6) + "\" stroke=\"#333\"/>\n";
    s += "<text x=\"" + fmt_double(px, 6) + "\" y=\"" +
         fmt_double(mt + ph + 20, 6) +
         "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\" "
         "text-anchor=\"middle\">" + fmt_double(xv, 4) + "</text>\n";
    s += "<line x1=\"" + fmt_double(ml - 5, 6) + "\" y1=\"" + fmt_double(py, 6) +
         "\" x2=\"" + fmt_double(ml, 6) + "\" y2=\"" + fmt_double(py, 6) +
         "\" stroke=\"#333\"/>\n";
    s += "<text x=\"" + fmt_double(ml - 9, 6) + "\" y=\"" +
         fmt_double(py + 4, 6) +
         "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\" "
         "text-anchor=\"end\">" + fmt_double(yv, 4) + "</text>\n";
  }
  s += "<text x=\"" + fmt_double(ml + pw / 2, 6) + "\" y=\"" +
       fmt_double(height - 12, 6) +
       "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#222\" "
       "text-anchor=\"middle\">time (s)</text>\n";
  s += "<text x=\"16\" y=\"" + fmt_double(mt + ph / 2, 6) +
       "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#222\" "
       "transform=\"rotate(-90 16 " + fmt_double(mt + ph / 2, 6) +
       ")\" text-anchor=\"middle\">trust level</text>\n";

  for (std::size_t li = 0; li < logs.size(); ++li) {
    const char* color = palette[li % 8];
    std::string pts;
    for (const StepRecord& r : logs[li].steps) {
      pts += fmt_double(sx(static_cast<double>(r.t)), 7) + "," +
             fmt_double(sy(r.trust), 7) + " ";
    }
    s += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
         "\" stroke-width=\"1.6\" points=\"" + pts + "\"/>\n";
    const double ly = mt + 16.0 + 18.0 * static_cast<double>(li);
    s += "<line x1=\"" + fmt_double(ml + pw + 14, 6) + "\" y1=\"" +
         fmt_double(ly - 4, 6) + "\" x2=\"" + fmt_double(ml + pw + 40, 6) +
         "\" y2=\"" + fmt_double(ly - 4, 6) + "\" stroke=\"" + color +
         "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"" + fmt_double(ml + pw + 46, 6) + "\" y=\"" +
         fmt_double(ly, 6) +
         "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#222\">"
         "alpha = " + alpha_tag(alphas[li]) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

}  // namespace detail

struct SweepResult {
  std::string cycle;
  std::vector<double> alphas;
  std::vector<RunMetrics> metrics;
  std::vector<std::string> artifacts;  // paths written
};

/// Execute the (cycle x alpha) sweep described by the config and write all
/// artifacts. Runs execute concurrently; artifact writing is serialized and
/// atomic. Returns one SweepResult per cycle.
inline std::vector<SweepResult> run_experiment(const ExperimentConfig& cfg) {
  validate_run_config(cfg);
  namespace fs = std::filesystem;

  GruModel model;
  if (cfg.predictor == PredictorKind::Gru)
    model = load_gru_file(cfg.model_path);

  std::vector<SweepResult> results;
  for (const std::string& source : cfg.cycles) {
    const DriveCycle cycle = resolve_cycle(source);

    std::vector<std::future<RunLog>> futures;
    futures.reserve(cfg.alphas.size());
    for (double alpha : cfg.alphas) {
      RunOptions opt;
      opt.predictor = cfg.predictor;
      opt.model = cfg.predictor == PredictorKind::Gru ? &model : nullptr;
      opt.params = cfg.params;
      opt.params.alpha = alpha;
      opt.human_weights = cfg.human_weights;
      opt.human_tau = cfg.human_tau;
      opt.human_v_des = cfg.human_v_des;
      opt.seed = cfg.seed;
      futures.push_back(std::async(std::launch::async, [&cycle, opt] {
        return run(cycle, opt);
      }));
    }

    SweepResult res;
    res.cycle = cycle.name;
    res.alphas = cfg.alphas;

    std::vector<RunLog> logs;
    logs.reserve(futures.size());
    for (auto& f : futures) logs.push_back(f.get());

    const std::string stem = cycle.name + "_" +
                             predictor_name(cfg.predictor);
    for (std::size_t i = 0; i < logs.size(); ++i) {
      const fs::path p = fs::path(cfg.out_dir) /
                         (stem + "_alpha" +
                          detail::alpha_tag(cfg.alphas[i]) + ".csv");
      write_run_csv(logs[i], p.string());
      res.artifacts.push_back(p.string());
      res.metrics.push_back(metrics(logs[i]));
    }

    const fs::path mcsv = fs::path(cfg.out_dir) / (stem + "_metrics.csv");
    atomic_write_file(mcsv, detail::metrics_csv(cfg.alphas, res.metrics));
    res.artifacts.push_back(mcsv.string());

    const fs::path mjson = fs::path(cfg.out_dir) / (stem + "_metrics.json");
    atomic_write_file(mjson,
                      detail::metrics_json(cycle.name, cfg.predictor,
                                           cfg.seed, cfg.alphas, res.metrics)
                              .dump(2) +
                          "\n");
    res.artifacts.push_back(mjson.string());

    const fs::path svg = fs::path(cfg.out_dir) / (stem + "_trust.svg");
    atomic_write_file(
        svg, detail::trust_traces_svg(
                 cfg.alphas, logs,
                 cycle.name + " / " + predictor_name(cfg.predictor)));
    res.artifacts.push_back(svg.string());

    results.push_back(std::move(res));
  }
  return results;
}

struct TrainResult {
  std::string model_path;
  std::string loss_csv_path;
  LossTrace trace;
  std::size_t n_train = 0;
  std::size_t n_val = 0;
};

/// Train the GRU plan estimator on simulated trajectories: run the
/// constant-acceleration trust-aware configuration for every alpha in the
/// config on the named cycle(s), slice the logs into windows, fit, and
/// persist the model plus a loss-curve CSV.
inline TrainResult train_experiment(const ExperimentConfig& cfg) {
  if (cfg.alphas.empty()) throw ConfigError("config: empty alpha list");
  if (cfg.cycles.empty()) throw ConfigError("config: empty cycle list");
  namespace fs = std::filesystem;
  for (const std::string& c : cfg.cycles) {
    if (!fs::exists(c) && !fs::exists(fs::path(data_dir()) / (c + ".csv")))
      throw ConfigError("config: cycle '" + c +
                        "' is neither a file nor a bundled preset");
  }

  std::vector<std::future<RunLog>> futures;
  for (const std::string& source : cfg.cycles) {
    const DriveCycle cycle = resolve_cycle(source);
    for (double alpha : cfg.alphas) {
      RunOptions opt;
      opt.predictor = PredictorKind::ConstantAccel;
      opt.params = cfg.params;
      opt.params.alpha = alpha;
      opt.human_weights = cfg.human_weights;
      opt.human_tau = cfg.human_tau;
      opt.human_v_des = cfg.human_v_des;
      opt.seed = cfg.seed;
      futures.push_back(std::async(std::launch::async, [cycle, opt] {
        return run(cycle, opt);
      }));
    }
  }

  std::vector<std::vector<FeatureRow>> trajectories;
  trajectories.reserve(futures.size());
  for (auto& f : futures) trajectories.push_back(feature_rows(f.get()));

  const Dataset ds =
      build_dataset(trajectories, cfg.params.h_history, cfg.params.n_horizon);

  GruModel model = GruModel::make(cfg.gru_hidden, cfg.params.n_horizon,
                                  cfg.params.h_history);
  model.out_lo = cfg.params.u_min - 2.0;
  model.out_hi = cfg.params.u_max + 2.0;
  TrainConfig tc = cfg.train;
  tc.seed = cfg.seed;
  const LossTrace trace = train_gru(model, ds, tc);

  TrainResult result;
  result.trace = trace;
  result.n_train = ds.train.size();
  result.n_val = ds.val.size();
  result.model_path = cfg.model_path.empty()
                          ? (fs::path(cfg.out_dir) / "gru_model.txt").string()
                          : cfg.model_path;
  fs::create_directories(fs::path(result.model_path).parent_path().empty()
                             ? fs::path(".")
                             : fs::path(result.model_path).parent_path());
  {
    std::ostringstream os;
    save_gru(model, os);
    atomic_write_file(result.model_path, os.str());
  }

  std::string loss = "epoch,train_mse,val_mse\n";
  for (std::size_t i = 0; i < trace.train.size(); ++i)
    loss += std::to_string(i) + "," + fmt_double(trace.train[i]) + "," +
            fmt_double(trace.val[i]) + "\n";
  const fs::path loss_path = fs::path(cfg.out_dir) / "train_loss.csv";
  atomic_write_file(loss_path, loss);
  result.loss_csv_path = loss_path.string();
  return result;
}

}  // namespace tacf
