#pragma once

// Closed-loop three-vehicle simulation: the preceding traffic replays a
// drive cycle, the AV follows it under the trust-aware controller, and the
// model human driver follows the AV. One RunLog row per cycle step records
// everything the metrics and the predictor training need.

#include <cstdint>
#include <string>
#include <vector>

#include "tacf/control.hpp"
#include "tacf/core.hpp"
#include "tacf/cycles.hpp"
#include "tacf/io.hpp"
#include "tacf/predict.hpp"
#include "tacf/trust.hpp"

namespace tacf {

enum class PredictorKind { ConstantAccel, Gru };

inline const char* predictor_name(PredictorKind k) {
  return k == PredictorKind::ConstantAccel ? "ca" : "gru";
}

struct StepRecord {
  int t = 0;
  double v_pt = 0.0;
  double v_av = 0.0;
  double v_human = 0.0;
  double gap_av = 0.0;
  double gap_human = 0.0;
  double u_av = 0.0;     // executed
  double u_human = 0.0;  // executed
  double e = 0.0;
  double p = 1.0;
  double trust = 0.0;  // trust level entering this step; row 0 holds T(0)
  long evals_av = 0;
  long evals_human = 0;
  Plan plan_av;
  Plan plan_expected;
};

struct RunMeta {
  std::string cycle;
  PredictorKind predictor = PredictorKind::ConstantAccel;
  std::uint64_t seed = 0;
  SimParams params;  // effective values (v_max resolved from the cycle)
  HumanCost human;
};

struct RunLog {
  RunMeta meta;
  std::vector<StepRecord> steps;
};

struct ViolationCounts {
  long av_gap = 0;     // AV gap outside [d_min, d_max]
  long human_gap = 0;  // human gap below d_s
  long total() const { return av_gap + human_gap; }
};

struct RunMetrics {
  double final_trust = 0.0;
  double avg_explicability = 0.0;
  double rmse_pred = 0.0;
  ViolationCounts violations;
};

struct RunOptions {
  PredictorKind predictor = PredictorKind::ConstantAccel;
  const GruModel* model = nullptr;  // required when predictor == Gru
  SimParams params = SimParams::defaults();
  std::array<double, 4> human_weights{0.25, 0.25, 0.25, 0.25};
  double human_tau = 1.2;          // s
  double human_v_des = -1.0;       // m/s; <0 means "cycle top speed"
  double human_floor_margin = -1.0;  // m; <0 keeps the HumanCost default
  std::uint64_t seed = 0;
};

/// The feature vector the human bases its expectation on, observed at one
/// time step: own gap to the AV, relative speed, own time headway, and the
/// acceleration the AV executed. Shared between the live simulation and the
/// dataset builder so training and inference see identical features.
inline FeatureRow interaction_features(double gap_h, double v_av, double v_h,
                                       double u_av) {
  FeatureRow r;
  r.gap = gap_h;
  r.rel_speed = v_av - v_h;
  r.headway = time_headway(gap_h, v_h);
  r.u_av = u_av;
  return r;
}

namespace detail {

/// Window of the last H feature rows; warm-up pads by repeating the
/// earliest observed row (or, at the very first step, the row implied by
/// the initial state with zero acceleration).
inline PredictorWindow make_window(const std::vector<FeatureRow>& history,
                                   const FeatureRow& initial_row, int h) {
  PredictorWindow w;
  w.rows.reserve(static_cast<std::size_t>(h));
  const std::size_t have = history.size();
  const FeatureRow& pad = have ? history.front() : initial_row;
  const std::size_t need = static_cast<std::size_t>(h);
  for (std::size_t k = 0; k < need; ++k) {
    // rows t-H .. t-1
    if (have + k < need)
      w.rows.push_back(pad);
    else
      w.rows.push_back(history[have + k - need]);
  }
  return w;
}

}  // namespace detail

/// Simulate one full cycle under one configuration. Deterministic: the same
/// cycle, options and seed produce a bit-identical log.
inline RunLog run(const DriveCycle& cycle, const RunOptions& opt) {
  detail::require(cycle.length() > 0, "run: empty cycle");
  SimParams p = opt.params;
  if (p.v_max_from_cycle()) p.v_max = cycle.max_speed();
  p.validate();
  if (opt.predictor == PredictorKind::Gru) {
    if (opt.model == nullptr || !opt.model->trained)
      throw ModelNotReady("run: GRU predictor selected but no trained model "
                          "was supplied");
    detail::require(opt.model->horizon == p.n_horizon &&
                        opt.model->history == p.h_history,
                    "run: model horizon/history do not match parameters");
  }

  const double v0 = cycle.speeds.front();
  HumanCost human_cfg = HumanCost::make(
      opt.human_weights,
      opt.human_v_des >= 0.0 ? opt.human_v_des : cycle.max_speed(),
      opt.human_tau, p.d_s);
  if (opt.human_floor_margin >= 0.0)
    human_cfg.floor_margin = opt.human_floor_margin;

  RunLog log;
  log.meta.cycle = cycle.name;
  log.meta.predictor = opt.predictor;
  log.meta.seed = opt.seed;
  log.meta.params = p;
  log.meta.human = human_cfg;
  log.steps.reserve(cycle.length());

  PairState s_av{p.d_s + v0 * p.tau_r, v0, v0, 0.0};
  PairState s_h{p.d_s + v0 * human_cfg.tau_h, v0, v0, 0.0};
  TrustState trust{0.0, p.delta, p.p_thre};

  AvController av(p);
  HumanController human(p, human_cfg);

  std::vector<FeatureRow> history;
  history.reserve(cycle.length());
  double last_u_av = 0.0;

  for (std::size_t t = 0; t < cycle.length(); ++t) {
    // 1. the human's expectation of the AV's plan
    Plan expected;
    if (opt.predictor == PredictorKind::ConstantAccel) {
      expected = predict_ca(last_u_av, p.n_horizon);
    } else {
      const FeatureRow initial = interaction_features(
          s_h.gap, s_h.v_leader, s_h.v_follower, 0.0);
      expected = predict_gru(
          *opt.model, detail::make_window(history, initial, p.h_history));
    }

    // 2. AV decision against the traffic preview
    const std::vector<double> pv = preview(cycle, t, p.n_horizon);
    SolveReport rep_av;
    try {
      rep_av = av.decide(s_av, trust.t, expected, pv);
    } catch (const std::exception& ex) {
      throw std::runtime_error("run: AV controller failed at step " +
                               std::to_string(t) + ": " + ex.what());
    }

    // 3. explicability and performance of the committed plan
    const ExplicabilityRecord score =
        score_plans(rep_av.plan, expected, p.eps);

    // 4. human decision against the expected AV plan
    SolveReport rep_h;
    try {
      rep_h = human.decide(s_h, expected);
    } catch (const std::exception& ex) {
      throw std::runtime_error("run: human controller failed at step " +
                               std::to_string(t) + ": " + ex.what());
    }

    // 5. both followers execute the first action of their plans
    const double u_av = rep_av.plan[0];
    const double u_h = rep_h.plan[0];
    const PairState s_av_next = step_pair(s_av, pv[0], u_av, p);
    const PairState s_h_next =
        step_pair(s_h, s_av_next.v_follower, u_h, p);

    // 6. log
    StepRecord rec;
    rec.t = static_cast<int>(t);
    rec.v_pt = cycle.speeds[t];
    rec.v_av = s_av.v_follower;
    rec.v_human = s_h.v_follower;
    rec.gap_av = s_av.gap;
    rec.gap_human = s_h.gap;
    rec.u_av = u_av;
    rec.u_human = u_h;
    rec.e = score.e;
    rec.p = score.p;
    rec.trust = trust.t;
    rec.evals_av = rep_av.evaluations;
    rec.evals_human = rep_h.evaluations;
    rec.plan_av = rep_av.plan;
    rec.plan_expected = expected;
    log.steps.push_back(std::move(rec));

    history.push_back(interaction_features(s_h.gap, s_h.v_leader,
                                           s_h.v_follower, u_av));
    trust = trust_step(trust, score.p);
    s_av = s_av_next;
    s_h = s_h_next;
    last_u_av = u_av;
  }
  return log;
}

/// Summary metrics of one run: final trust level, mean explicability score
/// and the one-step RMSE of the plan estimator (first predicted action vs
/// the acceleration the AV actually executed).
inline RunMetrics metrics(const RunLog& log) {
  if (log.steps.empty())
    throw ContractViolation("metrics: empty run log");
  RunMetrics m;
  double sum_e = 0.0, sum_sq = 0.0;
  for (const StepRecord& r : log.steps) {
    sum_e += r.e;
    const double err = r.plan_expected[0] - r.u_av;
    sum_sq += err * err;
    if (r.gap_av < log.meta.params.d_min || r.gap_av > log.meta.params.d_max)
      ++m.violations.av_gap;
    if (r.gap_human < log.meta.human.d_s) ++m.violations.human_gap;
  }
  const double n = static_cast<double>(log.steps.size());
  m.final_trust = log.steps.back().trust;
  m.avg_explicability = sum_e / n;
  m.rmse_pred = std::sqrt(sum_sq / n);
  return m;
}

struct ImprovementPct {
  double trust = 0.0;          // positive = trust grew
  double explicability = 0.0;  // positive = score shrank
  double rmse = 0.0;           // positive = error shrank
};

/// Percentage improvements of `other` over the trust-unaware baseline:
/// trust gains count upward, explicability and RMSE count as reductions.
inline ImprovementPct improvement(const RunMetrics& base,
                                  const RunMetrics& other) {
  detail::require(base.final_trust != 0.0,
                  "improvement: baseline final trust is zero");
  detail::require(base.avg_explicability != 0.0,
                  "improvement: baseline explicability is zero");
  detail::require(base.rmse_pred != 0.0,
                  "improvement: baseline RMSE is zero");
  ImprovementPct imp;
  imp.trust =
      100.0 * (other.final_trust - base.final_trust) / base.final_trust;
  imp.explicability = 100.0 *
                      (base.avg_explicability - other.avg_explicability) /
                      base.avg_explicability;
  imp.rmse = 100.0 * (base.rmse_pred - other.rmse_pred) / base.rmse_pred;
  return imp;
}

/// Interaction features of a finished run, for the dataset builder.
inline std::vector<FeatureRow> feature_rows(const RunLog& log) {
  std::vector<FeatureRow> rows;
  rows.reserve(log.steps.size());
  for (const StepRecord& r : log.steps)
    rows.push_back(
        interaction_features(r.gap_human, r.v_av, r.v_human, r.u_av));
  return rows;
}

/// Fixed CSV schema of a run log (documented in the README):
///   t,v_pt,v_av,v_human,gap_av,gap_human,u_av,u_human,
///   explicability,performance,trust,evals_av,evals_human,
///   plan_av_0..N-1,plan_exp_0..N-1
inline std::string run_csv(const RunLog& log) {
  std::string out;
  out.reserve(log.steps.size() * 220 + 256);
  out += "t,v_pt,v_av,v_human,gap_av,gap_human,u_av,u_human,"
         "explicability,performance,trust,evals_av,evals_human";
  const int n = log.meta.params.n_horizon;
  for (int k = 0; k < n; ++k) out += ",plan_av_" + std::to_string(k);
  for (int k = 0; k < n; ++k) out += ",plan_exp_" + std::to_string(k);
  out += "\n";
  for (const StepRecord& r : log.steps) {
    out += std::to_string(r.t);
    for (double v : {r.v_pt, r.v_av, r.v_human, r.gap_av, r.gap_human,
                     r.u_av, r.u_human, r.e, r.p, r.trust}) {
      out += ",";
      out += fmt_double(v);
    }
    out += "," + std::to_string(r.evals_av);
    out += "," + std::to_string(r.evals_human);
    for (std::size_t k = 0; k < r.plan_av.size(); ++k)
      out += "," + fmt_double(r.plan_av[k]);
    for (std::size_t k = 0; k < r.plan_expected.size(); ++k)
      out += "," + fmt_double(r.plan_expected[k]);
    out += "\n";
  }
  return out;
}

inline void write_run_csv(const RunLog& log, const std::string& path) {
  atomic_write_file(path, run_csv(log));
}

}  // namespace tacf
