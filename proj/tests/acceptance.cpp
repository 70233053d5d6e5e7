// Acceptance suite: end-to-end checks of the headline behaviors, one
// printed pass/fail line per criterion. Exits nonzero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "grid_oracle.hpp"
#include "tacf/experiment.hpp"

using namespace tacf;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Check {
  Outcome& o;
  void operator()(bool cond, const std::string& msg) {
    if (!cond) {
      o.pass = false;
      if (!o.detail.empty()) o.detail += "; ";
      o.detail += msg;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt(double v) { return fmt_double(v, 6); }

RunLog run_one(const DriveCycle& cycle, double alpha, PredictorKind kind,
               const GruModel* model) {
  RunOptions opt;
  opt.predictor = kind;
  opt.model = model;
  opt.params.alpha = alpha;
  opt.seed = 42;
  return run(cycle, opt);
}

const std::vector<double> kAlphas{0.0, 0.25, 0.5, 0.75, 1.0};

// criterion 1: on the highway cycle with the constant-acceleration
// estimator, final trust rises and average explicability falls strictly
// with alpha; the five-run sweep finishes inside two minutes.
Outcome criterion_alpha_monotonicity(std::vector<RunMetrics>& out_metrics) {
  Outcome o;
  Check check{o};
  const auto t0 = std::chrono::steady_clock::now();

  const DriveCycle us06 = resolve_cycle("us06");
  for (double a : kAlphas)
    out_metrics.push_back(
        metrics(run_one(us06, a, PredictorKind::ConstantAccel, nullptr)));

  const double elapsed = seconds_since(t0);
  check(elapsed < 120.0, "sweep took " + fmt(elapsed) + " s (limit 120)");

  std::string trust_list, e_list;
  for (std::size_t i = 0; i < out_metrics.size(); ++i) {
    trust_list += (i ? ", " : "") + fmt(out_metrics[i].final_trust);
    e_list += (i ? ", " : "") + fmt(out_metrics[i].avg_explicability);
    if (i > 0) {
      check(out_metrics[i].final_trust > out_metrics[i - 1].final_trust,
            "final trust not strictly increasing at alpha=" +
                fmt(kAlphas[i]));
      check(out_metrics[i].avg_explicability <
                out_metrics[i - 1].avg_explicability,
            "avg explicability not strictly decreasing at alpha=" +
                fmt(kAlphas[i]));
    }
  }
  if (o.pass)
    o.detail = "trust [" + trust_list + "], E [" + e_list + "], " +
               fmt(elapsed) + " s";
  return o;
}

// criterion 2: improvement magnitudes from alpha 0 to 1 fall in the wide
// documented bands (trust 5-60%, explicability 20-90%).
Outcome criterion_improvement_bands(const std::vector<RunMetrics>& ms) {
  Outcome o;
  Check check{o};
  const ImprovementPct imp = improvement(ms.front(), ms.back());
  check(imp.trust >= 5.0 && imp.trust <= 60.0,
        "trust improvement " + fmt(imp.trust) + "% outside [5, 60]");
  check(imp.explicability >= 20.0 && imp.explicability <= 90.0,
        "explicability improvement " + fmt(imp.explicability) +
            "% outside [20, 90]");
  if (o.pass)
    o.detail = "trust +" + fmt(imp.trust) + "%, E -" +
               fmt(imp.explicability) + "%";
  return o;
}

// criterion 3: the improvement arithmetic reproduces the reference final
// trust comparison exactly.
Outcome criterion_improvement_arithmetic() {
  Outcome o;
  Check check{o};
  RunMetrics base, other;
  base.final_trust = 44.360;
  base.avg_explicability = 1.0;
  base.rmse_pred = 1.0;
  other = base;
  other.final_trust = 53.402;
  const ImprovementPct imp = improvement(base, other);
  check(std::abs(imp.trust - 20.38) <= 0.01,
        "expected 20.38%, got " + fmt(imp.trust));
  if (o.pass) o.detail = "(44.360 -> 53.402) = " + fmt(imp.trust) + "%";
  return o;
}

// criterion 4: explicability/trust unit behavior, end to end.
Outcome criterion_trust_suite() {
  Outcome o;
  Check check{o};

  check(explicability(Plan({1, -0.5, 0}), Plan({1, -0.5, 0}), 6.0) == 0.0,
        "identical plans must score 0");
  check(std::abs(explicability(Plan({1, 1, 1}), Plan({0, 0, 0}), 6.0) -
                 0.023255813953488372) < 1e-15,
        "shifted-distance value for [1,1,1] vs [0,0,0]");
  check(std::abs(explicability(Plan({3, 3, 3}), Plan({-3, -3, -3}), 6.0) -
                 4.0 / 7.0) < 1e-15,
        "extreme-dissimilarity value");
  check(performance(0.0) == 1.0, "P(0) must be 1");
  check(std::abs(performance(0.023255813953488372) - 0.976748377642699) <
            1e-12,
        "P(E) hand value");

  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 500; ++trial) {
    Plan a({u(rng), u(rng), u(rng)});
    Plan b({u(rng), u(rng), u(rng)});
    const double eab = explicability(a, b, 6.0);
    check(eab == explicability(b, a, 6.0), "symmetry");
    check(eab >= 0.0 && eab < 1.0, "E range");
    const double p = performance(eab);
    check(p > 0.0 && p <= 1.0, "P range");
  }

  TrustState s{5.0, 0.1, 0.8};
  check(std::abs(trust_step(s, 0.8).t - 5.08) < 1e-12,
        "threshold P = 0.8 must count as growth");
  check(trust_step(s, 0.8 - 1e-9).t < 5.0, "below threshold must decay");

  std::uniform_real_distribution<double> ed(0.0, 0.9);
  for (int trial = 0; trial < 100; ++trial) {
    const double e = ed(rng);
    const int n = static_cast<int>(rng() % 5);
    TrustState t{ed(rng) * 10.0, 0.1, 0.8};
    const double t0 = t.t;
    const double p = performance(e);
    TrustState stepped = t;
    for (int k = 0; k < n; ++k) stepped = trust_step(stepped, p);
    check(std::abs(stepped.t - trust_horizon(t0, e, n, 0.1, 0.8)) < 1e-12,
          "composition of trust steps");
  }
  if (o.pass) o.detail = "examples, symmetry, bounds, threshold, composition";
  return o;
}

// criterion 5: solver optimality against the exhaustive grid on 50
// randomized horizon problems, within 1% and 30 seconds.
Outcome criterion_solver_oracle() {
  Outcome o;
  Check check{o};
  const auto t0 = std::chrono::steady_clock::now();

  SimParams p = SimParams::defaults();
  p.v_max = 35.0;
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> gap_d(6.0, 40.0);
  std::uniform_real_distribution<double> v_d(0.0, 30.0);
  std::uniform_real_distribution<double> a_d(0.0, 1.0);
  std::uniform_real_distribution<double> u_d(-3.0, 3.0);

  double worst_gap_pct = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    p.alpha = a_d(rng);
    const PairState s{gap_d(rng), v_d(rng), v_d(rng), 0.0};
    const std::vector<double> preview{v_d(rng), v_d(rng), v_d(rng)};
    const Plan expected = Plan::constant(u_d(rng), 3);
    const double trust0 = 3.0 * a_d(rng);
    auto cost = [&](const Plan& plan) {
      return av_total_cost(plan, expected, rollout(s, preview, plan, p),
                           trust0, p);
    };
    const SolveReport r = solve_horizon(cost, p, Plan::zeros(3));
    const tacf_test::GridResult g =
        tacf_test::grid_min(cost, 3, p.u_min, p.u_max, 0.1);
    check(r.cost <= g.cost * 1.01 + 1e-12,
          "instance " + std::to_string(trial) + ": solver " + fmt(r.cost) +
              " vs grid " + fmt(g.cost));
    if (g.cost > 1e-12)
      worst_gap_pct =
          std::max(worst_gap_pct, 100.0 * (r.cost - g.cost) / g.cost);
  }
  const double elapsed = seconds_since(t0);
  check(elapsed < 30.0, "oracle sweep took " + fmt(elapsed) + " s");
  if (o.pass)
    o.detail = "50 instances, worst excess " + fmt(worst_gap_pct) + "%, " +
               fmt(elapsed) + " s";
  return o;
}

// criterion 6: analytic BPTT gradients vs central finite differences.
Outcome criterion_gradient_check() {
  Outcome o;
  Check check{o};

  std::mt19937_64 rng(4242);
  GruModel m = GruModel::make(2, 2, 3);
  m.init_weights(rng());
  m.trained = true;
  PredictorWindow w;
  std::uniform_real_distribution<double> f(-1.0, 1.0);
  for (int k = 0; k < 3; ++k)
    w.rows.push_back(FeatureRow{10.0 + f(rng), f(rng), 1.0 + 0.2 * f(rng),
                                f(rng)});
  const std::vector<double> target{0.3, -0.4};

  auto loss = [&](const GruModel& model) {
    const auto fwd = tacf::detail::gru_forward(model, w);
    double s = 0.0;
    for (std::size_t j = 0; j < fwd.y.size(); ++j) {
      const double d = fwd.y[j] - target[j];
      s += d * d;
    }
    return s / static_cast<double>(fwd.y.size());
  };

  std::vector<double> analytic(m.params.size(), 0.0);
  {
    const auto fwd = tacf::detail::gru_forward(m, w);
    std::vector<double> dy(fwd.y.size());
    for (std::size_t j = 0; j < fwd.y.size(); ++j)
      dy[j] = 2.0 * (fwd.y[j] - target[j]) / static_cast<double>(fwd.y.size());
    tacf::detail::gru_backward(m, fwd, dy, analytic);
  }

  double worst = 0.0;
  for (std::size_t i = 0; i < m.params.size(); ++i) {
    const double h = 1e-5 * std::max(1.0, std::abs(m.params[i]));
    GruModel mp = m, mm = m;
    mp.params[i] += h;
    mm.params[i] -= h;
    const double fd = (loss(mp) - loss(mm)) / (2.0 * h);
    const double denom = std::max({std::abs(analytic[i]), std::abs(fd), 1.0});
    worst = std::max(worst, std::abs(analytic[i] - fd) / denom);
  }
  check(worst <= 1e-4, "max relative error " + fmt(worst));
  if (o.pass) o.detail = "max relative error " + fmt(worst);
  return o;
}

// criterion 7: after training on the highway constant-acceleration
// trajectories, the GRU estimator must beat the CA baseline at alpha = 1 on
// both one-step RMSE and average explicability.
Outcome criterion_gru_beats_ca() {
  Outcome o;
  Check check{o};

  const fs::path out = fs::temp_directory_path() / "tacf_acceptance_train";
  fs::remove_all(out);

  ExperimentConfig cfg;
  cfg.cycles = {"us06"};
  cfg.alphas = kAlphas;
  cfg.out_dir = out.string();
  cfg.model_path = (out / "model.txt").string();
  cfg.seed = 42;
  const TrainResult tr = train_experiment(cfg);
  check(fs::exists(tr.model_path), "model file missing");

  const GruModel model = load_gru_file(tr.model_path);
  const DriveCycle us06 = resolve_cycle("us06");
  const RunMetrics m_gru =
      metrics(run_one(us06, 1.0, PredictorKind::Gru, &model));
  const RunMetrics m_ca =
      metrics(run_one(us06, 1.0, PredictorKind::ConstantAccel, nullptr));

  check(m_gru.rmse_pred < m_ca.rmse_pred,
        "GRU RMSE " + fmt(m_gru.rmse_pred) + " not below CA " +
            fmt(m_ca.rmse_pred));
  check(m_gru.avg_explicability < m_ca.avg_explicability,
        "GRU avg E " + fmt(m_gru.avg_explicability) + " not below CA " +
            fmt(m_ca.avg_explicability));
  if (o.pass)
    o.detail = "rmse " + fmt(m_gru.rmse_pred) + " < " + fmt(m_ca.rmse_pred) +
               ", E " + fmt(m_gru.avg_explicability) + " < " +
               fmt(m_ca.avg_explicability) + " (" +
               std::to_string(tr.trace.train.size()) + " epochs)";
  fs::remove_all(out);
  return o;
}

// criterion 8: bit-identical reruns, exact trust replay, and the gap
// telescoping identity over the full urban cycle.
Outcome criterion_determinism_replay() {
  Outcome o;
  Check check{o};

  const DriveCycle nycc = resolve_cycle("nycc");
  const RunLog a = run_one(nycc, 0.5, PredictorKind::ConstantAccel, nullptr);
  const RunLog b = run_one(nycc, 0.5, PredictorKind::ConstantAccel, nullptr);
  check(run_csv(a) == run_csv(b), "rerun with identical config differed");

  TrustState trust{0.0, a.meta.params.delta, a.meta.params.p_thre};
  for (const StepRecord& r : a.steps) {
    if (r.trust != trust.t) {
      check(false, "trust replay diverged at t=" + std::to_string(r.t));
      break;
    }
    trust = trust_step(trust, r.p);
  }

  double acc_av = 0.0, acc_h = 0.0;
  double worst = 0.0;
  for (std::size_t t = 0; t + 1 < a.steps.size(); ++t) {
    acc_av += (a.steps[t].v_pt - a.steps[t].v_av) * a.meta.params.dt;
    acc_h += (a.steps[t].v_av - a.steps[t].v_human) * a.meta.params.dt;
    worst = std::max(
        worst, std::abs(a.steps[t + 1].gap_av - a.steps[0].gap_av - acc_av));
    worst = std::max(worst, std::abs(a.steps[t + 1].gap_human -
                                     a.steps[0].gap_human - acc_h));
  }
  check(worst <= 1e-9, "telescoping drift " + fmt(worst));
  if (o.pass)
    o.detail = "byte-identical logs, exact replay, drift " + fmt(worst);
  return o;
}

}  // namespace

int main() {
  std::vector<RunMetrics> sweep;
  const std::vector<std::pair<std::string, std::function<Outcome()>>>
      criteria{
          {"alpha monotonicity (US06, CA)",
           [&] { return criterion_alpha_monotonicity(sweep); }},
          {"improvement magnitudes in bands",
           [&] { return criterion_improvement_bands(sweep); }},
          {"improvement arithmetic",
           [] { return criterion_improvement_arithmetic(); }},
          {"explicability/trust unit suite",
           [] { return criterion_trust_suite(); }},
          {"solver grid-oracle equivalence",
           [] { return criterion_solver_oracle(); }},
          {"GRU gradient check", [] { return criterion_gradient_check(); }},
          {"trained GRU beats CA baseline",
           [] { return criterion_gru_beats_ca(); }},
          {"determinism, replay, telescoping",
           [] { return criterion_determinism_replay(); }},
      };

  bool all_pass = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& ex) {
      o.pass = false;
      o.detail = std::string("exception: ") + ex.what();
    }
    all_pass = all_pass && o.pass;
    std::printf("%s  %zu  %s%s%s\n", o.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.empty() ? "" : " — ",
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%s\n", all_pass ? "ACCEPTANCE: ALL CRITERIA PASSED"
                               : "ACCEPTANCE: FAILURES PRESENT");
  return all_pass ? 0 : 1;
}
