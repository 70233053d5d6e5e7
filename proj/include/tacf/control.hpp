#pragma once

// Receding-horizon controllers. Both the automated vehicle and the model
// human driver solve a small box-constrained horizon problem at every step.
// The AV tracks a constant-time-headway gap to the preceding traffic and,
// weighted by alpha, the explicability of its plan against what the human
// expects; the human tracks its own feature-weighted car-following cost
// against the AV's predicted motion.
//
// The horizon cost is piecewise-defined (plan distance, trust floor, speed
// clamping), so the solver is derivative-free: cyclic coordinate descent
// with shrinking probe steps, restarted from a small set of candidate
// plans. With a 3-step horizon this is both fast and, as the test-suite's
// exhaustive-grid oracle confirms, accurate.

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "tacf/core.hpp"
#include "tacf/trust.hpp"

namespace tacf {

class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Default weight for the soft state constraints (gap bounds, speed
/// clamping, trust floor). Acceleration bounds stay hard.
constexpr double kSoftPenaltyWeight = 1e4;

/// Feature weights of the model human driver. The four entries weight the
/// acceleration, desired-speed, relative-speed and relative-distance
/// features; they are normalized to sum to one on construction so that
/// externally learned weight vectors of any scale can be dropped in.
struct HumanCost {
  std::array<double, 4> weights{0.25, 0.25, 0.25, 0.25};
  double v_des = 0.0;    // m/s; the sweep driver fills in the cycle top speed
  double tau_h = 1.2;    // s
  double d_s = 5.0;      // m
  double penalty_weight = kSoftPenaltyWeight;
  // The gap floor is enforced with this much headroom. The human plans
  // against a *predicted* AV trajectory; the margin absorbs one step of
  // misprediction so the realized gap still clears d_s.
  double floor_margin = 0.5;  // m

  static HumanCost make(const std::array<double, 4>& w, double v_des,
                        double tau_h = 1.2, double d_s = 5.0) {
    double sum = 0.0;
    for (double wi : w) {
      detail::require(wi >= 0.0, "HumanCost: negative feature weight");
      sum += wi;
    }
    detail::require(sum > 0.0, "HumanCost: all feature weights zero");
    HumanCost h;
    for (std::size_t i = 0; i < 4; ++i) h.weights[i] = w[i] / sum;
    h.v_des = v_des;
    h.tau_h = tau_h;
    h.d_s = d_s;
    return h;
  }
};

struct ConstraintFlags {
  bool speed_clamped = false;
  bool gap_below_min = false;
  bool gap_above_max = false;
  bool trust_below_floor = false;
};

struct SolveReport {
  Plan plan;
  double cost = 0.0;
  long evaluations = 0;
  ConstraintFlags flags;
};

namespace detail {
inline double sq(double x) { return x * x; }
}  // namespace detail

/// Constant-time-headway tracking cost over a rolled-out candidate plan:
/// sum of (d_CTH - gap)^2 with d_CTH = d_s + v * tau_R, plus soft quadratic
/// penalties for gap-bound violations and for speed clamping.
inline double av_stage_cost(const std::vector<PairState>& states,
                            const SimParams& p,
                            double penalty_weight = kSoftPenaltyWeight) {
  double cost = 0.0;
  for (const PairState& s : states) {
    const double d_cth = p.d_s + s.v_follower * p.tau_r;
    cost += detail::sq(d_cth - s.gap);
    if (s.gap < p.d_min) cost += penalty_weight * detail::sq(p.d_min - s.gap);
    if (s.gap > p.d_max) cost += penalty_weight * detail::sq(s.gap - p.d_max);
    cost += penalty_weight * detail::sq(s.clamp_excess);
  }
  return cost;
}

/// Full AV objective: tracking cost, the alpha-weighted plan distance to
/// the human's expected plan, and a penalty if holding this plan's
/// explicability for the horizon would sink the trust level below the
/// floor. The plan distance enters through the fixed explicability gain,
/// which puts the dimensionless score on the tracking cost's scale so that
/// the relative weight alpha trades the two terms off meaningfully.
inline double av_total_cost(const Plan& plan, const Plan& expected,
                            const std::vector<PairState>& states,
                            double trust0, const SimParams& p,
                            double penalty_weight = kSoftPenaltyWeight) {
  double cost = av_stage_cost(states, p, penalty_weight);
  const double e = explicability(plan, expected, p.eps);
  if (p.alpha > 0.0) cost += p.alpha * p.explicability_gain * e;
  const double t_n =
      trust_horizon(trust0, e, p.n_horizon, p.delta, p.p_thre);
  if (t_n < p.t_min) cost += penalty_weight * detail::sq(p.t_min - t_n);
  return cost;
}

/// Feature-weighted human cost over a rollout against the AV's predicted
/// motion. `states_h` must be rolled out with the predicted AV speeds as
/// the leader, so each state carries the matching AV speed.
inline double human_cost(const Plan& plan_h,
                         const std::vector<PairState>& states_h,
                         const HumanCost& w, const SimParams& p) {
  detail::require(plan_h.size() == states_h.size(),
                  "human_cost: plan and rollout lengths differ");
  double cost = 0.0;
  for (std::size_t k = 0; k < states_h.size(); ++k) {
    const PairState& s = states_h[k];
    cost += w.weights[0] * detail::sq(plan_h[k]);
    cost += w.weights[1] * detail::sq(s.v_follower - w.v_des);
    cost += w.weights[2] * detail::sq(s.v_leader - s.v_follower);
    cost += w.weights[3] *
            detail::sq(s.gap - (w.d_s + s.v_follower * w.tau_h));
    const double floor = w.d_s + w.floor_margin;
    if (s.gap < floor) cost += w.penalty_weight * detail::sq(floor - s.gap);
    cost += w.penalty_weight * detail::sq(s.clamp_excess);
  }
  return cost;
}

/// Minimize an arbitrary plan cost over the box [u_min, u_max]^N.
///
/// Starts from the warm start, the zero plan and a constant-hold plan
/// (warm start's first action held over the horizon); runs cyclic
/// coordinate descent on each, halving the probe step whenever a full
/// sweep fails to improve, down to the step tolerance. The returned plan
/// respects the box exactly and never costs more than the warm start.
inline SolveReport solve_horizon(
    const std::function<double(const Plan&)>& cost_fn, const SimParams& p,
    const Plan& warm_start, double step_tol = 1e-3) {
  const std::size_t n = static_cast<std::size_t>(p.n_horizon);
  detail::require(warm_start.size() == n,
                  "solve_horizon: warm start has wrong length");

  long evals = 0;
  auto eval = [&](const Plan& plan) {
    ++evals;
    const double c = cost_fn(plan);
    if (!std::isfinite(c))
      throw SolverFailure("solve_horizon: cost function returned a "
                          "non-finite value");
    return c;
  };
  auto clamp_u = [&](double u) { return std::clamp(u, p.u_min, p.u_max); };

  Plan warm = warm_start;
  for (auto& u : warm.accels) u = clamp_u(u);

  std::vector<Plan> starts{warm, Plan::zeros(n),
                           Plan::constant(clamp_u(warm[0]), n)};
  // drop duplicate starts
  std::vector<Plan> unique_starts;
  for (const Plan& s : starts) {
    bool dup = false;
    for (const Plan& u : unique_starts) dup = dup || u == s;
    if (!dup) unique_starts.push_back(s);
  }

  Plan best;
  double best_cost = std::numeric_limits<double>::infinity();

  for (const Plan& start : unique_starts) {
    Plan x = start;
    double fx = eval(x);
    double h = 1.0;
    while (h >= step_tol) {
      bool improved = false;
      for (std::size_t k = 0; k < n; ++k) {
        for (double dir : {1.0, -1.0}) {
          // walk this coordinate while it keeps paying off
          for (;;) {
            const double u_new = clamp_u(x[k] + dir * h);
            if (u_new == x[k]) break;
            const double old = x[k];
            x[k] = u_new;
            const double f_new = eval(x);
            if (f_new < fx) {
              fx = f_new;
              improved = true;
            } else {
              x[k] = old;
              break;
            }
          }
        }
      }
      if (!improved) h *= 0.5;
    }
    if (fx < best_cost) {
      best_cost = fx;
      best = x;
    }
  }

  SolveReport report;
  report.plan = best;
  report.cost = best_cost;
  report.evaluations = evals;
  return report;
}

namespace detail {

inline Plan shift_warm_start(const Plan& prev) {
  Plan warm = prev;
  if (warm.size() > 1) {
    for (std::size_t k = 0; k + 1 < warm.size(); ++k)
      warm[k] = warm[k + 1];
    warm[warm.size() - 1] = warm[warm.size() - 2];
  }
  return warm;
}

inline void flag_rollout(const std::vector<PairState>& states, double d_lo,
                         double d_hi, ConstraintFlags& flags) {
  for (const PairState& s : states) {
    if (s.clamp_excess != 0.0) flags.speed_clamped = true;
    if (s.gap < d_lo) flags.gap_below_min = true;
    if (s.gap > d_hi) flags.gap_above_max = true;
  }
}

}  // namespace detail

/// Trust-aware AV controller. Stateful only through the warm-start cache:
/// each decision seeds the solver with the previous plan shifted one step.
class AvController {
 public:
  explicit AvController(const SimParams& p,
                        double penalty_weight = kSoftPenaltyWeight)
      : p_(p), penalty_weight_(penalty_weight),
        prev_(Plan::zeros(static_cast<std::size_t>(p.n_horizon))) {
    p_.validate();
  }

  SolveReport decide(const PairState& s, double trust0, const Plan& expected,
                     const std::vector<double>& preview) {
    detail::require(static_cast<int>(preview.size()) == p_.n_horizon,
                    "av_decide: preview length mismatch");
    detail::require(expected.size() ==
                        static_cast<std::size_t>(p_.n_horizon),
                    "av_decide: expected plan length mismatch");

    auto cost = [&](const Plan& plan) {
      const std::vector<PairState> states = rollout(s, preview, plan, p_);
      return av_total_cost(plan, expected, states, trust0, p_,
                           penalty_weight_);
    };
    SolveReport report =
        solve_horizon(cost, p_, detail::shift_warm_start(prev_));
    prev_ = report.plan;

    const std::vector<PairState> states =
        rollout(s, preview, report.plan, p_);
    detail::flag_rollout(states, p_.d_min, p_.d_max, report.flags);
    const double e = explicability(report.plan, expected, p_.eps);
    report.flags.trust_below_floor =
        trust_horizon(trust0, e, p_.n_horizon, p_.delta, p_.p_thre) < p_.t_min;
    return report;
  }

  void reset() { prev_ = Plan::zeros(static_cast<std::size_t>(p_.n_horizon)); }

 private:
  SimParams p_;
  double penalty_weight_;
  Plan prev_;
};

/// Model human driver. Plans against the AV's *expected* plan — the same
/// estimate the AV uses for its explicability term — rolled into a
/// predicted AV speed profile.
class HumanController {
 public:
  HumanController(const SimParams& p, const HumanCost& cost)
      : p_(p), cost_(cost),
        prev_(Plan::zeros(static_cast<std::size_t>(p.n_horizon))) {
    p_.validate();
  }

  /// Predicted AV speeds at steps t+1..t+N under the expected plan,
  /// applying the same speed clamps as the kinematics.
  std::vector<double> predicted_leader_speeds(const PairState& s_h,
                                              const Plan& expected_av) const {
    std::vector<double> v(expected_av.size());
    double v_av = s_h.v_leader;
    const double v_hi = p_.v_max_from_cycle()
                            ? std::numeric_limits<double>::infinity()
                            : p_.v_max;
    for (std::size_t k = 0; k < expected_av.size(); ++k) {
      v_av = std::clamp(v_av + expected_av[k] * p_.dt, p_.v_min, v_hi);
      v[k] = v_av;
    }
    return v;
  }

  SolveReport decide(const PairState& s_h, const Plan& expected_av) {
    detail::require(expected_av.size() ==
                        static_cast<std::size_t>(p_.n_horizon),
                    "human_decide: expected plan length mismatch");
    const std::vector<double> leader = predicted_leader_speeds(s_h,
                                                               expected_av);
    auto cost = [&](const Plan& plan) {
      const std::vector<PairState> states = rollout(s_h, leader, plan, p_);
      return human_cost(plan, states, cost_, p_);
    };
    SolveReport report =
        solve_horizon(cost, p_, detail::shift_warm_start(prev_));
    prev_ = report.plan;

    const std::vector<PairState> states = rollout(s_h, leader, report.plan, p_);
    detail::flag_rollout(states, cost_.d_s,
                         std::numeric_limits<double>::infinity(),
                         report.flags);
    return report;
  }

  void reset() { prev_ = Plan::zeros(static_cast<std::size_t>(p_.n_horizon)); }

 private:
  SimParams p_;
  HumanCost cost_;
  Plan prev_;
};

}  // namespace tacf
