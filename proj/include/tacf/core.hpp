#pragma once

// Shared domain types and discrete-time longitudinal kinematics for the
// leader/follower pairs simulated by this library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace tacf {

/// Thrown when a caller breaks a documented precondition.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {
inline void require(bool ok, const std::string& msg) {
  if (!ok) throw ContractViolation(msg);
}
}  // namespace detail

/// A horizon-length sequence of longitudinal accelerations (m/s^2).
/// Controllers commit to one Plan per step and execute only its first
/// element; predictors produce Plans of the same length.
struct Plan {
  std::vector<double> accels;

  Plan() = default;
  explicit Plan(std::vector<double> a) : accels(std::move(a)) {}
  static Plan zeros(std::size_t n) { return Plan(std::vector<double>(n, 0.0)); }
  static Plan constant(double u, std::size_t n) {
    return Plan(std::vector<double>(n, u));
  }

  std::size_t size() const { return accels.size(); }
  double& operator[](std::size_t k) { return accels[k]; }
  double operator[](std::size_t k) const { return accels[k]; }

  bool within(double u_min, double u_max) const {
    return std::all_of(accels.begin(), accels.end(),
                       [&](double u) { return u >= u_min && u <= u_max; });
  }
};

inline bool operator==(const Plan& a, const Plan& b) {
  return a.accels == b.accels;
}

/// Gap and speeds of one leader/follower pair. `gap` is measured from the
/// follower's front to the leader's rear, so positive means safe.
/// `clamp_excess` records how much speed the last step removed (or added)
/// to keep v_follower in bounds; 0 when the step was unconstrained.
struct PairState {
  double gap = 0.0;         // m
  double v_leader = 0.0;    // m/s
  double v_follower = 0.0;  // m/s
  double clamp_excess = 0.0;  // m/s, signed; diagnostic only
};

/// Global simulation parameters. Defaults follow the standard design point
/// used throughout: 1 Hz stepping, a 3-step control horizon and a 10-step
/// predictor history.
struct SimParams {
  double dt = 1.0;      // s
  int n_horizon = 3;    // control/prediction horizon N, steps
  int h_history = 10;   // predictor history H, steps
  double d_s = 5.0;     // standstill gap, m
  double tau_r = 1.2;   // AV desired time headway, s
  double eps = 6.0;     // acceleration offset for plan distances, m/s^2
  double u_min = -3.0;  // m/s^2
  double u_max = 3.0;   // m/s^2
  double d_min = 5.0;   // m
  double d_max = 60.0;  // m
  double v_min = 0.0;   // m/s
  double v_max = -1.0;  // m/s; <0 means "derive from the cycle's top speed"
  double t_min = 0.0;   // trust floor
  double delta = 0.1;   // trust growth rate
  double p_thre = 0.8;  // performance threshold
  double alpha = 0.0;   // explicability weight, >= 0
  // Gain that converts the dimensionless plan distance into the scale of
  // the squared-meter tracking cost, so the alpha sweep trades the two
  // terms off the way the comparison tables do. alpha stays the published
  // relative weight; this is the fixed exchange rate behind it.
  double explicability_gain = 25.0;

  static SimParams defaults() { return SimParams{}; }

  bool v_max_from_cycle() const { return v_max < 0.0; }

  void validate() const {
    detail::require(dt > 0.0, "SimParams: dt must be > 0");
    detail::require(n_horizon >= 1, "SimParams: N must be >= 1");
    detail::require(h_history >= 1, "SimParams: H must be >= 1");
    detail::require(u_min < u_max, "SimParams: u_min must be < u_max");
    detail::require(eps > std::abs(u_min),
                    "SimParams: eps must exceed |u_min| so shifted "
                    "accelerations stay positive");
    detail::require(alpha >= 0.0, "SimParams: alpha must be >= 0");
    detail::require(explicability_gain >= 0.0,
                    "SimParams: explicability_gain must be >= 0");
    detail::require(delta > 0.0, "SimParams: delta must be > 0");
    detail::require(p_thre > 0.0 && p_thre < 1.0,
                    "SimParams: p_thre must lie in (0,1)");
  }
};

/// Advance one leader/follower pair by one step:
///   gap'        = gap + (v_leader - v_follower) * dt
///   v_follower' = clamp(v_follower + u * dt, v_min, v_max)
/// The new leader speed is supplied by the caller (preview or measurement).
/// Speed clamping is silent but recorded in `clamp_excess` so that cost
/// functions can penalize infeasible candidate plans.
inline PairState step_pair(const PairState& s, double v_leader_next,
                           double u_follower, const SimParams& p) {
  detail::require(std::isfinite(s.gap) && std::isfinite(s.v_leader) &&
                      std::isfinite(s.v_follower),
                  "step_pair: non-finite state");
  detail::require(std::isfinite(u_follower), "step_pair: non-finite input");

  PairState next;
  next.gap = s.gap + (s.v_leader - s.v_follower) * p.dt;
  const double v_raw = s.v_follower + u_follower * p.dt;
  const double v_hi = p.v_max_from_cycle()
                          ? std::numeric_limits<double>::infinity()
                          : p.v_max;
  next.v_follower = std::clamp(v_raw, p.v_min, v_hi);
  next.clamp_excess = v_raw - next.v_follower;
  next.v_leader = v_leader_next;
  return next;
}

/// Roll a candidate plan forward N steps. `leader_speeds[k]` is the leader
/// speed after step k (i.e. the preview for times t+1..t+N). Returns the N
/// successor states in order.
inline std::vector<PairState> rollout(const PairState& s,
                                      const std::vector<double>& leader_speeds,
                                      const Plan& plan, const SimParams& p) {
  detail::require(leader_speeds.size() == plan.size(),
                  "rollout: leader preview and plan lengths differ");
  std::vector<PairState> states;
  states.reserve(plan.size());
  PairState cur = s;
  for (std::size_t k = 0; k < plan.size(); ++k) {
    cur = step_pair(cur, leader_speeds[k], plan[k], p);
    states.push_back(cur);
  }
  return states;
}

}  // namespace tacf
