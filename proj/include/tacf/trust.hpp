#pragma once

// Plan-explicability scoring and the human driver's trust dynamic.
//
// The explicability score E compares the plan the automated vehicle commits
// to against the plan the human expects of it. E = 0 means the plans match;
// larger E means less predictable behavior. The driver's performance
// assessment P = 1 - tanh(E) feeds a scalar trust level that grows while
// P stays above a threshold and shrinks otherwise.

#include <cmath>

#include "tacf/core.hpp"

namespace tacf {

/// Scalar trust level with its update parameters.
struct TrustState {
  double t = 0.0;        // trust level, unbounded above
  double delta = 0.1;    // growth rate per step
  double p_thre = 0.8;   // performance threshold for growth
};

/// Explicability score and the performance level derived from it.
struct ExplicabilityRecord {
  double e = 0.0;  // >= 0
  double p = 1.0;  // in (0, 1]
};

/// Plan distance between the committed and the expected plan.
///
/// Element-wise equal plans (tolerance 1e-12) score exactly 0. Otherwise the
/// accelerations are shifted by `eps` to make every entry strictly positive
/// and scored with the Jaccard distance of the shifted vectors:
///
///   E = 1 - sum(a_k b_k) / sum(a_k^2 + b_k^2 - a_k b_k)
///
/// which is 0 in the limit of identical plans and approaches 1 for maximally
/// dissimilar ones, so E lies in [0, 1).
inline double explicability(const Plan& plan_av, const Plan& plan_expected,
                            double eps) {
  detail::require(plan_av.size() == plan_expected.size(),
                  "explicability: plan lengths differ");
  detail::require(plan_av.size() > 0, "explicability: empty plans");

  bool equal = true;
  for (std::size_t k = 0; k < plan_av.size(); ++k) {
    detail::require(plan_av[k] + eps > 0.0 && plan_expected[k] + eps > 0.0,
                    "explicability: eps too small for plan entries");
    if (std::abs(plan_av[k] - plan_expected[k]) > 1e-12) equal = false;
  }
  if (equal) return 0.0;

  double dot = 0.0, denom = 0.0;
  for (std::size_t k = 0; k < plan_av.size(); ++k) {
    const double a = plan_av[k] + eps;
    const double b = plan_expected[k] + eps;
    dot += a * b;
    denom += a * a + b * b - a * b;
  }
  return 1.0 - dot / denom;
}

/// Performance level of the AV as judged by the human: P = 1 - tanh(E).
inline double performance(double e) {
  detail::require(e >= 0.0, "performance: explicability must be >= 0");
  return 1.0 - std::tanh(e);
}

inline double trust_input(double p, double p_thre) {
  detail::require(p >= 0.0 && p <= 1.0, "trust input: P outside [0,1]");
  return p >= p_thre ? p : -(1.0 - p);
}

/// One step of the trust dynamic: T' = T + delta * u_T with
/// u_T = P when P >= p_thre and -(1 - P) otherwise. No upper bound.
inline TrustState trust_step(const TrustState& s, double p) {
  TrustState next = s;
  next.t = s.t + s.delta * trust_input(p, s.p_thre);
  return next;
}

/// Trust level after holding one candidate plan's explicability for N steps;
/// used by the controller to test the trust floor over its horizon.
inline double trust_horizon(double t0, double e_plan, int n, double delta,
                            double p_thre) {
  detail::require(n >= 0, "trust_horizon: negative horizon");
  const double p = performance(e_plan);
  return t0 + static_cast<double>(n) * delta * trust_input(p, p_thre);
}

inline ExplicabilityRecord score_plans(const Plan& plan_av,
                                       const Plan& plan_expected, double eps) {
  ExplicabilityRecord r;
  r.e = explicability(plan_av, plan_expected, eps);
  r.p = performance(r.e);
  return r;
}

}  // namespace tacf
