#include "tacf/core.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace tacf;

TEST_CASE("step_pair advances gap with current speeds and clamps the "
          "follower speed") {
  SimParams p = SimParams::defaults();

  PairState s{20.0, 15.0, 10.0, 0.0};
  PairState n = step_pair(s, 15.0, 1.0, p);
  CHECK(n.gap == Catch::Approx(25.0));
  CHECK(n.v_follower == Catch::Approx(11.0));
  CHECK(n.v_leader == Catch::Approx(15.0));
  CHECK(n.clamp_excess == 0.0);

  // symmetric speeds hold the gap
  PairState eq{10.0, 10.0, 10.0, 0.0};
  PairState eq2 = step_pair(eq, 10.0, 0.0, p);
  CHECK(eq2.gap == Catch::Approx(10.0));
  CHECK(eq2.v_follower == Catch::Approx(10.0));

  // lower speed clamp
  PairState slow{10.0, 10.0, 0.5, 0.0};
  PairState stopped = step_pair(slow, 10.0, -1.0, p);
  CHECK(stopped.v_follower == 0.0);
  CHECK(stopped.clamp_excess == Catch::Approx(-0.5));
}

TEST_CASE("step_pair honors an explicit speed ceiling") {
  SimParams p = SimParams::defaults();
  p.v_max = 12.0;
  PairState s{20.0, 12.0, 11.5, 0.0};
  PairState n = step_pair(s, 12.0, 2.0, p);
  CHECK(n.v_follower == 12.0);
  CHECK(n.clamp_excess == Catch::Approx(1.5));
}

TEST_CASE("step_pair rejects non-finite inputs") {
  SimParams p = SimParams::defaults();
  PairState s{10.0, 10.0, 10.0, 0.0};
  CHECK_THROWS_AS(step_pair(s, 10.0, std::nan(""), p), ContractViolation);
  s.gap = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(step_pair(s, 10.0, 0.0, p), ContractViolation);
}

TEST_CASE("rollout at an equilibrium is a fixed point") {
  SimParams p = SimParams::defaults();
  PairState s{17.0, 10.0, 10.0, 0.0};
  auto states = rollout(s, {10.0, 10.0, 10.0}, Plan::zeros(3), p);
  REQUIRE(states.size() == 3);
  for (const PairState& st : states) {
    CHECK(st.gap == Catch::Approx(17.0));
    CHECK(st.v_follower == Catch::Approx(10.0));
  }
}

TEST_CASE("rollout matches a hand iteration of the difference equations") {
  SimParams p = SimParams::defaults();
  PairState s{17.0, 10.0, 10.0, 0.0};
  Plan plan({1.0, 0.0, 0.0});
  std::vector<double> leader{10.0, 10.0, 10.0};
  auto states = rollout(s, leader, plan, p);

  // independent re-derivation: gap' = gap + (v_l - v_f) dt, then v_f += u dt
  double gap = 17.0, vf = 10.0;
  std::vector<double> expect_gap, expect_v;
  for (std::size_t k = 0; k < 3; ++k) {
    gap += (10.0 - vf) * p.dt;
    vf += plan[k] * p.dt;
    expect_gap.push_back(gap);
    expect_v.push_back(vf);
  }
  REQUIRE(states.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(states[k].gap == Catch::Approx(expect_gap[k]));
    CHECK(states[k].v_follower == Catch::Approx(expect_v[k]));
  }
  // frozen values: the speed change from u^0 reaches the gap one step later
  CHECK(states[0].gap == Catch::Approx(17.0));
  CHECK(states[1].gap == Catch::Approx(16.0));
  CHECK(states[2].gap == Catch::Approx(15.0));
}

TEST_CASE("rollout with N = 1 equals a single step_pair") {
  SimParams p = SimParams::defaults();
  PairState s{12.0, 8.0, 9.0, 0.0};
  auto states = rollout(s, {7.5}, Plan({-0.5}), p);
  PairState single = step_pair(s, 7.5, -0.5, p);
  REQUIRE(states.size() == 1);
  CHECK(states[0].gap == single.gap);
  CHECK(states[0].v_follower == single.v_follower);
  CHECK(states[0].v_leader == single.v_leader);
}

TEST_CASE("rollout rejects mismatched preview and plan lengths") {
  SimParams p = SimParams::defaults();
  PairState s{10.0, 10.0, 10.0, 0.0};
  CHECK_THROWS_AS(rollout(s, {10.0, 10.0}, Plan::zeros(3), p),
                  ContractViolation);
}

TEST_CASE("gap telescopes exactly against the speed history") {
  SimParams p = SimParams::defaults();
  std::mt19937_64 rng(91);
  std::uniform_real_distribution<double> u_dist(p.u_min, p.u_max);
  std::uniform_real_distribution<double> v_dist(0.0, 30.0);

  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 12);
    PairState s{v_dist(rng) + 5.0, v_dist(rng), v_dist(rng), 0.0};
    Plan plan = Plan::zeros(static_cast<std::size_t>(n));
    std::vector<double> leader(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      plan[static_cast<std::size_t>(k)] = u_dist(rng);
      leader[static_cast<std::size_t>(k)] = v_dist(rng);
    }
    auto states = rollout(s, leader, plan, p);

    double sum = (s.v_leader - s.v_follower) * p.dt;
    for (std::size_t k = 0; k + 1 < states.size(); ++k)
      sum += (states[k].v_leader - states[k].v_follower) * p.dt;
    CHECK(states.back().gap - s.gap == Catch::Approx(sum).margin(1e-12));
  }
}

TEST_CASE("holding u_min from standstill keeps the speed pinned at v_min") {
  SimParams p = SimParams::defaults();
  PairState s{30.0, 5.0, p.v_min, 0.0};
  auto states = rollout(s, std::vector<double>(6, 5.0),
                        Plan::constant(p.u_min, 6), p);
  for (const PairState& st : states) CHECK(st.v_follower == p.v_min);
}

TEST_CASE("rollout is deterministic") {
  SimParams p = SimParams::defaults();
  PairState s{14.2, 11.7, 9.3, 0.0};
  Plan plan({0.7, -1.1, 2.9});
  std::vector<double> leader{11.0, 10.5, 12.0};
  auto a = rollout(s, leader, plan, p);
  auto b = rollout(s, leader, plan, p);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k].gap == b[k].gap);
    CHECK(a[k].v_follower == b[k].v_follower);
  }
}

TEST_CASE("SimParams validation rejects inconsistent settings") {
  SimParams p = SimParams::defaults();
  CHECK_NOTHROW(p.validate());
  p.eps = 2.0;  // |u_min| = 3
  CHECK_THROWS_AS(p.validate(), ContractViolation);
  p = SimParams::defaults();
  p.dt = 0.0;
  CHECK_THROWS_AS(p.validate(), ContractViolation);
  p = SimParams::defaults();
  p.n_horizon = 0;
  CHECK_THROWS_AS(p.validate(), ContractViolation);
  p = SimParams::defaults();
  p.p_thre = 1.0;
  CHECK_THROWS_AS(p.validate(), ContractViolation);
}
