// Copyright 2026 The fairo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "fairo/controller.hpp"
#include "oracles.hpp"

namespace fairo {
namespace {

TEST(AdjustWeights, RaiseThenRenormalize) {
  const auto w = adjust_weights(WeightVector::uniform(3, 0.0), 0, +1, 0.01);
  EXPECT_NEAR(w[0], (1.0 / 3 + 0.01) / 1.01, 1e-12);
  EXPECT_NEAR(w[1], (1.0 / 3) / 1.01, 1e-12);
  EXPECT_NEAR(w[0], 0.33993, 1e-5);
  EXPECT_NEAR(w[2], 0.33003, 1e-5);
}

TEST(AdjustWeights, HoldIsIdentity) {
  const WeightVector w({0.2, 0.3, 0.5}, 0.01);
  const auto h = adjust_weights(w, 1, 0, 0.05);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(h[i], w[i]);
}

TEST(AdjustWeights, ClampsAtFloor) {
  const auto w = adjust_weights(WeightVector({0.01, 0.495, 0.495}, 0.01), 0, -1, 0.05);
  EXPECT_NEAR(w[0], 0.01, 1e-15);
  EXPECT_NEAR(w[1], 0.495, 1e-12);
  EXPECT_NEAR(w[0] + w[1] + w[2], 1.0, 1e-12);
  const auto want = oracle::adjust({0.01, 0.495, 0.495}, 0, -1, 0.05, 0.01);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(w[i], want[i], 1e-12);
}

TEST(AdjustWeights, PinsOthersThatWouldFallBelowFloor) {
  // raw (1, 0.05, 0.05) would rescale the others to 0.04545 < 0.046
  const auto w = adjust_weights(WeightVector({0.9, 0.05, 0.05}, 0.046), 0, +1, 0.5);
  EXPECT_NEAR(w[1], 0.046, 1e-15);
  EXPECT_NEAR(w[2], 0.046, 1e-15);
  EXPECT_NEAR(w[0], 0.908, 1e-12);
}

TEST(GlobalAction, Type1) {
  EXPECT_DOUBLE_EQ(global_action_type1(std::vector<double>{1, 0, 0}, std::vector<double>{62, 77, 72}), 62);
  const double third = 1.0 / 3;
  EXPECT_NEAR(global_action_type1(std::vector<double>{third, third, third},
                                  std::vector<double>{62, 77, 72}),
              70.3333333333, 1e-9);
  EXPECT_DOUBLE_EQ(global_action_type1(std::vector<double>{0.5, 0.25, 0.25},
                                       std::vector<double>{60, 70, 80}),
                   67.5);
}

TEST(GlobalAction, Type2) {
  auto s = global_allocation_type2(std::vector<double>{0.5, 0.3, 0.2}, 100);
  EXPECT_NEAR(s[0], 50, 1e-12);
  EXPECT_NEAR(s[1], 30, 1e-12);
  EXPECT_NEAR(s[2], 20, 1e-12);
  for (double x : global_allocation_type2(std::vector<double>{0.5, 0.3, 0.2}, 0)) EXPECT_EQ(x, 0);
  const double third = 1.0 / 3;
  for (double x : global_allocation_type2(std::vector<double>{third, third, third}, 30)) {
    EXPECT_NEAR(x, 10, 1e-12);
  }
  EXPECT_THROW(global_allocation_type2(std::vector<double>{1.0}, -1), Error);
}

TEST(GlobalAction, Type3) {
  const double third = 1.0 / 3;
  const std::vector<int> d{0, 1, 2};  // rest, vr_on, vr_off
  EXPECT_EQ(global_action_type3<int>(std::vector<double>{third, third, third},
                                     std::vector<double>{0.1, 0.9, 0.2}, d),
            1);
  EXPECT_EQ(global_action_type3<int>(std::vector<double>{0.8, 0.1, 0.1},
                                     std::vector<double>{0.5, 0.9, 0.9}, d),
            0);
  EXPECT_EQ(global_action_type3<int>(std::vector<double>{third, third, third},
                                     std::vector<double>{0.4, 0.4, 0.4}, d),
            0);
}

TEST(OptionReward, Examples) {
  EXPECT_DOUBLE_EQ(option_reward(0.5, 1, 1), 1);
  EXPECT_DOUBLE_EQ(option_reward(0.5, 1, -1), 0);
  EXPECT_NEAR(option_reward(0.3, 0.5, -0.5), -0.2, 1e-15);
  EXPECT_THROW(option_reward(0.5, 1.5, 0), Error);
  EXPECT_THROW(option_reward(1.5, 0, 0), Error);
}

Observation hvac_obs() {
  Observation o;
  o.desired = {62, 77, 72};
  return o;
}

TEST(Baseline, HvacAverageAndRotation) {
  EXPECT_NEAR(baseline_step(Method::average, AppType::hvac, 0, hvac_obs()).action.setpoint,
              70.3333333333, 1e-9);
  const double want[] = {62, 77, 72, 62};
  for (std::size_t t = 0; t < 4; ++t) {
    EXPECT_EQ(baseline_step(Method::round_robin, AppType::hvac, t, hvac_obs()).action.setpoint,
              want[t]);
  }
}

TEST(Baseline, WaterVariants) {
  Observation o;
  o.desired = {10, 20, 30};
  o.resource = 45;
  auto s = baseline_step(Method::round_robin, AppType::water, 0, o).action.allocation;
  EXPECT_DOUBLE_EQ(s[0], 10);
  EXPECT_DOUBLE_EQ(s[1], 17.5);
  EXPECT_DOUBLE_EQ(s[2], 17.5);
  s = baseline_step(Method::weighted_rr, AppType::water, 0, o).action.allocation;
  EXPECT_DOUBLE_EQ(s[1], 35.0 * 20 / 50);
  EXPECT_DOUBLE_EQ(s[2], 35.0 * 30 / 50);
  s = baseline_step(Method::weighted_average, AppType::water, 0, o).action.allocation;
  EXPECT_NEAR(s[0], 7.5, 1e-12);
  EXPECT_NEAR(s[2], 22.5, 1e-12);
  s = baseline_step(Method::average, AppType::water, 0, o).action.allocation;
  for (double x : s) EXPECT_NEAR(x, 15, 1e-12);
}

TEST(Baseline, LearningAverageIsMedianEffect) {
  Observation o;
  o.desired_category = {0, 1, 2};
  o.effects = {0.3, -0.1, 0.1};
  const auto d = baseline_step(Method::average, AppType::learning, 0, o);
  EXPECT_EQ(d.action.chosen, 2);
  EXPECT_EQ(d.action.category, 2);
}

TEST(Baseline, WeightedVariantsOnlyForWater) {
  EXPECT_THROW(baseline_step(Method::weighted_rr, AppType::hvac, 0, hvac_obs()), Error);
  EXPECT_THROW(make_policy(Method::weighted_average, AppType::learning, 3, {}, 1), Error);
}

TEST(FairoAgent, WarmupFollowsRoundRobin) {
  ControllerConfig cfg;
  FairoAgent agent(AppType::hvac, 3, cfg, 7);
  const auto ledger = init_ledger(3, 0.01);
  const auto d = agent.decide(5, ledger, hvac_obs());
  EXPECT_TRUE(d.warmup);
  EXPECT_EQ(d.action.setpoint,
            baseline_step(Method::round_robin, AppType::hvac, 5, hvac_obs()).action.setpoint);
  agent.learn(ledger, std::vector<double>{0, 0, 0});
  EXPECT_EQ(agent.updates(), 0u);
}

TEST(FairoAgent, DispatchStepsOnlyTheActiveWeight) {
  ControllerConfig cfg;
  cfg.warmup = 0;
  cfg.w_floor = 0.0;
  FairoAgent agent(AppType::hvac, 3, cfg, 7);
  // records chosen so that closeness is lowest for human 1
  const SatisfactionLedger ledger({{0.6, 0.8}, {0.95, 0.31}, {0.55, 0.83}}, 0.01);
  ASSERT_EQ(active_option(fairness_state(ledger)), 1u);
  const auto d = agent.decide(0, ledger, hvac_obs());
  EXPECT_EQ(d.active_option, 1);
  ASSERT_TRUE(d.dqn_action.has_value());
  const double third = 1.0 / 3;
  const int dir = direction_of(*d.dqn_action);
  const double raw1 = third + dir * cfg.delta_w;
  const double total = 2 * third + raw1;
  EXPECT_NEAR(d.weights[1], raw1 / total, 1e-12);
  EXPECT_NEAR(d.weights[0], third / total, 1e-12);
  EXPECT_NEAR(d.weights[0], d.weights[2], 1e-15);
  agent.learn(update_ledger(ledger, {true, true, true}), std::vector<double>{0.5, 0.5, 0.5});
  EXPECT_EQ(agent.updates(), 1u);
}

std::vector<std::string> scripted_run(std::uint64_t seed, Method method) {
  ControllerConfig cfg;
  cfg.warmup = 5;
  auto policy = make_policy(method, AppType::hvac, 3, cfg, seed);
  auto ledger = init_ledger(3, 0.01);
  Rng env(99);
  std::vector<std::string> out;
  for (std::size_t t = 0; t < 20; ++t) {
    Observation o;
    o.desired = {60 + 20 * env.uniform(), 60 + 20 * env.uniform(), 60 + 20 * env.uniform()};
    const auto d = policy->decide(t, ledger, o);
    std::vector<bool> sat(3);
    for (std::size_t i = 0; i < 3; ++i) sat[i] = std::abs(o.desired[i] - d.action.setpoint) <= 2.5;
    ledger = update_ledger(ledger, sat);
    policy->learn(ledger, std::vector<double>{0.1, -0.2, 0.3});
    std::string row = fmt(d.action.setpoint) + "|" + std::to_string(d.active_option);
    for (double w : d.weights) row += "|" + fmt(w);
    out.push_back(row);
  }
  return out;
}

TEST(FairoAgent, TwentyTickRunIsReproducible) {
  EXPECT_EQ(scripted_run(7, Method::fairo), scripted_run(7, Method::fairo));
  EXPECT_NE(scripted_run(7, Method::fairo), scripted_run(8, Method::fairo));
  EXPECT_EQ(scripted_run(7, Method::mono_dqn_4in), scripted_run(7, Method::mono_dqn_4in));
}

TEST(MonoDqn, TargetsArgminHuman) {
  ControllerConfig cfg;
  cfg.warmup = 0;
  MonoDqnAgent agent(AppType::hvac, 3, true, cfg, 3);
  const SatisfactionLedger ledger({{0.6, 0.8}, {0.95, 0.31}, {0.55, 0.83}}, 0.01);
  const auto d = agent.decide(0, ledger, hvac_obs());
  EXPECT_EQ(d.active_option, 1);
  if (direction_of(*d.dqn_action) != 0) {
    EXPECT_NE(d.weights[1], 1.0 / 3);
  }
  EXPECT_NEAR(d.weights[0], d.weights[2], 1e-15);
}

TEST(Policy, RoundRobinChoosesEachHumanEqually) {
  for (std::size_t n = 2; n <= 6; ++n) {
    Observation o;
    o.desired.assign(n, 70.0);
    std::vector<int> count(n, 0);
    for (std::size_t t = 0; t < 10 * n; ++t) {
      ++count[static_cast<std::size_t>(baseline_step(Method::round_robin, AppType::hvac, t, o).action.chosen)];
    }
    for (int c : count) EXPECT_EQ(c, 10);
  }
}

}  // namespace
}  // namespace fairo
