// Copyright 2026 The lambdaenv Authors.
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


#include "lambdaenv/env.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "gtest/gtest.h"

namespace lambdaenv {
namespace {

// 3-cell line: action 0 moves right, action 1 moves left; the ends are void.
Space line3() { return Space(3, 2, {1, kVoid, 2, 0, kVoid, 1}); }

EnvState manual_state(const Space& space, PatternSequence pattern, Cell good, Cell evil,
                      std::vector<Cell> agents, EnvOptions options = {}) {
  EnvState s;
  s.space = space;
  s.pattern = std::move(pattern);
  s.good_pos = good;
  s.evil_pos = evil;
  s.agent_pos = std::move(agents);
  s.reward_field.assign(static_cast<std::size_t>(space.n_cells()), 0.0);
  s.last_collected.assign(s.agent_pos.size(), 0.0);
  s.options = options;
  return s;
}

TEST(InitEnv, TwoCellsSplitGoodAndEvil) {
  Space s(2, 2, {1, kVoid, 0, kVoid});
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const EnvState st = init_env(s, PatternSequence{{0}}, 1, rng);
    EXPECT_NE(st.good_pos, st.evil_pos);
    EXPECT_EQ(st.good_pos + st.evil_pos, 1);
    EXPECT_EQ(st.iteration, 0);
    EXPECT_EQ(st.pattern_cursor, 0u);
  }
}

TEST(InitEnv, Deterministic) {
  const Environment env = make_environment(GenConfig{}, 5);
  Rng a(17), b(17);
  EXPECT_EQ(init_env(env.space, env.pattern, 3, a), init_env(env.space, env.pattern, 3, b));
}

TEST(InitEnv, GoodPlacementIsUniform) {
  const Environment env = make_environment(GenConfig{}, 5);
  Rng rng(2);
  std::vector<int> good(9, 0), evil(9, 0);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const EnvState st = init_env(env.space, env.pattern, 1, rng);
    ASSERT_NE(st.good_pos, st.evil_pos);
    ++good[st.good_pos];
    ++evil[st.evil_pos];
    for (double r : st.reward_field) ASSERT_EQ(r, 0.0);
  }
  for (int c = 0; c < 9; ++c) {
    EXPECT_NEAR(good[c] / double(draws), 1.0 / 9, 0.01) << c;
    EXPECT_NEAR(evil[c] / double(draws), 1.0 / 9, 0.01) << c;
  }
}

TEST(InitEnv, Errors) {
  Rng rng(0);
  EXPECT_THROW(init_env(Space(1, 2), PatternSequence{{0}}, 1, rng), std::invalid_argument);
  EXPECT_THROW(init_env(line3(), PatternSequence{{0}}, 0, rng), std::invalid_argument);
}

// 4-cell line: action 0 moves right, action 1 moves left; the ends are void.
Space line4() { return Space(4, 2, {1, kVoid, 2, 0, 3, 1, kVoid, 2}); }

TEST(Step, VacatedRuleDropsBehindTheMover) {
  // Good 0 -> 1 with nothing in the way: the old cell keeps +1, halved.
  EnvState s = manual_state(line4(), {{0}}, 0, 3, {3}, {DropRule::kVacated});
  Rng rng(0);
  const std::vector<Action> a{0};  // void at cell 3: the agent stays
  step(s, a, rng);
  EXPECT_EQ(s.good_pos, 1);
  EXPECT_DOUBLE_EQ(s.reward_field[0], 0.5);
  EXPECT_DOUBLE_EQ(s.reward_field[1], 0.0);
}

TEST(Step, ArrivalRuleDropsUnderTheMover) {
  EnvState u = manual_state(line4(), {{0}}, 0, 3, {3});
  Rng rng(0);
  const std::vector<Action> a{0};
  step(u, a, rng);
  EXPECT_EQ(u.good_pos, 1);
  EXPECT_DOUBLE_EQ(u.reward_field[0], 0.0);
  EXPECT_DOUBLE_EQ(u.reward_field[1], 0.5);
  // Evil is stuck on the void edge at cell 3, which the agent shares.
  EXPECT_DOUBLE_EQ(u.last_collected[0], -1.0);
}

TEST(Step, SingleAgentCollectsWholeCell) {
  // Pattern action 1 is void for Good at 0; Evil at 1 is blocked by Good.
  EnvState s = manual_state(line4(), {{1}}, 0, 1, {2});
  s.reward_field[3] = 0.5;
  Rng rng(0);
  const std::vector<Action> right{0};
  const auto out = step(s, right, rng);
  EXPECT_EQ(s.good_pos, 0);
  EXPECT_EQ(s.evil_pos, 1);
  EXPECT_DOUBLE_EQ(out.collected[0], 0.5);
  EXPECT_DOUBLE_EQ(s.reward_field[3], 0.0);
}

TEST(Step, TwoAgentsSplitCell) {
  EnvState s = manual_state(line4(), {{1}}, 0, 1, {2, 3});
  s.reward_field[3] = 0.5;
  Rng rng(0);
  const std::vector<Action> acts{0, 0};  // 2 -> 3, 3 -> void (stay)
  const auto out = step(s, acts, rng);
  EXPECT_DOUBLE_EQ(out.collected[0], 0.25);
  EXPECT_DOUBLE_EQ(out.collected[1], 0.25);
  EXPECT_DOUBLE_EQ(s.reward_field[3], 0.0);
}

TEST(Step, UncollectedRewardHalvesEachIteration) {
  EnvState s = manual_state(line4(), {{1}}, 0, 1, {2});
  s.reward_field[3] = 0.8;
  Rng rng(0);
  const std::vector<Action> left{1};
  step(s, left, rng);  // agent 2 -> 1
  step(s, left, rng);  // agent 1 -> 0
  EXPECT_DOUBLE_EQ(s.reward_field[3], 0.2);
}

TEST(Step, GoldenLineTrace) {
  // Pencil-and-paper trace of five iterations under the default drop rule.
  EnvState s = manual_state(line3(), {{0, 0, 1, 1}}, 0, 2, {1});
  Rng rng(0);
  const std::vector<Action> script{1, 0, 0, 1, 0};
  const std::vector<std::string> expected{
      "1 G=0 E=2 A=[0] R={2:-0.500000} C=[1.000000]",
      "2 G=1 E=2 A=[1] R={2:-0.500000} C=[1.000000]",
      "3 G=0 E=2 A=[2] R={0:0.500000} C=[-1.000000]",
      "4 G=0 E=1 A=[1] R={0:0.500000} C=[-1.000000]",
      "5 G=0 E=2 A=[2] R={0:0.500000} C=[-1.000000]",
  };
  for (std::size_t t = 0; t < script.size(); ++t) {
    const std::vector<Action> a{script[t]};
    const auto out = step(s, a, rng);
    EXPECT_EQ(format_trace(s, out.collected), expected[t]);
  }
}

TEST(Step, ConflictCoinIsFair) {
  // Every action leads to cell 1; Good at 0 and Evil at 2 both want it. The
  // agent starts on Good's cell, so cell 1 is free when Good/Evil resolve.
  const Space funnel(3, 1, {1, 1, 1});
  int good_won = 0;
  Rng rng(9);
  const int trials = 20000;
  const std::vector<Action> a{0};
  for (int i = 0; i < trials; ++i) {
    EnvState s = manual_state(funnel, {{0}}, 0, 2, {0});
    step(s, a, rng);
    ASSERT_NE(s.good_pos, s.evil_pos);
    ASSERT_TRUE(s.good_pos == 1 || s.evil_pos == 1);
    good_won += s.good_pos == 1;
  }
  EXPECT_NEAR(good_won / double(trials), 0.5, 0.02);
}

TEST(Step, ActionErrors) {
  EnvState s = manual_state(line3(), {{0}}, 0, 2, {1});
  Rng rng(0);
  const std::vector<Action> bad{2};
  EXPECT_THROW(step(s, bad, rng), std::out_of_range);
  const std::vector<Action> neg{-1};
  EXPECT_THROW(step(s, neg, rng), std::out_of_range);
  const std::vector<Action> two{0, 0};
  EXPECT_THROW(step(s, two, rng), std::invalid_argument);
}

TEST(Observe, Examples) {
  EnvState s = manual_state(Space(2, 2, {1, kVoid, 0, kVoid}), {{0}}, 0, 1, {1, 1});
  const Observation o = observe(s, 1);
  EXPECT_EQ(o.good_cell(), 0);
  EXPECT_EQ(o.evil_cell(), 1);
  EXPECT_EQ(o.self_cell, 1);
  const std::vector<Marker> cell1{Marker::evil(), Marker::of_agent(0), Marker::of_agent(1)};
  EXPECT_EQ(o.occupants[1], cell1);
  EXPECT_EQ(o.available_actions, (std::vector<Action>{0, 1}));
  EXPECT_TRUE(o.rewards.empty());
  EXPECT_THROW(observe(s, 2), std::out_of_range);
  s.options.observe_rewards = true;
  EXPECT_EQ(observe(s, 0).rewards.size(), 2u);
}

TEST(PeekNext, VoidPatternKeepsGood) {
  EnvState s = manual_state(line3(), {{1}}, 0, 2, {2});
  EXPECT_EQ(peek_next(s).predicted_good_cell, 0);
}

TEST(PeekNext, UntouchedCellDecays) {
  EnvState s = manual_state(line4(), {{1}}, 0, 1, {3});
  s.reward_field[2] = 0.6;
  const EnvState before = s;
  EXPECT_DOUBLE_EQ(peek_next(s).predicted_reward_field[2], 0.3);
  EXPECT_EQ(s, before);
}

TEST(PeekNext, MatchesSteppingAClone) {
  // Oracle: step copies of the state with the agent parked in a sink cell no
  // one else can reach. Some coin stream lets Good win any conflict; that
  // outcome must equal the lookahead.
  const Space sink(4, 2, {1, 2, 2, 0, 0, 1, kVoid, kVoid});
  for (DropRule rule : {DropRule::kArrival, DropRule::kVacated}) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      Rng rng(seed);
      const Action first = rng.below(2);
      EnvState s = manual_state(sink, {{first, 0, 1}}, 0, 1, {3}, {rule});
      s.good_pos = rng.below(3);
      s.evil_pos = (s.good_pos + 1 + rng.below(2)) % 3;
      for (double& r : s.reward_field) r = rng.uniform01() * 2 - 1;
      s.reward_field[3] = 0.0;
      const Lookahead look = peek_next(s);
      bool matched = false;
      const std::vector<Action> stay{0};
      for (std::uint64_t coin_seed = 0; coin_seed < 64 && !matched; ++coin_seed) {
        EnvState clone = s;
        Rng coin(coin_seed);
        step(clone, stay, coin);
        matched = clone.good_pos == look.predicted_good_cell &&
                  clone.reward_field == look.predicted_reward_field;
      }
      EXPECT_TRUE(matched) << "seed " << seed;
    }
  }
}

TEST(Properties, ConservationAtConsumption) {
  // Under the arrival rule the pre-consumption field is the previous field
  // with +1 / -1 written at Good's and Evil's new cells.
  const Environment env = make_environment(GenConfig{}, 11);
  Rng rng(1), dyn(2);
  EnvState s = init_env(env.space, env.pattern, 6, rng);
  std::vector<Action> acts(6);
  for (int t = 0; t < 20000; ++t) {
    for (Action& a : acts) a = rng.below(env.space.n_actions());
    const std::vector<double> before = s.reward_field;
    const auto out = step(s, acts, dyn, false);
    std::vector<double> pre = before;
    pre[s.good_pos] = 1.0;
    pre[s.evil_pos] = -1.0;
    std::vector<double> eaten(9, 0.0);
    std::vector<bool> visited(9, false);
    for (std::size_t j = 0; j < 6; ++j) {
      eaten[s.agent_pos[j]] += out.collected[j];
      visited[s.agent_pos[j]] = true;
      ASSERT_LE(std::abs(out.collected[j]), 1.0);
    }
    for (std::size_t c = 0; c < 9; ++c) {
      if (!visited[c]) continue;
      ASSERT_NEAR(eaten[c], pre[c], 1e-12) << "t=" << t << " cell " << c;
      ASSERT_EQ(s.reward_field[c], 0.0);
    }
  }
}

TEST(Properties, GoodAndEvilNeverShareACell) {
  const Environment env = make_environment(GenConfig{}, 12);
  Rng rng(3), dyn(4);
  EnvState s = init_env(env.space, env.pattern, 2, rng);
  std::vector<Action> acts(2);
  for (int t = 0; t < 1000000; ++t) {
    for (Action& a : acts) a = rng.below(env.space.n_actions());
    step(s, acts, dyn, false);
    ASSERT_NE(s.good_pos, s.evil_pos) << t;
  }
}

TEST(Properties, SignSymmetry) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Environment env = make_environment(GenConfig{}, seed);
    Rng place(seed);
    EnvState a = init_env(env.space, env.pattern, 3, place);
    EnvState b = a;
    std::swap(b.good_pos, b.evil_pos);
    Rng agents_a(100 + seed), agents_b(100 + seed), dyn_a(7), dyn_b(7);
    for (int t = 0; t < 5000; ++t) {
      std::vector<Action> acts(3), acts_b(3);
      for (std::size_t j = 0; j < 3; ++j) {
        acts[j] = agents_a.below(env.space.n_actions());
        acts_b[j] = agents_b.below(env.space.n_actions());
      }
      const auto oa = step(a, acts, dyn_a, false);
      const auto ob = step(b, acts_b, dyn_b, false);
      ASSERT_EQ(a.good_pos, b.evil_pos);
      ASSERT_EQ(a.evil_pos, b.good_pos);
      for (std::size_t c = 0; c < a.reward_field.size(); ++c)
        ASSERT_EQ(a.reward_field[c], -b.reward_field[c]);
      for (std::size_t j = 0; j < 3; ++j) ASSERT_EQ(oa.collected[j], -ob.collected[j]);
    }
  }
}

TEST(Properties, RewardsBoundedAndDecaying) {
  const Environment env = make_environment(GenConfig{}, 13);
  Rng rng(5), dyn(6);
  EnvState s = init_env(env.space, env.pattern, 1, rng);
  for (int t = 0; t < 50000; ++t) {
    const std::vector<Action> a{static_cast<Action>(rng.below(env.space.n_actions()))};
    const std::vector<double> before = s.reward_field;
    const Cell g = s.good_pos, e = s.evil_pos;
    step(s, a, dyn, false);
    for (std::size_t c = 0; c < s.reward_field.size(); ++c) {
      ASSERT_LE(std::abs(s.reward_field[c]), 0.5);
      const bool touched = static_cast<Cell>(c) == g || static_cast<Cell>(c) == e ||
                           static_cast<Cell>(c) == s.good_pos ||
                           static_cast<Cell>(c) == s.evil_pos;
      if (!touched && before[c] != 0.0)
        ASSERT_LT(std::abs(s.reward_field[c]), std::abs(before[c]));
    }
  }
}

TEST(Properties, Determinism) {
  const Environment env = make_environment(GenConfig{}, 14);
  auto run = [&] {
    Rng rng(8), dyn(9);
    EnvState s = init_env(env.space, env.pattern, 4, rng);
    std::vector<std::string> lines;
    for (int t = 0; t < 2000; ++t) {
      std::vector<Action> acts(4);
      for (Action& a : acts) a = rng.below(env.space.n_actions());
      const auto out = step(s, acts, dyn, false);
      lines.push_back(format_trace(s, out.collected));
    }
    return lines;
  };
  EXPECT_EQ(run(), run());
}

}  // namespace
}  // namespace lambdaenv
