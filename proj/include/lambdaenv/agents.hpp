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

// Agent policies: three scripted agents (Oracle, Trivial Follower, Random),
// three tabular learners (Q-learning, SARSA, QV-learning) and two stand-ins
// driven from outside (replay of a fixed action script, external/human).

#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lambdaenv/env.hpp"
#include "lambdaenv/random.hpp"
#include "lambdaenv/space.hpp"

namespace lambdaenv {

using StateKey = std::string;

// Canonical state string: "<self_cell>|" followed by each cell's sorted
// markers joined by ',' with cells separated by '/'. With reward
// observation enabled, "|" and one sign character per cell are appended.
inline StateKey encode_state(const Observation& obs) {
  StateKey key;
  key.reserve(48);
  key += std::to_string(obs.self_cell);
  key += '|';
  std::vector<Marker> sorted;
  for (std::size_t c = 0; c < obs.occupants.size(); ++c) {
    if (c) key += '/';
    const std::vector<Marker>* markers = &obs.occupants[c];
    if (!std::is_sorted(markers->begin(), markers->end())) {
      sorted = *markers;
      std::sort(sorted.begin(), sorted.end());
      markers = &sorted;
    }
    for (std::size_t i = 0; i < markers->size(); ++i) {
      if (i) key += ',';
      const Marker& m = (*markers)[i];
      if (m.kind == Marker::Kind::kAgent) {
        key += 'A';
        key += std::to_string(m.agent);
      } else {
        key += m.kind == Marker::Kind::kGood ? 'G' : 'E';
      }
    }
  }
  if (!obs.rewards.empty()) {
    key += '|';
    for (double r : obs.rewards) key += r > 0 ? '+' : (r < 0 ? '-' : '0');
  }
  return key;
}

struct RLParams {
  double alpha = 0.1;
  double gamma = 0.9;
  double beta = 0.1;  // QV only
  double epsilon = 0.1;

  void validate() const {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("RLParams: alpha must be in (0, 1]");
    if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("RLParams: gamma must be in [0, 1)");
    if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("RLParams: beta must be in [0, 1]");
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw std::invalid_argument("RLParams: epsilon must be in [0, 1]");
  }

  bool operator==(const RLParams&) const = default;
};

// Tabular value functions. Absent entries read as 0.
class ValueTables {
 public:
  explicit ValueTables(int n_actions = 1) : n_actions_(n_actions) {}

  int n_actions() const { return n_actions_; }

  double q(const StateKey& s, Action a) const {
    auto it = q_.find(s);
    return it == q_.end() ? 0.0 : it->second[static_cast<std::size_t>(a)];
  }
  double& q_ref(const StateKey& s, Action a) {
    auto it = q_.find(s);
    if (it == q_.end())
      it = q_.emplace(s, std::vector<double>(static_cast<std::size_t>(n_actions_), 0.0)).first;
    return it->second[static_cast<std::size_t>(a)];
  }
  // Row of q values for s, or nullptr when s has never been updated.
  const std::vector<double>* q_row(const StateKey& s) const {
    auto it = q_.find(s);
    return it == q_.end() ? nullptr : &it->second;
  }
  double max_q(const StateKey& s) const {
    const auto* row = q_row(s);
    return row ? *std::max_element(row->begin(), row->end()) : 0.0;
  }

  double v(const StateKey& s) const {
    auto it = v_.find(s);
    return it == v_.end() ? 0.0 : it->second;
  }
  double& v_ref(const StateKey& s) { return v_[s]; }

  std::size_t q_states() const { return q_.size(); }
  std::size_t v_states() const { return v_.size(); }

  void clear() {
    q_.clear();
    v_.clear();
  }

  template <typename Fn>
  void for_each_q(Fn&& fn) const {
    for (const auto& [key, row] : q_)
      for (std::size_t a = 0; a < row.size(); ++a) fn(key, static_cast<Action>(a), row[a]);
  }
  template <typename Fn>
  void for_each_v(Fn&& fn) const {
    for (const auto& [key, value] : v_) fn(key, value);
  }

 private:
  int n_actions_;
  std::unordered_map<StateKey, std::vector<double>> q_;
  std::unordered_map<StateKey, double> v_;
};

// Sorted "key<TAB>action<TAB>value" lines; V entries use "V" as the action.
inline std::string dump_tables(const ValueTables& tables) {
  std::vector<std::string> lines;
  char buf[64];
  tables.for_each_q([&](const StateKey& k, Action a, double value) {
    std::snprintf(buf, sizeof buf, "\t%d\t%.17g", a, value);
    lines.push_back(k + buf);
  });
  tables.for_each_v([&](const StateKey& k, double value) {
    std::snprintf(buf, sizeof buf, "\tV\t%.17g", value);
    lines.push_back(k + buf);
  });
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + '\n';
  return out;
}

// ---------------------------------------------------------------------------
// Action selection.

namespace detail {

// Uniform choice among the indices i with scores[i] >= max(scores) - tol.
inline Action argmax_uniform(std::span<const double> scores, Rng& rng, double tol = 0.0) {
  const double best = *std::max_element(scores.begin(), scores.end());
  int ties = 0;
  for (double s : scores) ties += (s >= best - tol);
  int pick = rng.below(ties);
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (scores[i] >= best - tol && pick-- == 0) return static_cast<Action>(i);
  return 0;
}

inline Action uniform_among(const std::vector<Action>& actions, Rng& rng) {
  return actions[static_cast<std::size_t>(rng.below(static_cast<int>(actions.size())))];
}

}  // namespace detail

inline Action act_random(const Observation& obs, Rng& rng) {
  return detail::uniform_among(obs.available_actions, rng);
}

// Moves into Good's cell when some action leads there; otherwise a random
// action whose destination is not Evil's cell; otherwise any action.
inline Action act_trivial_follower(const Observation& obs, const Space& space, Rng& rng) {
  const Cell good = obs.good_cell();
  const Cell evil = obs.evil_cell();
  std::vector<Action> to_good, avoid_evil;
  for (Action a : obs.available_actions) {
    if (space.destination(obs.self_cell, a) == good) to_good.push_back(a);
    if (space.destination(obs.self_cell, a) != evil) avoid_evil.push_back(a);
  }
  if (!to_good.empty()) return detail::uniform_among(to_good, rng);
  if (!avoid_evil.empty()) return detail::uniform_among(avoid_evil, rng);
  return act_random(obs, rng);
}

// Rewards are +-2^-k; predicted values closer than this count as equal, so
// residue from long-decayed drops does not pin the Oracle in place.
inline constexpr double kOracleTieTolerance = 1e-6;

// Goes where Good will be next when reachable in one action (a void action
// reaches the agent's own cell); otherwise maximizes the predicted reward of
// the destination.
inline Action act_oracle(const Observation& obs, const Space& space,
                         const Lookahead& lookahead, Rng& rng) {
  std::vector<Action> to_good;
  std::vector<double> score;
  score.reserve(obs.available_actions.size());
  for (Action a : obs.available_actions) {
    const Cell d = space.destination(obs.self_cell, a);
    if (d == lookahead.predicted_good_cell) to_good.push_back(a);
    score.push_back(lookahead.predicted_reward_field[static_cast<std::size_t>(d)]);
  }
  if (!to_good.empty()) return detail::uniform_among(to_good, rng);
  return obs.available_actions[static_cast<std::size_t>(
      detail::argmax_uniform(score, rng, kOracleTieTolerance))];
}

// Epsilon-greedy over q(key, .), ties broken uniformly.
inline Action rl_act(const ValueTables& tables, const StateKey& key,
                     const RLParams& params, Rng& rng) {
  const int n = tables.n_actions();
  if (rng.bernoulli(params.epsilon)) return rng.below(n);
  const auto* row = tables.q_row(key);
  if (!row) return rng.below(n);
  return detail::argmax_uniform(*row, rng);
}

// ---------------------------------------------------------------------------
// Tabular updates.

inline void q_learning_update(ValueTables& t, const StateKey& s, Action a, double r,
                              const StateKey& s_next, const RLParams& p) {
  const double target = r + p.gamma * t.max_q(s_next);
  double& q = t.q_ref(s, a);
  q += p.alpha * (target - q);
}

inline void sarsa_update(ValueTables& t, const StateKey& s, Action a, double r,
                         const StateKey& s_next, Action a_next, const RLParams& p) {
  const double target = r + p.gamma * t.q(s_next, a_next);
  double& q = t.q_ref(s, a);
  q += p.alpha * (target - q);
}

// V first, then Q towards the same V-based target (v(s') read before the
// V update, so s == s' sees the old value in both).
inline void qv_update(ValueTables& t, const StateKey& s, Action a, double r,
                      const StateKey& s_next, const RLParams& p) {
  const double target = r + p.gamma * t.v(s_next);
  double& v = t.v_ref(s);
  v += p.beta * (target - v);
  double& q = t.q_ref(s, a);
  q += p.alpha * (target - q);
}

// ---------------------------------------------------------------------------
// Policy objects.

enum class AgentKind {
  kOracle,
  kTrivialFollower,
  kRandom,
  kQLearning,
  kSarsa,
  kQV,
  kReplay,    // plays a fixed action script
  kExternal,  // action supplied per iteration by the caller
};

inline std::string_view agent_kind_name(AgentKind k) {
  switch (k) {
    case AgentKind::kOracle: return "oracle";
    case AgentKind::kTrivialFollower: return "follower";
    case AgentKind::kRandom: return "random";
    case AgentKind::kQLearning: return "qlearning";
    case AgentKind::kSarsa: return "sarsa";
    case AgentKind::kQV: return "qv";
    case AgentKind::kReplay: return "replay";
    case AgentKind::kExternal: return "external";
  }
  return "?";
}

inline AgentKind parse_agent_kind(std::string_view name) {
  for (AgentKind k : {AgentKind::kOracle, AgentKind::kTrivialFollower, AgentKind::kRandom,
                      AgentKind::kQLearning, AgentKind::kSarsa, AgentKind::kQV,
                      AgentKind::kReplay, AgentKind::kExternal})
    if (agent_kind_name(k) == name) return k;
  throw std::invalid_argument("unknown agent kind: " + std::string(name));
}

inline bool is_learner(AgentKind k) {
  return k == AgentKind::kQLearning || k == AgentKind::kSarsa || k == AgentKind::kQV;
}

// Everything a policy may look at when acting. space and lookahead are
// privileged and only handed to the scripted agents that need them.
struct ActContext {
  const Observation& obs;
  const StateKey* key = nullptr;
  const Space* space = nullptr;
  const Lookahead* lookahead = nullptr;
  std::optional<Action> external;  // kExternal only
};

struct Transition {
  const StateKey& state;
  Action action;
  double reward;
  const StateKey& next_state;
  Action next_action;  // -1 unless the policy wants_next_action()
};

class Policy {
 public:
  virtual ~Policy() = default;
  virtual AgentKind kind() const = 0;
  virtual Action act(const ActContext& ctx) = 0;
  virtual void learn(const Transition&) {}
  virtual void reset() {}
  virtual bool learns() const { return false; }
  // SARSA needs a' before updating; the others learn before acting.
  virtual bool wants_next_action() const { return false; }
  virtual const ValueTables* tables() const { return nullptr; }
};

class RandomPolicy final : public Policy {
 public:
  explicit RandomPolicy(std::uint64_t seed) : rng_(seed) {}
  AgentKind kind() const override { return AgentKind::kRandom; }
  Action act(const ActContext& ctx) override { return act_random(ctx.obs, rng_); }

 private:
  Rng rng_;
};

class TrivialFollowerPolicy final : public Policy {
 public:
  explicit TrivialFollowerPolicy(std::uint64_t seed) : rng_(seed) {}
  AgentKind kind() const override { return AgentKind::kTrivialFollower; }
  Action act(const ActContext& ctx) override {
    if (!ctx.space) throw std::logic_error("follower needs the transition table");
    return act_trivial_follower(ctx.obs, *ctx.space, rng_);
  }

 private:
  Rng rng_;
};

class OraclePolicy final : public Policy {
 public:
  explicit OraclePolicy(std::uint64_t seed) : rng_(seed) {}
  AgentKind kind() const override { return AgentKind::kOracle; }
  Action act(const ActContext& ctx) override {
    if (!ctx.space || !ctx.lookahead) throw std::logic_error("oracle needs the lookahead");
    return act_oracle(ctx.obs, *ctx.space, *ctx.lookahead, rng_);
  }

 private:
  Rng rng_;
};

class TabularPolicy final : public Policy {
 public:
  TabularPolicy(AgentKind kind, const RLParams& params, int n_actions, std::uint64_t seed,
                bool keep_tables_on_reset = false)
      : kind_(kind), params_(params), tables_(n_actions), rng_(seed),
        keep_tables_(keep_tables_on_reset) {
    if (!is_learner(kind)) throw std::invalid_argument("TabularPolicy: not a learner kind");
    params_.validate();
  }

  AgentKind kind() const override { return kind_; }
  bool learns() const override { return true; }
  bool wants_next_action() const override { return kind_ == AgentKind::kSarsa; }
  const ValueTables* tables() const override { return &tables_; }
  const RLParams& params() const { return params_; }

  Action act(const ActContext& ctx) override {
    if (ctx.key) return rl_act(tables_, *ctx.key, params_, rng_);
    return rl_act(tables_, encode_state(ctx.obs), params_, rng_);
  }

  void learn(const Transition& t) override {
    switch (kind_) {
      case AgentKind::kQLearning:
        q_learning_update(tables_, t.state, t.action, t.reward, t.next_state, params_);
        break;
      case AgentKind::kSarsa:
        sarsa_update(tables_, t.state, t.action, t.reward, t.next_state, t.next_action, params_);
        break;
      case AgentKind::kQV:
        qv_update(tables_, t.state, t.action, t.reward, t.next_state, params_);
        break;
      default:
        break;
    }
  }

  void reset() override {
    if (!keep_tables_) tables_.clear();
  }

 private:
  AgentKind kind_;
  RLParams params_;
  ValueTables tables_;
  Rng rng_;
  bool keep_tables_;
};

// Plays script[i] at its i-th call, then repeats the last action.
class ReplayPolicy final : public Policy {
 public:
  explicit ReplayPolicy(std::vector<Action> script) : script_(std::move(script)) {
    if (script_.empty()) throw std::invalid_argument("ReplayPolicy: empty script");
  }
  AgentKind kind() const override { return AgentKind::kReplay; }
  Action act(const ActContext&) override {
    const Action a = script_[std::min(next_, script_.size() - 1)];
    ++next_;
    return a;
  }
  void reset() override { next_ = 0; }

 private:
  std::vector<Action> script_;
  std::size_t next_ = 0;
};

class ExternalPolicy final : public Policy {
 public:
  AgentKind kind() const override { return AgentKind::kExternal; }
  Action act(const ActContext& ctx) override {
    if (!ctx.external) throw std::logic_error("external slot acted without a supplied action");
    return *ctx.external;
  }
};

struct AgentSpec {
  AgentKind kind = AgentKind::kRandom;
  RLParams params;
  std::vector<Action> script;  // kReplay only

  bool operator==(const AgentSpec&) const = default;
};

inline std::unique_ptr<Policy> make_policy(const AgentSpec& spec, int n_actions,
                                           std::uint64_t seed) {
  switch (spec.kind) {
    case AgentKind::kOracle: return std::make_unique<OraclePolicy>(seed);
    case AgentKind::kTrivialFollower: return std::make_unique<TrivialFollowerPolicy>(seed);
    case AgentKind::kRandom: return std::make_unique<RandomPolicy>(seed);
    case AgentKind::kQLearning:
    case AgentKind::kSarsa:
    case AgentKind::kQV:
      return std::make_unique<TabularPolicy>(spec.kind, spec.params, n_actions, seed);
    case AgentKind::kReplay: return std::make_unique<ReplayPolicy>(spec.script);
    case AgentKind::kExternal: return std::make_unique<ExternalPolicy>();
  }
  throw std::invalid_argument("make_policy: unknown kind");
}

}  // namespace lambdaenv
