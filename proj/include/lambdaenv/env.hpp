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

// Discrete-time dynamics of a space with Good, Evil and m common agents.
//
// One iteration:
//   1. snapshot positions and read the next pattern action;
//   2. Good and Evil resolve their moves against the snapshot: a void action
//      or a target occupied by any other agent means staying; two movers
//      targeting the same free cell are separated by a fair coin;
//   3. Good and Evil drop +1 / -1 (erasing what was there) according to the
//      drop rule;
//   4. common agents move (void means staying, sharing is allowed);
//   5. every cell holding k >= 1 common agents pays r/k to each and is zeroed;
//   6. under the vacated-cell rule, rewards under Good and Evil are destroyed;
//   7. all remaining rewards are halved.

#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lambdaenv/random.hpp"
#include "lambdaenv/space.hpp"

namespace lambdaenv {

enum class DropRule : std::uint8_t {
  // Good/Evil drop into the cell they occupy after moving, every iteration.
  kArrival,
  // Good/Evil drop into the cell they vacate, only when they actually move.
  kVacated,
};

struct EnvOptions {
  DropRule drop = DropRule::kArrival;
  // Observations carry the per-cell reward values as well as occupants.
  bool observe_rewards = false;

  bool operator==(const EnvOptions&) const = default;
};

struct Marker {
  enum class Kind : std::uint8_t { kGood, kEvil, kAgent };
  Kind kind = Kind::kAgent;
  int agent = -1;  // only for kAgent

  static Marker good() { return {Kind::kGood, -1}; }
  static Marker evil() { return {Kind::kEvil, -1}; }
  static Marker of_agent(int j) { return {Kind::kAgent, j}; }

  std::string str() const {
    switch (kind) {
      case Kind::kGood: return "G";
      case Kind::kEvil: return "E";
      case Kind::kAgent: return "A" + std::to_string(agent);
    }
    return "?";
  }

  auto operator<=>(const Marker&) const = default;
};

struct Observation {
  int agent = 0;
  Cell self_cell = 0;
  std::vector<std::vector<Marker>> occupants;  // sorted per cell
  double last_reward = 0.0;
  std::vector<Action> available_actions;
  std::vector<double> rewards;  // empty unless EnvOptions::observe_rewards

  Cell good_cell() const { return find(Marker::Kind::kGood); }
  Cell evil_cell() const { return find(Marker::Kind::kEvil); }

 private:
  Cell find(Marker::Kind kind) const {
    for (std::size_t c = 0; c < occupants.size(); ++c)
      for (const Marker& m : occupants[c])
        if (m.kind == kind) return static_cast<Cell>(c);
    return kVoid;
  }
};

struct StepOutcome {
  std::vector<double> collected;
  std::vector<Observation> new_observations;
};

struct EnvState {
  Space space;
  PatternSequence pattern;
  std::size_t pattern_cursor = 0;
  Cell good_pos = 0;
  Cell evil_pos = 1;
  std::vector<Cell> agent_pos;
  std::vector<double> reward_field;
  std::int64_t iteration = 0;
  std::vector<double> last_collected;
  EnvOptions options;

  int num_agents() const { return static_cast<int>(agent_pos.size()); }

  bool operator==(const EnvState&) const = default;
};

// Result of peek_next.
struct Lookahead {
  Cell predicted_good_cell = 0;
  std::vector<double> predicted_reward_field;
};

inline EnvState init_env(const Space& space, const PatternSequence& pattern, int m,
                         Rng& rng, EnvOptions options = {}) {
  if (space.n_cells() < 2)
    throw std::invalid_argument("init_env: need at least 2 cells to separate Good and Evil");
  if (m < 1) throw std::invalid_argument("init_env: need at least one common agent");
  if (pattern.actions.empty()) throw std::invalid_argument("init_env: empty pattern");
  EnvState s;
  s.space = space;
  s.pattern = pattern;
  s.options = options;
  const int n = space.n_cells();
  s.good_pos = rng.below(n);
  s.evil_pos = rng.below(n - 1);
  if (s.evil_pos >= s.good_pos) ++s.evil_pos;
  s.agent_pos.resize(static_cast<std::size_t>(m));
  for (Cell& p : s.agent_pos) p = rng.below(n);
  s.reward_field.assign(static_cast<std::size_t>(n), 0.0);
  s.last_collected.assign(static_cast<std::size_t>(m), 0.0);
  return s;
}

namespace detail {

struct SpecialMoves {
  Cell good_to;
  Cell evil_to;
};

// Moves of Good and Evil against the position snapshot. good_wins_conflict
// is consulted only when both target the same free cell.
template <typename ConflictFn>
SpecialMoves resolve_special_moves(const EnvState& s, Action a,
                                   ConflictFn&& good_wins_conflict) {
  auto occupied_by_other = [&](Cell target, Cell other_special) {
    if (target == other_special) return true;
    return std::find(s.agent_pos.begin(), s.agent_pos.end(), target) !=
           s.agent_pos.end();
  };
  auto wanted = [&](Cell from, Cell other_special) {
    const Cell t = s.space.transition(from, a);
    if (t == kVoid || t == from) return from;
    if (occupied_by_other(t, other_special)) return from;
    return t;
  };
  SpecialMoves mv{wanted(s.good_pos, s.evil_pos), wanted(s.evil_pos, s.good_pos)};
  if (mv.good_to == mv.evil_to) {
    // Both moved (neither can target the other's current cell).
    if (good_wins_conflict())
      mv.evil_to = s.evil_pos;
    else
      mv.good_to = s.good_pos;
  }
  return mv;
}

inline void drop_rewards(EnvState& s, const SpecialMoves& mv) {
  if (s.options.drop == DropRule::kArrival) {
    s.reward_field[mv.good_to] = 1.0;
    s.reward_field[mv.evil_to] = -1.0;
  } else {
    if (mv.good_to != s.good_pos) s.reward_field[s.good_pos] = 1.0;
    if (mv.evil_to != s.evil_pos) s.reward_field[s.evil_pos] = -1.0;
  }
}

}  // namespace detail

inline Observation observe(const EnvState& s, int agent) {
  if (agent < 0 || agent >= s.num_agents())
    throw std::out_of_range("observe: agent index out of range");
  Observation obs;
  obs.agent = agent;
  obs.self_cell = s.agent_pos[static_cast<std::size_t>(agent)];
  obs.occupants.resize(static_cast<std::size_t>(s.space.n_cells()));
  obs.occupants[s.good_pos].push_back(Marker::good());
  obs.occupants[s.evil_pos].push_back(Marker::evil());
  for (int j = 0; j < s.num_agents(); ++j)
    obs.occupants[s.agent_pos[j]].push_back(Marker::of_agent(j));
  // Markers are appended in (Good, Evil, agents by index) order, which is
  // already the sorted order.
  obs.last_reward = s.last_collected[static_cast<std::size_t>(agent)];
  obs.available_actions.resize(static_cast<std::size_t>(s.space.n_actions()));
  for (Action a = 0; a < s.space.n_actions(); ++a) obs.available_actions[a] = a;
  if (s.options.observe_rewards) obs.rewards = s.reward_field;
  return obs;
}

inline std::vector<Observation> observe_all(const EnvState& s) {
  std::vector<Observation> out;
  out.reserve(s.agent_pos.size());
  for (int j = 0; j < s.num_agents(); ++j) out.push_back(observe(s, j));
  return out;
}

inline void validate_actions(const EnvState& s, std::span<const Action> actions) {
  if (actions.size() != s.agent_pos.size())
    throw std::invalid_argument("step: expected one action per common agent");
  for (Action a : actions)
    if (a < 0 || a >= s.space.n_actions())
      throw std::out_of_range("step: action index " + std::to_string(a) +
                              " out of range");
}

// Advances one iteration in place. Only the Good/Evil conflict coin draws
// from rng.
inline StepOutcome step(EnvState& s, std::span<const Action> actions, Rng& rng,
                        bool with_observations = true) {
  validate_actions(s, actions);
  const Action pattern_action = s.pattern.at(s.pattern_cursor);
  s.pattern_cursor = (s.pattern_cursor + 1) % s.pattern.size();

  const Cell good_from = s.good_pos;
  const Cell evil_from = s.evil_pos;
  const auto mv = detail::resolve_special_moves(s, pattern_action, [&] {
    // The coin picks the lower- or higher-indexed mover, so the outcome does
    // not depend on which of the two is Good.
    const bool lower_wins = rng.coin();
    return lower_wins == (good_from < evil_from);
  });
  detail::drop_rewards(s, mv);
  s.good_pos = mv.good_to;
  s.evil_pos = mv.evil_to;

  const std::size_t m = s.agent_pos.size();
  for (std::size_t j = 0; j < m; ++j)
    s.agent_pos[j] = s.space.destination(s.agent_pos[j], actions[j]);

  StepOutcome out;
  out.collected.assign(m, 0.0);
  // Consumption: count agents per cell, then split.
  std::vector<int> count(static_cast<std::size_t>(s.space.n_cells()), 0);
  for (Cell p : s.agent_pos) ++count[p];
  for (std::size_t j = 0; j < m; ++j) {
    const Cell p = s.agent_pos[j];
    out.collected[j] = s.reward_field[p] / count[p];
  }
  for (Cell p : s.agent_pos) s.reward_field[p] = 0.0;

  if (s.options.drop == DropRule::kVacated) {
    s.reward_field[s.good_pos] = 0.0;
    s.reward_field[s.evil_pos] = 0.0;
  }
  for (double& r : s.reward_field) r *= 0.5;
  ++s.iteration;
  s.last_collected = out.collected;
  if (with_observations) out.new_observations = observe_all(s);
  return out;
}

// One-step lookahead used by the Oracle: Good's cell and the post-decay
// reward field of the next iteration, assuming common agents stay put and
// that Good wins a conflict with Evil. Does not touch the state.
inline Lookahead peek_next(const EnvState& s) {
  EnvState copy = s;
  const Action a = s.pattern.at(s.pattern_cursor);
  const auto mv = detail::resolve_special_moves(copy, a, [] { return true; });
  detail::drop_rewards(copy, mv);
  if (s.options.drop == DropRule::kVacated) {
    copy.reward_field[mv.good_to] = 0.0;
    copy.reward_field[mv.evil_to] = 0.0;
  }
  for (double& r : copy.reward_field) r *= 0.5;
  return {mv.good_to, std::move(copy.reward_field)};
}

// One trace line: iteration, Good, Evil, agent positions, nonzero rewards
// (6 decimals) and per-agent collected values. Written after the step.
inline std::string format_trace(const EnvState& s, std::span<const double> collected) {
  char buf[64];
  std::string out = std::to_string(s.iteration) + " G=" + std::to_string(s.good_pos) +
                    " E=" + std::to_string(s.evil_pos) + " A=[";
  for (std::size_t j = 0; j < s.agent_pos.size(); ++j) {
    if (j) out += ',';
    out += std::to_string(s.agent_pos[j]);
  }
  out += "] R={";
  bool first = true;
  for (std::size_t c = 0; c < s.reward_field.size(); ++c) {
    if (s.reward_field[c] == 0.0) continue;
    std::snprintf(buf, sizeof buf, "%s%zu:%.6f", first ? "" : ",", c, s.reward_field[c]);
    out += buf;
    first = false;
  }
  out += "} C=[";
  for (std::size_t j = 0; j < collected.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%s%.6f", j ? "," : "", collected[j]);
    out += buf;
  }
  out += ']';
  return out;
}

}  // namespace lambdaenv
