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

// Random generation of spaces (directed labelled graphs of cells) and of the
// cyclic action pattern that drives Good and Evil.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lambdaenv/random.hpp"

namespace lambdaenv {

using Cell = int;
using Action = int;

// Target of an action that has no effect at a cell.
inline constexpr Cell kVoid = -1;

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GenConfig {
  int n_cells = 9;
  double p_stop = 1.0 / 100.0;
  std::uint64_t seed = 0;
  // P(k) proportional to geometric_ratio^k over k in [2, n_cells].
  double geometric_ratio = 0.5;
  int max_attempts = 10000;

  void validate() const {
    if (n_cells < 2) throw std::invalid_argument("GenConfig: n_cells must be >= 2");
    if (!(p_stop > 0.0 && p_stop <= 1.0))
      throw std::invalid_argument("GenConfig: p_stop must be in (0, 1]");
    if (!(geometric_ratio > 0.0))
      throw std::invalid_argument("GenConfig: geometric_ratio must be > 0");
    if (max_attempts < 1)
      throw std::invalid_argument("GenConfig: max_attempts must be >= 1");
  }
};

// Directed labelled graph. transition(c, a) is the cell reached from c by
// action a, or kVoid.
class Space {
 public:
  Space() = default;
  Space(int n_cells, int n_actions)
      : n_cells_(n_cells),
        n_actions_(n_actions),
        table_(static_cast<std::size_t>(n_cells) * n_actions, kVoid) {}

  Space(int n_cells, int n_actions, std::vector<Cell> table)
      : n_cells_(n_cells), n_actions_(n_actions), table_(std::move(table)) {
    if (n_cells < 1 || n_actions < 1 ||
        table_.size() != static_cast<std::size_t>(n_cells) * n_actions)
      throw std::invalid_argument("Space: table size does not match dimensions");
    for (Cell t : table_)
      if (t != kVoid && (t < 0 || t >= n_cells))
        throw std::invalid_argument("Space: transition target out of range");
  }

  int n_cells() const { return n_cells_; }
  int n_actions() const { return n_actions_; }

  Cell transition(Cell c, Action a) const {
    return table_[static_cast<std::size_t>(c) * n_actions_ + a];
  }
  void set_transition(Cell c, Action a, Cell target) {
    table_[static_cast<std::size_t>(c) * n_actions_ + a] = target;
  }

  // Where an agent in c ends up after action a; void actions leave it in c.
  Cell destination(Cell c, Action a) const {
    const Cell t = transition(c, a);
    return t == kVoid ? c : t;
  }

  const std::vector<Cell>& table() const { return table_; }

  bool operator==(const Space&) const = default;

 private:
  int n_cells_ = 0;
  int n_actions_ = 0;
  std::vector<Cell> table_;
};

// Consumed cyclically by Good and Evil.
struct PatternSequence {
  std::vector<Action> actions;

  std::size_t size() const { return actions.size(); }
  Action at(std::size_t cursor) const { return actions[cursor % actions.size()]; }

  bool operator==(const PatternSequence&) const = default;
};

// The pair generated per environment seed.
struct Environment {
  Space space;
  PatternSequence pattern;

  bool operator==(const Environment&) const = default;
};

inline int sample_num_actions(const GenConfig& cfg, Rng& rng) {
  cfg.validate();
  // Inverse CDF over the renormalized truncated geometric weights.
  std::vector<double> weights;
  double w = 1.0;
  double total = 0.0;
  for (int k = 2; k <= cfg.n_cells; ++k) {
    weights.push_back(w);
    total += w;
    w *= cfg.geometric_ratio;
  }
  double u = rng.uniform01() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i]) return static_cast<int>(i) + 2;
    u -= weights[i];
  }
  return cfg.n_cells;
}

inline bool is_strongly_connected(const Space& space) {
  const int n = space.n_cells();
  if (n == 0) return false;
  // Forward and reverse reachability from cell 0.
  std::vector<std::vector<Cell>> fwd(n), rev(n);
  for (Cell c = 0; c < n; ++c)
    for (Action a = 0; a < space.n_actions(); ++a) {
      const Cell t = space.transition(c, a);
      if (t == kVoid) continue;
      fwd[c].push_back(t);
      rev[t].push_back(c);
    }
  auto all_reached = [n](const std::vector<std::vector<Cell>>& adj) {
    std::vector<char> seen(n, 0);
    std::vector<Cell> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      const Cell c = stack.back();
      stack.pop_back();
      for (Cell t : adj[c])
        if (!seen[t]) {
          seen[t] = 1;
          ++count;
          stack.push_back(t);
        }
    }
    return count == n;
  };
  return all_reached(fwd) && all_reached(rev);
}

// Draws the number of actions, then whole transition tables until one is
// strongly connected. Each (cell, action) is uniform over the n_cells targets
// plus one void slot.
inline Space generate_space(const GenConfig& cfg, Rng& rng) {
  cfg.validate();
  const int n_actions = sample_num_actions(cfg, rng);
  const auto slots = static_cast<std::uint64_t>(cfg.n_cells) + 1;
  Space space(cfg.n_cells, n_actions);
  for (int attempt = 0; attempt < cfg.max_attempts; ++attempt) {
    for (Cell c = 0; c < cfg.n_cells; ++c)
      for (Action a = 0; a < n_actions; ++a) {
        const auto draw = static_cast<Cell>(rng.below(slots));
        space.set_transition(c, a, draw == cfg.n_cells ? kVoid : draw);
      }
    if (is_strongly_connected(space)) return space;
  }
  throw GenerationError("generate_space: no strongly connected space after " +
                        std::to_string(cfg.max_attempts) + " attempts");
}

inline PatternSequence generate_pattern(const Space& space, const GenConfig& cfg,
                                        Rng& rng) {
  cfg.validate();
  PatternSequence pattern;
  const auto n_actions = static_cast<std::uint64_t>(space.n_actions());
  do {
    pattern.actions.push_back(static_cast<Action>(rng.below(n_actions)));
  } while (!rng.bernoulli(cfg.p_stop));
  return pattern;
}

// The environment for a seed; cfg.seed is ignored in favour of env_seed.
inline Environment make_environment(GenConfig cfg, std::uint64_t env_seed) {
  cfg.seed = env_seed;
  Rng rng(stream_seed(env_seed, Stream::kSpace));
  Environment env;
  env.space = generate_space(cfg, rng);
  env.pattern = generate_pattern(env.space, cfg, rng);
  return env;
}

// Canonical text form: one line per cell, "c t0 t1 ... t_{n_a-1}" with '-'
// for void, then "pattern: a a a ...". Newline-terminated lines.
inline std::string serialize_space(const Space& space) {
  std::string out;
  for (Cell c = 0; c < space.n_cells(); ++c) {
    out += std::to_string(c);
    for (Action a = 0; a < space.n_actions(); ++a) {
      const Cell t = space.transition(c, a);
      out += ' ';
      out += t == kVoid ? std::string("-") : std::to_string(t);
    }
    out += '\n';
  }
  return out;
}

inline std::string serialize_pattern(const PatternSequence& pattern) {
  std::string out = "pattern:";
  for (Action a : pattern.actions) {
    out += ' ';
    out += std::to_string(a);
  }
  out += '\n';
  return out;
}

inline std::string serialize(const Space& space, const PatternSequence& pattern) {
  return serialize_space(space) + serialize_pattern(pattern);
}

}  // namespace lambdaenv
