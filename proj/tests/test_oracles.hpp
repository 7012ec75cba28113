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

// Independent reference implementations used only by tests. Nothing here
// calls into the code paths it checks.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "lambdaenv/space.hpp"

namespace lambdaenv::testing_oracles {

// p[k] for k in [2, n]: base^k normalized over the support (p[0], p[1] = 0).
inline std::vector<double> truncated_geometric(int n, double base) {
  std::vector<double> p(static_cast<std::size_t>(n) + 1, 0.0);
  double total = 0.0;
  for (int k = 2; k <= n; ++k) total += std::pow(base, k);
  for (int k = 2; k <= n; ++k) p[k] = std::pow(base, k) / total;
  return p;
}

// Number of strongly connected components (Tarjan, recursive).
inline int tarjan_scc_count(const Space& s) {
  const int n = s.n_cells();
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  int counter = 0, components = 0;
  std::function<void(int)> visit = [&](int v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (Action a = 0; a < s.n_actions(); ++a) {
      const int w = s.transition(v, a);
      if (w == kVoid) continue;
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
      } while (w != v);
      ++components;
    }
  };
  for (int v = 0; v < n; ++v)
    if (index[v] < 0) visit(v);
  return components;
}

// Breadth-first search from every cell.
inline bool all_pairs_reachable(const Space& s) {
  const int n = s.n_cells();
  for (int src = 0; src < n; ++src) {
    std::vector<bool> seen(n, false);
    std::vector<int> queue{src};
    seen[src] = true;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int v = queue[head];
      for (Action a = 0; a < s.n_actions(); ++a) {
        const int w = s.transition(v, a);
        if (w != kVoid && !seen[w]) {
          seen[w] = true;
          queue.push_back(w);
        }
      }
    }
    if (static_cast<int>(queue.size()) != n) return false;
  }
  return true;
}

// Q* of a deterministic finite MDP by value iteration.
// next[s][a], reward[s][a].
inline std::vector<std::vector<double>> optimal_q(const std::vector<std::vector<int>>& next,
                                                  const std::vector<std::vector<double>>& reward,
                                                  double gamma, int sweeps = 2000) {
  const std::size_t ns = next.size();
  std::vector<std::vector<double>> q(ns, std::vector<double>(next[0].size(), 0.0));
  for (int it = 0; it < sweeps; ++it) {
    auto nq = q;
    for (std::size_t s = 0; s < ns; ++s)
      for (std::size_t a = 0; a < next[s].size(); ++a) {
        const auto& row = q[static_cast<std::size_t>(next[s][a])];
        nq[s][a] = reward[s][a] + gamma * *std::max_element(row.begin(), row.end());
      }
    q = nq;
  }
  return q;
}

// Q^pi of a deterministic policy pi[s] by iterative policy evaluation.
inline std::vector<std::vector<double>> policy_q(const std::vector<std::vector<int>>& next,
                                                 const std::vector<std::vector<double>>& reward,
                                                 const std::vector<int>& pi, double gamma,
                                                 int sweeps = 2000) {
  const std::size_t ns = next.size();
  std::vector<std::vector<double>> q(ns, std::vector<double>(next[0].size(), 0.0));
  for (int it = 0; it < sweeps; ++it) {
    auto nq = q;
    for (std::size_t s = 0; s < ns; ++s)
      for (std::size_t a = 0; a < next[s].size(); ++a) {
        const int s2 = next[s][a];
        nq[s][a] = reward[s][a] + gamma * q[static_cast<std::size_t>(s2)][static_cast<std::size_t>(pi[s2])];
      }
    q = nq;
  }
  return q;
}

}  // namespace lambdaenv::testing_oracles
