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

// Reward schemes: how the rewards each agent collected turn into the signal
// it learns from and is scored on. Splitting between agents sharing a cell
// happens at consumption (env.hpp); this is redistribution afterwards.

#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace lambdaenv {

struct RewardScheme {
  enum class Kind { kIsolated, kCompetitive, kCooperative, kTeams };
  Kind kind = Kind::kIsolated;
  std::vector<std::vector<int>> teams;  // kTeams only

  static RewardScheme isolated() { return {Kind::kIsolated, {}}; }
  static RewardScheme competitive() { return {Kind::kCompetitive, {}}; }
  static RewardScheme cooperative() { return {Kind::kCooperative, {}}; }
  static RewardScheme with_teams(std::vector<std::vector<int>> teams) {
    return {Kind::kTeams, std::move(teams)};
  }

  // Throws unless the scheme is usable with m agents.
  void validate(int m) const {
    if (m < 1) throw std::invalid_argument("RewardScheme: need at least one agent");
    if (kind == Kind::kIsolated && m != 1)
      throw std::invalid_argument("RewardScheme: isolated requires exactly one agent");
    if (kind != Kind::kTeams) return;
    std::vector<int> seen(static_cast<std::size_t>(m), 0);
    for (const auto& team : teams) {
      if (team.empty()) throw std::invalid_argument("RewardScheme: empty team");
      for (int j : team) {
        if (j < 0 || j >= m) throw std::invalid_argument("RewardScheme: team member out of range");
        if (seen[static_cast<std::size_t>(j)]++)
          throw std::invalid_argument("RewardScheme: agent in more than one team");
      }
    }
    for (int s : seen)
      if (!s) throw std::invalid_argument("RewardScheme: teams do not cover every agent");
  }

  bool operator==(const RewardScheme&) const = default;
};

inline std::vector<double> allocate(std::span<const double> collected,
                                    const RewardScheme& scheme) {
  const int m = static_cast<int>(collected.size());
  scheme.validate(m);
  std::vector<double> signal(collected.begin(), collected.end());
  auto pool = [&](const std::vector<int>& members) {
    double sum = 0.0;
    for (int j : members) sum += collected[static_cast<std::size_t>(j)];
    const double mean = sum / static_cast<double>(members.size());
    for (int j : members) signal[static_cast<std::size_t>(j)] = mean;
  };
  switch (scheme.kind) {
    case RewardScheme::Kind::kIsolated:
    case RewardScheme::Kind::kCompetitive:
      break;
    case RewardScheme::Kind::kCooperative: {
      std::vector<int> all(static_cast<std::size_t>(m));
      for (int j = 0; j < m; ++j) all[static_cast<std::size_t>(j)] = j;
      pool(all);
      break;
    }
    case RewardScheme::Kind::kTeams:
      for (const auto& team : scheme.teams) pool(team);
      break;
  }
  return signal;
}

// Config-file descriptor: isolated | competitive | cooperative | teams:[[0,1],[2,3]]
inline std::string format_scheme(const RewardScheme& s) {
  switch (s.kind) {
    case RewardScheme::Kind::kIsolated: return "isolated";
    case RewardScheme::Kind::kCompetitive: return "competitive";
    case RewardScheme::Kind::kCooperative: return "cooperative";
    case RewardScheme::Kind::kTeams: return "teams:" + nlohmann::json(s.teams).dump();
  }
  return "?";
}

inline RewardScheme parse_scheme(std::string_view text) {
  if (text == "isolated") return RewardScheme::isolated();
  if (text == "competitive") return RewardScheme::competitive();
  if (text == "cooperative") return RewardScheme::cooperative();
  constexpr std::string_view prefix = "teams:";
  if (text.substr(0, prefix.size()) == prefix) {
    const auto body = text.substr(prefix.size());
    try {
      auto j = nlohmann::json::parse(body);
      return RewardScheme::with_teams(j.get<std::vector<std::vector<int>>>());
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("bad teams descriptor: " + std::string(e.what()));
    }
  }
  throw std::invalid_argument("unknown reward scheme: " + std::string(text));
}

}  // namespace lambdaenv
