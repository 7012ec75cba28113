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

// Sessions (one roster against one environment) and experiments (every
// roster of a scenario against a shared set of environments).

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "lambdaenv/agents.hpp"
#include "lambdaenv/complexity.hpp"
#include "lambdaenv/env.hpp"
#include "lambdaenv/random.hpp"
#include "lambdaenv/schemes.hpp"
#include "lambdaenv/space.hpp"

namespace lambdaenv {

struct SessionConfig {
  std::uint64_t env_seed = 0;
  std::int64_t iterations = 10000;
  std::vector<AgentSpec> agents;
  RewardScheme scheme = RewardScheme::isolated();
  std::int64_t record_stride = 100;
  GenConfig gen;
  EnvOptions env_options;

  void validate() const {
    if (iterations < 1) throw std::invalid_argument("SessionConfig: iterations must be >= 1");
    if (agents.empty()) throw std::invalid_argument("SessionConfig: empty roster");
    if (record_stride < 1) throw std::invalid_argument("SessionConfig: record_stride must be >= 1");
    scheme.validate(static_cast<int>(agents.size()));
    gen.validate();
  }
};

// Running average of an agent's own collected reward (after cell splitting).
// Under pooled schemes this differs from the signal the agent learns from.
struct ScoreSeries {
  std::string agent;
  std::vector<std::pair<std::int64_t, double>> points;  // (iteration, running average)
};

struct SessionResult {
  std::vector<ScoreSeries> series;
  std::vector<double> final_scores;   // mean collected reward per iteration
  std::vector<double> final_signals;  // mean allocated signal per iteration
};

// Per-roster display names: the kind name, suffixed with the slot index
// when a kind appears more than once.
inline std::vector<std::string> agent_labels(const std::vector<AgentSpec>& agents) {
  std::map<AgentKind, int> counts;
  for (const auto& a : agents) ++counts[a.kind];
  std::vector<std::string> labels;
  for (std::size_t j = 0; j < agents.size(); ++j) {
    std::string l(agent_kind_name(agents[j].kind));
    if (counts[agents[j].kind] > 1) l += "_" + std::to_string(j);
    labels.push_back(std::move(l));
  }
  return labels;
}

// A session advanced one iteration at a time. Each iteration: observe, act
// (with privileged inputs for scripted agents), step, allocate, learn.
//
// Random streams: the environment, the placement, the Good/Evil conflict coin
// and each agent slot own independent streams derived from env_seed, so
// replacing one slot's policy never perturbs the others.
class Session {
 public:
  explicit Session(SessionConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    env_ = make_environment(cfg_.gen, cfg_.env_seed);
    Rng placement(stream_seed(cfg_.env_seed, Stream::kPlacement));
    state_ = init_env(env_.space, env_.pattern, static_cast<int>(cfg_.agents.size()), placement,
                      cfg_.env_options);
    dynamics_ = Rng(stream_seed(cfg_.env_seed, Stream::kDynamics));
    const std::size_t m = cfg_.agents.size();
    for (std::size_t j = 0; j < m; ++j) {
      policies_.push_back(make_policy(cfg_.agents[j], env_.space.n_actions(),
                                      stream_seed(cfg_.env_seed, Stream::kAgentBase, j)));
      if (cfg_.agents[j].kind == AgentKind::kOracle) needs_lookahead_ = true;
    }
    slots_.resize(m);
    labels_ = agent_labels(cfg_.agents);
    series_.resize(m);
    for (std::size_t j = 0; j < m; ++j) series_[j].agent = labels_[j];
    sums_.assign(m, 0.0);
    signal_sums_.assign(m, 0.0);
    last_signal_.assign(m, 0.0);
    observations_ = observe_all(state_);
    actions_.assign(m, 0);
  }

  const SessionConfig& config() const { return cfg_; }
  const Environment& environment() const { return env_; }
  const EnvState& state() const { return state_; }
  const std::vector<Observation>& observations() const { return observations_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const Policy& policy(std::size_t j) const { return *policies_[j]; }
  std::int64_t iteration() const { return state_.iteration; }
  bool finished() const { return state_.iteration >= cfg_.iterations; }
  const std::vector<double>& last_signal() const { return last_signal_; }
  const std::vector<double>& last_collected() const { return state_.last_collected; }
  const std::vector<Action>& last_actions() const { return actions_; }

  double running_average(std::size_t j) const {
    return state_.iteration == 0 ? 0.0 : sums_[j] / static_cast<double>(state_.iteration);
  }
  double running_signal_average(std::size_t j) const {
    return state_.iteration == 0 ? 0.0 : signal_sums_[j] / static_cast<double>(state_.iteration);
  }

  // Advances one iteration. external supplies the action of kExternal slots.
  void advance(std::optional<Action> external = std::nullopt) {
    if (finished()) throw std::logic_error("Session: already finished");
    const std::size_t m = policies_.size();
    std::optional<Lookahead> lookahead;
    if (needs_lookahead_) lookahead = peek_next(state_);

    for (std::size_t j = 0; j < m; ++j) {
      Policy& p = *policies_[j];
      SlotMemory& mem = slots_[j];
      StateKey key;
      if (p.learns()) key = encode_state(observations_[j]);
      ActContext ctx{observations_[j], p.learns() ? &key : nullptr, &env_.space,
                     lookahead ? &*lookahead : nullptr, std::nullopt};
      if (p.kind() == AgentKind::kExternal) {
        if (!external) throw std::invalid_argument("Session: external slot needs an action");
        ctx.external = *external;
      }
      Action a;
      if (p.learns() && p.wants_next_action()) {
        a = p.act(ctx);
        if (mem.has_prev) p.learn({mem.key, mem.action, mem.reward, key, a});
      } else {
        if (p.learns() && mem.has_prev) p.learn({mem.key, mem.action, mem.reward, key, -1});
        a = p.act(ctx);
      }
      actions_[j] = a;
      if (p.learns()) {
        mem.key = std::move(key);
        mem.action = a;
      }
    }

    StepOutcome out = step(state_, actions_, dynamics_);
    last_signal_ = allocate(out.collected, cfg_.scheme);
    observations_ = std::move(out.new_observations);
    const std::int64_t t = state_.iteration;
    for (std::size_t j = 0; j < m; ++j) {
      observations_[j].last_reward = last_signal_[j];
      sums_[j] += out.collected[j];
      signal_sums_[j] += last_signal_[j];
      slots_[j].reward = last_signal_[j];
      slots_[j].has_prev = true;
      if (t % cfg_.record_stride == 0 || t == cfg_.iterations)
        series_[j].points.emplace_back(t, sums_[j] / static_cast<double>(t));
    }
  }

  SessionResult result() const {
    SessionResult r;
    r.series = series_;
    for (std::size_t j = 0; j < sums_.size(); ++j) {
      r.final_scores.push_back(running_average(j));
      r.final_signals.push_back(running_signal_average(j));
    }
    return r;
  }

 private:
  struct SlotMemory {
    bool has_prev = false;
    StateKey key;
    Action action = 0;
    double reward = 0.0;
  };

  SessionConfig cfg_;
  Environment env_;
  EnvState state_;
  Rng dynamics_;
  std::vector<std::unique_ptr<Policy>> policies_;
  std::vector<SlotMemory> slots_;
  std::vector<std::string> labels_;
  std::vector<ScoreSeries> series_;
  std::vector<double> sums_;
  std::vector<double> signal_sums_;
  std::vector<double> last_signal_;
  std::vector<Observation> observations_;
  std::vector<Action> actions_;
  bool needs_lookahead_ = false;
};

inline SessionResult run_session(const SessionConfig& cfg) {
  Session s(cfg);
  while (!s.finished()) s.advance();
  return s.result();
}

// ---------------------------------------------------------------------------
// Experiments.

struct RosterSpec {
  std::string name;
  std::vector<AgentSpec> agents;
  RewardScheme scheme;
};

struct ExperimentSpec {
  std::string name;
  int n_envs = 100;
  std::int64_t iterations = 10000;
  std::vector<RosterSpec> rosters;
  std::uint64_t master_seed = 0;
  std::int64_t record_stride = 100;
  GenConfig gen;
  EnvOptions env_options;
};

inline std::uint64_t env_seed_for(std::uint64_t master_seed, int env_index) {
  return derive_seed(master_seed, static_cast<std::uint64_t>(env_index));
}

inline std::string env_id_for(int env_index) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "env%04d", env_index);
  return buf;
}

struct AgentAggregate {
  std::string roster;
  std::string agent;
  std::vector<double> finals;  // per env, env order
  std::vector<std::pair<std::int64_t, double>> mean_curve;
  double mean_final = 0.0;
  double std_final = 0.0;  // population standard deviation over envs
};

struct RosterResult {
  RosterSpec roster;
  std::vector<SessionResult> sessions;  // per env, env order
  std::vector<AgentAggregate> agents;
};

struct ExperimentResult {
  std::string scenario;
  std::int64_t iterations = 0;
  std::vector<std::uint64_t> env_seeds;
  std::vector<ComplexityRecord> complexities;
  std::vector<RosterResult> rosters;

  const AgentAggregate& aggregate(const std::string& roster, const std::string& agent) const {
    for (const auto& r : rosters)
      if (r.roster.name == roster)
        for (const auto& a : r.agents)
          if (a.agent == agent) return a;
    throw std::out_of_range("no aggregate for " + roster + "/" + agent);
  }
  // First roster containing agent.
  const AgentAggregate& aggregate(const std::string& agent) const {
    for (const auto& r : rosters)
      for (const auto& a : r.agents)
        if (a.agent == agent) return a;
    throw std::out_of_range("no aggregate for agent " + agent);
  }
};

// Runs fn(i) for i in order[0..n) on up to `threads` workers. Exceptions are
// rethrown on the caller's thread (first one wins).
inline void parallel_for(const std::vector<std::size_t>& order, int threads,
                         const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || order.size() <= 1) {
    for (std::size_t i : order) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < order.size();) {
      try {
        fn(order[k]);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const auto n = std::min<std::size_t>(static_cast<std::size_t>(threads), order.size());
  for (std::size_t i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

inline int default_threads() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

struct RunOptions {
  int threads = 1;
  // Execution order of the (roster, env) jobs; empty means natural order.
  // Results never depend on it.
  std::vector<std::size_t> job_order;
};

inline ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& opts = {}) {
  if (spec.n_envs < 1) throw std::invalid_argument("ExperimentSpec: n_envs must be >= 1");
  if (spec.rosters.empty()) throw std::invalid_argument("ExperimentSpec: no rosters");
  ExperimentResult res;
  res.scenario = spec.name;
  res.iterations = spec.iterations;
  for (int e = 0; e < spec.n_envs; ++e) {
    const std::uint64_t seed = env_seed_for(spec.master_seed, e);
    res.env_seeds.push_back(seed);
    res.complexities.push_back(complexity_record(env_id_for(e), make_environment(spec.gen, seed)));
  }
  const std::size_t n_envs = static_cast<std::size_t>(spec.n_envs);
  res.rosters.resize(spec.rosters.size());
  for (std::size_t r = 0; r < spec.rosters.size(); ++r) {
    res.rosters[r].roster = spec.rosters[r];
    res.rosters[r].sessions.resize(n_envs);
  }

  const std::size_t n_jobs = spec.rosters.size() * n_envs;
  std::vector<std::size_t> order = opts.job_order;
  if (order.empty()) {
    order.resize(n_jobs);
    std::iota(order.begin(), order.end(), 0);
  }
  if (order.size() != n_jobs) throw std::invalid_argument("RunOptions: job_order has wrong size");
  parallel_for(order, opts.threads, [&](std::size_t job) {
    const std::size_t r = job / n_envs;
    const std::size_t e = job % n_envs;
    SessionConfig cfg;
    cfg.env_seed = res.env_seeds[e];
    cfg.iterations = spec.iterations;
    cfg.agents = spec.rosters[r].agents;
    cfg.scheme = spec.rosters[r].scheme;
    cfg.record_stride = spec.record_stride;
    cfg.gen = spec.gen;
    cfg.env_options = spec.env_options;
    res.rosters[r].sessions[e] = run_session(cfg);
  });

  // Ordered fold.
  for (auto& rr : res.rosters) {
    const auto labels = agent_labels(rr.roster.agents);
    for (std::size_t j = 0; j < labels.size(); ++j) {
      AgentAggregate agg;
      agg.roster = rr.roster.name;
      agg.agent = labels[j];
      const auto& first = rr.sessions.front().series[j].points;
      agg.mean_curve.assign(first.size(), {0, 0.0});
      for (std::size_t p = 0; p < first.size(); ++p) agg.mean_curve[p].first = first[p].first;
      for (const auto& sess : rr.sessions) {
        agg.finals.push_back(sess.final_scores[j]);
        const auto& pts = sess.series[j].points;
        for (std::size_t p = 0; p < pts.size(); ++p) agg.mean_curve[p].second += pts[p].second;
      }
      for (auto& pt : agg.mean_curve) pt.second /= static_cast<double>(n_envs);
      double sum = 0.0;
      for (double f : agg.finals) sum += f;
      agg.mean_final = sum / static_cast<double>(n_envs);
      double var = 0.0;
      for (double f : agg.finals) var += (f - agg.mean_final) * (f - agg.mean_final);
      agg.std_final = std::sqrt(var / static_cast<double>(n_envs));
      rr.agents.push_back(std::move(agg));
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// Output.

inline void write_curves_csv(const ExperimentResult& res, std::ostream& os) {
  os << "scenario,roster,env_id,agent,iteration,avg_reward\n";
  char buf[64];
  for (const auto& rr : res.rosters)
    for (std::size_t e = 0; e < rr.sessions.size(); ++e)
      for (const auto& s : rr.sessions[e].series)
        for (const auto& [it, avg] : s.points) {
          std::snprintf(buf, sizeof buf, "%.17g", avg);
          os << res.scenario << ',' << rr.roster.name << ',' << env_id_for(static_cast<int>(e))
             << ',' << s.agent << ',' << it << ',' << buf << '\n';
        }
}

inline void write_summary_csv(const ExperimentResult& res, std::ostream& os) {
  os << "scenario,agent,mean_final,std_final,n_envs\n";
  char buf[96];
  for (const auto& rr : res.rosters)
    for (const auto& a : rr.agents) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%zu", a.mean_final, a.std_final, a.finals.size());
      os << res.scenario << ',' << a.agent << ',' << buf << '\n';
    }
}

inline void write_finals_csv(const ExperimentResult& res, std::ostream& os) {
  os << "scenario,roster,env_id,agent,score\n";
  char buf[64];
  for (const auto& rr : res.rosters)
    for (const auto& a : rr.agents)
      for (std::size_t e = 0; e < a.finals.size(); ++e) {
        std::snprintf(buf, sizeof buf, "%.17g", a.finals[e]);
        os << res.scenario << ',' << rr.roster.name << ',' << env_id_for(static_cast<int>(e)) << ','
           << a.agent << ',' << buf << '\n';
      }
}

inline void write_environments_csv(const ExperimentResult& res, std::ostream& os) {
  os << "env_id,env_seed,k_approx,serialized_len\n";
  for (std::size_t e = 0; e < res.complexities.size(); ++e)
    os << res.complexities[e].env_id << ',' << res.env_seeds[e] << ',' << res.complexities[e].k_approx
       << ',' << res.complexities[e].serialized_len << '\n';
}

// Two-column "iteration avg_reward" series of one agent's mean curve.
inline void write_plot_data(const AgentAggregate& agg, std::ostream& os) {
  char buf[64];
  for (const auto& [it, avg] : agg.mean_curve) {
    std::snprintf(buf, sizeof buf, "%.10g", avg);
    os << it << ' ' << buf << '\n';
  }
}

// ---------------------------------------------------------------------------
// Scenarios.

// Learner parameters selected by tune_parameters on the isolated scenario
// (grid and seed in the README).
inline RLParams default_params(AgentKind kind) {
  RLParams p;
  switch (kind) {
    case AgentKind::kQLearning: p = {0.4, 0.75, 0.4, 0.05}; break;
    case AgentKind::kSarsa: p = {0.4, 0.75, 0.4, 0.05}; break;
    case AgentKind::kQV: p = {0.4, 0.75, 0.4, 0.01}; break;
    default: break;
  }
  return p;
}

inline AgentSpec agent(AgentKind kind) { return {kind, default_params(kind), {}}; }

inline constexpr std::uint64_t kDefaultMasterSeed = 20111112;

struct ScenarioScale {
  std::optional<int> n_envs;
  std::optional<std::int64_t> iterations;
};

inline std::vector<ExperimentSpec> builtin_scenarios(const ScenarioScale& scale = {},
                                                     std::uint64_t master_seed = kDefaultMasterSeed) {
  using K = AgentKind;
  const std::vector<AgentSpec> six = {agent(K::kOracle), agent(K::kTrivialFollower), agent(K::kRandom),
                                      agent(K::kQLearning), agent(K::kSarsa), agent(K::kQV)};
  const std::vector<AgentSpec> rl_random = {agent(K::kQLearning), agent(K::kSarsa), agent(K::kQV),
                                            agent(K::kRandom)};
  const std::vector<AgentSpec> rl3 = {agent(K::kQLearning), agent(K::kSarsa), agent(K::kQV)};

  auto make = [&](std::string name, std::int64_t iterations, std::vector<RosterSpec> rosters) {
    ExperimentSpec s;
    s.name = std::move(name);
    s.n_envs = scale.n_envs.value_or(100);
    s.iterations = scale.iterations.value_or(iterations);
    s.rosters = std::move(rosters);
    s.master_seed = master_seed;
    return s;
  };
  std::vector<RosterSpec> isolated;
  for (const auto& a : six)
    isolated.push_back({std::string(agent_kind_name(a.kind)), {a}, RewardScheme::isolated()});

  const auto comp = RewardScheme::competitive();
  const auto coop = RewardScheme::cooperative();
  return {
      make("isolated", 10000, isolated),
      make("competitive6", 10000, {{"all6", six, comp}}),
      make("competitive4", 10000, {{"rl3_random", rl_random, comp}}),
      make("competitive3", 100000, {{"rl3", rl3, comp}}),
      make("coop6", 10000, {{"all6", six, coop}}),
      make("coop4", 10000, {{"rl3_random", rl_random, coop}}),
      make("coop3", 100000, {{"rl3", rl3, coop}}),
      make("teams2v2", 100000,
           {{"ql_vs_sarsa",
             {agent(K::kQLearning), agent(K::kQLearning), agent(K::kSarsa), agent(K::kSarsa)},
             RewardScheme::with_teams({{0, 1}, {2, 3}})}}),
  };
}

inline std::vector<std::string> scenario_names() {
  std::vector<std::string> names;
  for (const auto& s : builtin_scenarios()) names.push_back(s.name);
  return names;
}

inline ExperimentSpec find_scenario(const std::string& name, const ScenarioScale& scale = {},
                                    std::uint64_t master_seed = kDefaultMasterSeed) {
  for (auto& s : builtin_scenarios(scale, master_seed))
    if (s.name == name) return s;
  std::string valid;
  for (const auto& n : scenario_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw std::invalid_argument("unknown scenario '" + name + "' (valid: " + valid + ")");
}

// ---------------------------------------------------------------------------
// Parameter tuning on the isolated single-agent scenario.

struct ParamGrid {
  std::vector<double> alphas{0.1};
  std::vector<double> gammas{0.9};
  std::vector<double> epsilons{0.1};
  // Empty: beta follows alpha.
  std::vector<double> betas;

  std::vector<RLParams> points() const {
    std::vector<RLParams> out;
    const std::vector<double> no_beta{-1.0};
    for (double a : alphas)
      for (double g : gammas)
        for (double e : epsilons)
          for (double b : betas.empty() ? no_beta : betas)
            out.push_back({a, g, b < 0 ? a : b, e});
    return out;
  }
};

struct TuneEntry {
  RLParams params;
  double mean_score = 0.0;
};

struct TuneResult {
  RLParams best;
  double best_score = 0.0;
  std::vector<TuneEntry> entries;
};

// alpha = 0 is allowed here (a frozen learner) so grids can include it as a
// baseline, even though RLParams::validate rejects it for live agents.
inline TuneResult tune_parameters(AgentKind kind, const ParamGrid& grid, int sessions_per_point,
                                  std::int64_t iterations, std::uint64_t master_seed, int threads = 1) {
  if (!is_learner(kind)) throw std::invalid_argument("tune_parameters: not a learner");
  const auto points = grid.points();
  if (points.empty()) throw std::invalid_argument("tune_parameters: empty grid");
  if (sessions_per_point < 1) throw std::invalid_argument("tune_parameters: sessions_per_point < 1");
  std::vector<std::vector<double>> scores(points.size(),
                                          std::vector<double>(static_cast<std::size_t>(sessions_per_point)));
  std::vector<std::size_t> order(points.size() * static_cast<std::size_t>(sessions_per_point));
  std::iota(order.begin(), order.end(), 0);
  parallel_for(order, threads, [&](std::size_t job) {
    const std::size_t p = job / static_cast<std::size_t>(sessions_per_point);
    const std::size_t e = job % static_cast<std::size_t>(sessions_per_point);
    SessionConfig cfg;
    cfg.env_seed = env_seed_for(master_seed, static_cast<int>(e));
    cfg.iterations = iterations;
    cfg.record_stride = iterations;
    RLParams params = points[p];
    if (params.alpha == 0.0) {
      // A frozen learner never updates: it is the random tie-break policy.
      cfg.agents = {{AgentKind::kRandom, params, {}}};
    } else {
      cfg.agents = {{kind, params, {}}};
    }
    cfg.scheme = RewardScheme::isolated();
    scores[p][e] = run_session(cfg).final_scores[0];
  });

  TuneResult res;
  std::optional<std::size_t> best;
  for (std::size_t p = 0; p < points.size(); ++p) {
    double sum = 0.0;
    for (double s : scores[p]) sum += s;
    const double mean = sum / static_cast<double>(sessions_per_point);
    res.entries.push_back({points[p], mean});
    auto lex = [](const RLParams& x) { return std::tuple(x.alpha, x.gamma, x.epsilon, x.beta); };
    if (!best || mean > res.entries[*best].mean_score ||
        (mean == res.entries[*best].mean_score && lex(points[p]) < lex(points[*best])))
      best = p;
  }
  res.best = res.entries[*best].params;
  res.best_score = res.entries[*best].mean_score;
  return res;
}

// ---------------------------------------------------------------------------
// Team spread: best and worst member of each team by final score.

struct TeamSpread {
  double best = 0.0;
  double worst = 0.0;
  double spread() const { return best - worst; }
};

inline std::vector<TeamSpread> team_spread(const std::vector<double>& final_scores,
                                           const RewardScheme& scheme) {
  if (scheme.kind != RewardScheme::Kind::kTeams)
    throw std::invalid_argument("team_spread: scheme has no teams");
  scheme.validate(static_cast<int>(final_scores.size()));
  std::vector<TeamSpread> out;
  for (const auto& team : scheme.teams) {
    std::vector<double> s;
    for (int j : team) s.push_back(final_scores[static_cast<std::size_t>(j)]);
    std::sort(s.begin(), s.end());
    out.push_back({s.back(), s.front()});
  }
  return out;
}

}  // namespace lambdaenv
