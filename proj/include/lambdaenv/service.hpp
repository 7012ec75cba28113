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


// One interactive session per client over HTTP/JSON: a human (or any
// external driver) plays one common-agent slot of a scenario roster while
// the other slots run their usual policies.
//
//   POST /sessions                 {scenario, seed, env_index, slot, roster,
//                                   iterations, debug} -> {id, observation, ...}
//   POST /sessions/{id}/action     {action}            -> step payload
//   GET  /sessions/{id}/summary                        -> final scores
//   GET  /scenarios                                    -> scenario catalogue
//
// Observations hide identities by default: Good and Evil are shown as two
// neutral shapes (which is which depends on the environment), the caller's
// agent as "you" and every other agent as "agent". debug=true (in the create
// body or as a query parameter) shows the raw markers and cell rewards.

#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "lambdaenv/complexity.hpp"
#include "lambdaenv/harness.hpp"

namespace lambdaenv {

using json = nlohmann::json;

// Error carrying the HTTP status it maps to.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, const std::string& what) : std::runtime_error(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

struct CreateRequest {
  std::string scenario = "isolated";
  std::uint64_t seed = kDefaultMasterSeed;
  int env_index = 0;
  int slot = 0;
  std::string roster;  // empty: the scenario's first roster
  std::optional<std::int64_t> iterations;
  bool debug = false;

  static CreateRequest from_json(const json& j) {
    CreateRequest r;
    r.scenario = j.value("scenario", r.scenario);
    r.seed = j.value("seed", r.seed);
    r.env_index = j.value("env_index", r.env_index);
    r.slot = j.value("slot", r.slot);
    r.roster = j.value("roster", r.roster);
    if (j.contains("iterations") && !j["iterations"].is_null())
      r.iterations = j["iterations"].get<std::int64_t>();
    r.debug = j.value("debug", r.debug);
    return r;
  }
};

// The session configuration a create request resolves to. The human slot is
// an external agent; everything else is the roster's own policy.
inline SessionConfig resolve_session(const CreateRequest& req, std::string* roster_name = nullptr) {
  ExperimentSpec spec;
  try {
    spec = find_scenario(req.scenario, {std::nullopt, req.iterations}, req.seed);
  } catch (const std::invalid_argument& e) {
    throw ServiceError(400, e.what());
  }
  const RosterSpec* roster = &spec.rosters.front();
  if (!req.roster.empty()) {
    roster = nullptr;
    for (const auto& r : spec.rosters)
      if (r.name == req.roster) roster = &r;
    if (!roster) throw ServiceError(400, "unknown roster '" + req.roster + "'");
  }
  if (req.slot < 0 || req.slot >= static_cast<int>(roster->agents.size()))
    throw ServiceError(400, "slot " + std::to_string(req.slot) + " out of range for roster '" +
                                roster->name + "'");
  if (req.env_index < 0) throw ServiceError(400, "env_index must be >= 0");
  if (req.iterations && *req.iterations < 1) throw ServiceError(400, "iterations must be >= 1");
  SessionConfig cfg;
  cfg.env_seed = env_seed_for(req.seed, req.env_index);
  cfg.iterations = spec.iterations;
  cfg.agents = roster->agents;
  cfg.agents[static_cast<std::size_t>(req.slot)] = {AgentKind::kExternal, {}, {}};
  cfg.scheme = roster->scheme;
  cfg.record_stride = spec.record_stride;
  cfg.gen = spec.gen;
  cfg.env_options = spec.env_options;
  if (roster_name) *roster_name = roster->name;
  return cfg;
}

// Observation as shown to the human in slot `slot`.
inline json observation_json(const Session& s, int slot, bool debug) {
  const Observation& obs = s.observations()[static_cast<std::size_t>(slot)];
  // Which neutral shape stands for Good is fixed per environment.
  const bool swap = (s.config().env_seed >> 7) & 1;
  const char* good_shape = swap ? "triangle" : "square";
  const char* evil_shape = swap ? "square" : "triangle";
  json cells = json::array();
  for (const auto& markers : obs.occupants) {
    json cell = json::array();
    for (const Marker& m : markers) {
      if (debug) {
        cell.push_back(m.str());
      } else if (m.kind == Marker::Kind::kGood) {
        cell.push_back(good_shape);
      } else if (m.kind == Marker::Kind::kEvil) {
        cell.push_back(evil_shape);
      } else {
        cell.push_back(m.agent == slot ? "you" : "agent");
      }
    }
    cells.push_back(std::move(cell));
  }
  json out = {{"self_cell", obs.self_cell},
              {"cells", std::move(cells)},
              {"available_actions", obs.available_actions},
              {"last_reward", obs.last_reward}};
  if (debug) out["rewards"] = s.state().reward_field;
  return out;
}

inline json space_json(const Space& space) {
  json rows = json::array();
  for (Cell c = 0; c < space.n_cells(); ++c) {
    json row = json::array();
    for (Action a = 0; a < space.n_actions(); ++a) {
      const Cell t = space.transition(c, a);
      row.push_back(t == kVoid ? json(nullptr) : json(t));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// Thread-safe store of live sessions. Every call locks the store briefly to
// find the entry, then the entry itself for the duration of the operation,
// so steps of one session are serialized while sessions run concurrently.
class SessionStore {
 public:
  using Clock = std::chrono::steady_clock;

  explicit SessionStore(std::chrono::seconds idle_ttl = std::chrono::hours(1),
                        std::function<Clock::time_point()> now = Clock::now)
      : idle_ttl_(idle_ttl), now_(std::move(now)), ids_(std::random_device{}()) {}

  // Returns {id, payload}.
  std::pair<std::string, json> create(const CreateRequest& req) {
    expire_idle();
    auto entry = std::make_shared<Entry>();
    entry->cfg = resolve_session(req, &entry->roster);
    entry->req = req;
    entry->session = std::make_unique<Session>(entry->cfg);
    entry->last_used = now_();
    const Environment& env = entry->session->environment();
    entry->complexity = complexity_record(env_id_for(req.env_index), env);
    std::string id;
    {
      std::lock_guard lock(mu_);
      do {
        id = make_id();
      } while (live_.count(id) || done_.count(id));
      live_.emplace(id, entry);
    }
    std::lock_guard lock(entry->mu);
    json payload = {{"id", id},
                    {"scenario", req.scenario},
                    {"roster", entry->roster},
                    {"slot", req.slot},
                    {"agents", entry->session->labels()},
                    {"iterations", entry->cfg.iterations},
                    {"n_cells", env.space.n_cells()},
                    {"n_actions", env.space.n_actions()},
                    {"space", space_json(env.space)},
                    {"observation", observation_json(*entry->session, req.slot, req.debug)},
                    {"iteration", 0},
                    {"finished", false}};
    return {id, payload};
  }

  json post_action(const std::string& id, const json& action, std::optional<bool> debug = {}) {
    auto entry = find_live(id);
    std::lock_guard lock(entry->mu);
    Session& s = *entry->session;
    if (s.finished()) throw ServiceError(409, "session " + id + " is finished");
    if (!action.is_number_integer()) throw ServiceError(400, "action must be an integer");
    const auto a = action.get<std::int64_t>();
    if (a < 0 || a >= s.environment().space.n_actions())
      throw ServiceError(400, "action " + std::to_string(a) + " out of range");
    s.advance(static_cast<Action>(a));
    entry->last_used = now_();
    const auto slot = static_cast<std::size_t>(entry->req.slot);
    const bool show = debug.value_or(entry->req.debug);
    json payload = {{"observation", observation_json(s, entry->req.slot, show)},
                    {"reward", s.last_signal()[slot]},
                    {"collected", s.last_collected()[slot]},
                    {"avg_reward", s.running_average(slot)},
                    {"avg_signal", s.running_signal_average(slot)},
                    {"iteration", s.iteration()},
                    {"finished", s.finished()}};
    if (s.finished()) entry->summary = summarize(id, *entry);
    return payload;
  }

  json summary(const std::string& id) {
    {
      std::lock_guard lock(mu_);
      if (auto it = done_.find(id); it != done_.end()) return it->second;
    }
    auto entry = find_live(id);
    std::lock_guard lock(entry->mu);
    if (!entry->summary) throw ServiceError(409, "session " + id + " is not finished");
    return *entry->summary;
  }

  // Drops sessions idle for longer than the ttl. Summaries of finished
  // sessions are kept.
  std::size_t expire_idle() {
    const auto now = now_();
    std::lock_guard lock(mu_);
    std::size_t dropped = 0;
    for (auto it = live_.begin(); it != live_.end();) {
      std::lock_guard entry_lock(it->second->mu);
      if (now - it->second->last_used > idle_ttl_) {
        if (it->second->summary) done_.emplace(it->first, *it->second->summary);
        it = live_.erase(it);
        ++dropped;
      } else {
        ++it;
      }
    }
    return dropped;
  }

  std::size_t live_count() const {
    std::lock_guard lock(mu_);
    return live_.size();
  }

 private:
  struct Entry {
    std::mutex mu;
    CreateRequest req;
    std::string roster;
    SessionConfig cfg;
    std::unique_ptr<Session> session;
    ComplexityRecord complexity;
    Clock::time_point last_used;
    std::optional<json> summary;
  };

  std::shared_ptr<Entry> find_live(const std::string& id) {
    std::lock_guard lock(mu_);
    auto it = live_.find(id);
    if (it == live_.end()) {
      if (done_.count(id)) throw ServiceError(409, "session " + id + " is finished");
      throw ServiceError(404, "unknown session " + id);
    }
    return it->second;
  }

  static json summarize(const std::string& id, const Entry& e) {
    const SessionResult r = e.session->result();
    const auto slot = static_cast<std::size_t>(e.req.slot);
    json agents = json::array();
    for (std::size_t j = 0; j < r.final_scores.size(); ++j)
      agents.push_back({{"slot", j},
                        {"agent", e.session->labels()[j]},
                        {"score", r.final_scores[j]},
                        {"signal", r.final_signals[j]}});
    return {{"id", id},
            {"scenario", e.req.scenario},
            {"roster", e.roster},
            {"slot", e.req.slot},
            {"seed", e.req.seed},
            {"iterations", e.cfg.iterations},
            {"score", r.final_scores[slot]},
            {"signal", r.final_signals[slot]},
            {"agents", std::move(agents)},
            {"env",
             {{"env_id", e.complexity.env_id},
              {"env_index", e.req.env_index},
              {"env_seed", e.cfg.env_seed},
              {"k_approx", e.complexity.k_approx},
              {"serialized_len", e.complexity.serialized_len}}}};
  }

  std::string make_id() {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(ids_.next()));
    return buf;
  }

  std::chrono::seconds idle_ttl_;
  std::function<Clock::time_point()> now_;
  mutable std::mutex mu_;
  Rng ids_;
  std::map<std::string, std::shared_ptr<Entry>> live_;
  std::map<std::string, json> done_;
};

inline json scenarios_json() {
  json out = json::array();
  for (const auto& s : builtin_scenarios()) {
    json rosters = json::array();
    for (const auto& r : s.rosters)
      rosters.push_back(
          {{"name", r.name}, {"agents", agent_labels(r.agents)}, {"scheme", format_scheme(r.scheme)}});
    out.push_back({{"name", s.name},
                   {"n_envs", s.n_envs},
                   {"iterations", s.iterations},
                   {"rosters", std::move(rosters)}});
  }
  return out;
}

// Registers the protocol routes on an httplib server.
inline void install_routes(httplib::Server& server, SessionStore& store) {
  auto send = [](httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  };
  auto guarded = [send](auto fn) {
    return [fn, send](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const ServiceError& e) {
        send(res, e.status(), {{"error", e.what()}});
      } catch (const json::exception& e) {
        send(res, 400, {{"error", std::string("bad request: ") + e.what()}});
      } catch (const std::exception& e) {
        send(res, 500, {{"error", e.what()}});
      }
    };
  };
  auto debug_param = [](const httplib::Request& req) -> std::optional<bool> {
    if (!req.has_param("debug")) return std::nullopt;
    const std::string v = req.get_param_value("debug");
    return v == "true" || v == "1";
  };
  auto body_json = [](const httplib::Request& req) {
    return req.body.empty() ? json::object() : json::parse(req.body);
  };

  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.status = 204;
  });
  server.Get("/scenarios", guarded([send](const httplib::Request&, httplib::Response& res) {
               send(res, 200, scenarios_json());
             }));
  server.Post("/sessions",
              guarded([&store, send, debug_param, body_json](const httplib::Request& req,
                                                            httplib::Response& res) {
                CreateRequest cr = CreateRequest::from_json(body_json(req));
                if (auto d = debug_param(req)) cr.debug = *d;
                send(res, 201, store.create(cr).second);
              }));
  server.Post("/sessions/:id/action",
              guarded([&store, send, debug_param, body_json](const httplib::Request& req,
                                                            httplib::Response& res) {
                const json body = body_json(req);
                if (!body.contains("action")) throw ServiceError(400, "missing 'action'");
                send(res, 200,
                     store.post_action(req.path_params.at("id"), body["action"], debug_param(req)));
              }));
  server.Get("/sessions/:id/summary",
             guarded([&store, send](const httplib::Request& req, httplib::Response& res) {
               send(res, 200, store.summary(req.path_params.at("id")));
             }));
}

}  // namespace lambdaenv
