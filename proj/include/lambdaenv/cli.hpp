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


// Command-line front end.
//
//   lambdaenv gen    --seed S --envs N [--out DIR]
//   lambdaenv run    --scenario NAME [--envs N] [--iters T] [--seed S] [--out DIR]
//   lambdaenv tune   --agent qlearning|sarsa|qv [--sessions N] [--iters T] ...
//   lambdaenv report --complexity --in DIR
//   lambdaenv serve  [--host H] [--port P]
//
// Every command also takes --config FILE, a JSON object whose keys mirror the
// long flag names ("scenario", "envs", "iters", "seed", ...). Flags given on
// the command line win over the file. LAMBDAENV_OUT, when set, replaces the
// default output directory (an explicit --out or "out" key still wins).

#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lambdaenv/complexity.hpp"
#include "lambdaenv/harness.hpp"
#include "lambdaenv/service.hpp"

namespace lambdaenv {

inline constexpr const char* kVersion = "0.1.0";

namespace cli {

namespace fs = std::filesystem;

class CliError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw CliError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw CliError("bad config file " + path + ": " + e.what());
  }
  if (!j.is_object()) throw CliError("config file " + path + " must hold a JSON object");
  return j;
}

// Flag value, else config-file value, else the default.
template <typename T>
T pick(const std::optional<T>& flag, const json& cfg, const char* key, T fallback) {
  if (flag) return *flag;
  if (cfg.contains(key)) {
    try {
      return cfg.at(key).get<T>();
    } catch (const json::exception& e) {
      throw CliError(std::string("config key '") + key + "': " + e.what());
    }
  }
  return fallback;
}

inline std::string output_dir(const std::optional<std::string>& flag, const json& cfg,
                              const std::string& fallback) {
  if (flag) return *flag;
  if (cfg.contains("out")) return cfg["out"].get<std::string>();
  if (const char* env = std::getenv("LAMBDAENV_OUT"); env && *env) return env;
  return fallback;
}

inline std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path);
  if (!os) throw CliError("cannot write " + path.string());
  return os;
}

inline DropRule parse_drop(const std::string& s) {
  if (s == "arrival") return DropRule::kArrival;
  if (s == "vacated") return DropRule::kVacated;
  throw CliError("unknown drop rule '" + s + "' (valid: arrival, vacated)");
}

inline const char* drop_name(DropRule d) { return d == DropRule::kArrival ? "arrival" : "vacated"; }

inline json params_json(const RLParams& p) {
  return {{"alpha", p.alpha}, {"gamma", p.gamma}, {"beta", p.beta}, {"epsilon", p.epsilon}};
}

inline json manifest_json(const ExperimentSpec& spec, int threads, const std::vector<std::string>& files) {
  json rosters = json::array();
  for (const auto& r : spec.rosters) {
    json agents = json::array();
    for (const auto& a : r.agents) {
      json entry = {{"kind", agent_kind_name(a.kind)}};
      if (is_learner(a.kind)) entry["params"] = params_json(a.params);
      agents.push_back(entry);
    }
    rosters.push_back({{"name", r.name}, {"scheme", format_scheme(r.scheme)}, {"agents", agents}});
  }
  return {{"tool", "lambdaenv"},
          {"version", kVersion},
          {"command", "run"},
          {"scenario", spec.name},
          {"envs", spec.n_envs},
          {"iters", spec.iterations},
          {"seed", spec.master_seed},
          {"stride", spec.record_stride},
          {"threads", threads},
          {"drop", drop_name(spec.env_options.drop)},
          {"observe_rewards", spec.env_options.observe_rewards},
          {"generator",
           {{"n_cells", spec.gen.n_cells},
            {"p_stop", spec.gen.p_stop},
            {"geometric_ratio", spec.gen.geometric_ratio},
            {"max_attempts", spec.gen.max_attempts}}},
          {"compressor", {{"library", "zlib"}, {"function", "compress2"}, {"level", kCompressionLevel}}},
          {"rosters", rosters},
          {"files", files}};
}

// Writes every output of one experiment into dir; returns the file names.
inline std::vector<std::string> write_experiment(const ExperimentSpec& spec, const ExperimentResult& res,
                                                 int threads, const fs::path& dir) {
  fs::create_directories(dir / "plot");
  std::vector<std::string> files{"curves.csv", "summary.csv", "finals.csv", "environments.csv"};
  {
    auto os = open_out(dir / "curves.csv");
    write_curves_csv(res, os);
  }
  {
    auto os = open_out(dir / "summary.csv");
    write_summary_csv(res, os);
  }
  {
    auto os = open_out(dir / "finals.csv");
    write_finals_csv(res, os);
  }
  {
    auto os = open_out(dir / "environments.csv");
    write_environments_csv(res, os);
  }
  for (const auto& rr : res.rosters)
    for (const auto& a : rr.agents) {
      const std::string name = "plot/" + rr.roster.name + "__" + a.agent + ".dat";
      auto os = open_out(dir / name);
      write_plot_data(a, os);
      files.push_back(name);
    }
  files.push_back("manifest.json");
  auto os = open_out(dir / "manifest.json");
  os << manifest_json(spec, threads, files).dump(2) << '\n';
  return files;
}

// Minimal CSV reader for the files this tool writes (no quoting).
inline std::vector<std::map<std::string, std::string>> read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw CliError("cannot open " + path.string());
  auto split = [](const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) out.push_back(cell);
    return out;
  };
  std::string line;
  if (!std::getline(in, line)) throw CliError(path.string() + " is empty");
  const auto header = split(line);
  std::vector<std::map<std::string, std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) throw CliError("malformed row in " + path.string() + ": " + line);
    std::map<std::string, std::string> row;
    for (std::size_t i = 0; i < header.size(); ++i) row[header[i]] = cells[i];
    rows.push_back(std::move(row));
  }
  return rows;
}

struct ComplexityFits {
  std::map<std::string, std::map<std::string, double>> scores;  // agent -> env -> score
  std::map<std::string, std::size_t> k;                         // env -> k_approx
  std::map<std::string, RegressionFit> fits;
};

// Agents are keyed "roster/agent" when the results hold more than one roster.
inline ComplexityFits complexity_from_dir(const fs::path& dir) {
  ComplexityFits out;
  for (const auto& row : read_csv(dir / "environments.csv"))
    out.k[row.at("env_id")] = std::stoull(row.at("k_approx"));
  const auto finals = read_csv(dir / "finals.csv");
  std::set<std::string> rosters;
  for (const auto& row : finals) rosters.insert(row.at("roster"));
  for (const auto& row : finals) {
    const std::string key =
        rosters.size() > 1 ? row.at("roster") + "/" + row.at("agent") : row.at("agent");
    out.scores[key][row.at("env_id")] = std::stod(row.at("score"));
  }
  out.fits = complexity_report(out.scores, out.k);
  return out;
}

inline int cmd_gen(std::uint64_t seed, int n_envs, const std::optional<std::string>& out_dir,
                   std::ostream& out) {
  if (n_envs < 1) throw CliError("--envs must be >= 1");
  std::ostringstream text;
  for (int e = 0; e < n_envs; ++e) {
    const std::uint64_t env_seed = env_seed_for(seed, e);
    const Environment env = make_environment(GenConfig{}, env_seed);
    text << "# " << env_id_for(e) << " seed=" << env_seed
         << " k_approx=" << approx_complexity(env.space, env.pattern) << '\n'
         << serialize(env.space, env.pattern);
  }
  if (!out_dir) {
    out << text.str();
    return 0;
  }
  fs::create_directories(*out_dir);
  auto os = open_out(fs::path(*out_dir) / "environments.txt");
  os << text.str();
  out << "wrote " << (fs::path(*out_dir) / "environments.txt").string() << '\n';
  return 0;
}

inline std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw CliError("bad number '" + item + "' in list '" + s + "'");
    }
  }
  if (out.empty()) throw CliError("empty list");
  return out;
}

}  // namespace cli

// Parses argv and runs the command. Returns the process exit status.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  using namespace cli;
  CLI::App app{"Multiagent Lambda-environment test bed"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> envs, threads, port;
  std::optional<std::int64_t> iters, stride;
  std::optional<std::string> out_dir, scenario, drop, host, in_dir, agent_name;
  std::optional<int> sessions, ttl;
  std::optional<std::string> alphas, gammas, epsilons;
  bool observe_rewards = false, complexity = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON file with default values for the flags");
  };

  auto* gen = app.add_subcommand("gen", "Generate environments and print their descriptions");
  common(gen);
  gen->add_option("--seed", seed, "master seed");
  gen->add_option("--envs", envs, "number of environments");
  gen->add_option("--out", out_dir, "write environments.txt here instead of stdout");

  auto* run = app.add_subcommand("run", "Run a builtin scenario and write CSVs");
  common(run);
  run->add_option("--scenario", scenario, "scenario name");
  run->add_option("--envs", envs, "number of environments (default 100)");
  run->add_option("--iters", iters, "iterations per session (default: scenario's)");
  run->add_option("--seed", seed, "master seed");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--threads", threads, "parallel sessions");
  run->add_option("--stride", stride, "curve sampling stride (default 100)");
  run->add_option("--drop", drop, "reward drop rule: arrival | vacated");
  run->add_flag("--observe-rewards", observe_rewards, "include cell rewards in observations");

  auto* tune = app.add_subcommand("tune", "Grid-search learner parameters on isolated sessions");
  common(tune);
  tune->add_option("--agent", agent_name, "qlearning | sarsa | qv");
  tune->add_option("--sessions", sessions, "sessions per grid point (default 1000)");
  tune->add_option("--iters", iters, "iterations per session (default 10000)");
  tune->add_option("--seed", seed, "master seed");
  tune->add_option("--alphas", alphas, "comma-separated learning rates");
  tune->add_option("--gammas", gammas, "comma-separated discount factors");
  tune->add_option("--epsilons", epsilons, "comma-separated exploration rates");
  tune->add_option("--threads", threads, "parallel sessions");
  tune->add_option("--out", out_dir, "write tune.csv here");

  auto* report = app.add_subcommand("report", "Analyse results of a previous run");
  common(report);
  report->add_flag("--complexity", complexity, "fit final scores against K^approx");
  report->add_option("--in", in_dir, "directory written by 'run'")->required();
  report->add_option("--out", out_dir, "where to write the report CSVs (default: --in)");

  auto* serve = app.add_subcommand("serve", "Serve interactive sessions over HTTP/JSON");
  common(serve);
  serve->add_option("--host", host, "bind address (default 127.0.0.1)");
  serve->add_option("--port", port, "port (default 8080)");
  serve->add_option("--ttl", ttl, "idle session expiry in seconds (default 3600)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    const json cfg = load_config(config_path);

    if (gen->parsed())
      return cmd_gen(pick(seed, cfg, "seed", kDefaultMasterSeed), pick(envs, cfg, "envs", 1),
                     out_dir ? out_dir
                             : (cfg.contains("out") ? std::optional(cfg["out"].get<std::string>())
                                                    : std::nullopt),
                     out);

    if (run->parsed()) {
      const std::string name = pick(scenario, cfg, "scenario", std::string());
      if (name.empty()) throw CliError("run: --scenario is required");
      ScenarioScale scale;
      if (envs || cfg.contains("envs")) scale.n_envs = pick(envs, cfg, "envs", 100);
      if (iters || cfg.contains("iters")) scale.iterations = pick(iters, cfg, "iters", std::int64_t{0});
      if (scale.n_envs && *scale.n_envs < 1) throw CliError("--envs must be >= 1");
      if (scale.iterations && *scale.iterations < 1) throw CliError("--iters must be >= 1");
      ExperimentSpec spec;
      try {
        spec = find_scenario(name, scale, pick(seed, cfg, "seed", kDefaultMasterSeed));
      } catch (const std::invalid_argument& e) {
        throw CliError(e.what());
      }
      spec.record_stride = pick(stride, cfg, "stride", std::int64_t{100});
      if (spec.record_stride < 1) throw CliError("--stride must be >= 1");
      spec.env_options.drop = parse_drop(pick(drop, cfg, "drop", std::string("arrival")));
      spec.env_options.observe_rewards =
          observe_rewards || cfg.value("observe_rewards", false);
      const int n_threads = pick(threads, cfg, "threads", 1);
      const fs::path dir = output_dir(out_dir, cfg, "results/" + name);
      const auto res = run_experiment(spec, {std::max(1, n_threads), {}});
      write_experiment(spec, res, n_threads, dir);
      for (const auto& rr : res.rosters)
        for (const auto& a : rr.agents) {
          char buf[96];
          std::snprintf(buf, sizeof buf, "%+.4f (sd %.4f)", a.mean_final, a.std_final);
          out << spec.name << ' ' << rr.roster.name << ' ' << a.agent << ' ' << buf << '\n';
        }
      out << "wrote " << dir.string() << '\n';
      return 0;
    }

    if (tune->parsed()) {
      const AgentKind kind = parse_agent_kind(pick(agent_name, cfg, "agent", std::string("qlearning")));
      if (!is_learner(kind)) throw CliError("tune: --agent must be qlearning, sarsa or qv");
      ParamGrid grid;
      grid.alphas = parse_list(pick(alphas, cfg, "alphas", std::string("0.05,0.1,0.2,0.4")));
      grid.gammas = parse_list(pick(gammas, cfg, "gammas", std::string("0.5,0.75,0.9,0.95")));
      grid.epsilons = parse_list(pick(epsilons, cfg, "epsilons", std::string("0.01,0.05,0.1,0.2")));
      const auto res = tune_parameters(kind, grid, pick(sessions, cfg, "sessions", 1000),
                                       pick(iters, cfg, "iters", std::int64_t{10000}),
                                       pick(seed, cfg, "seed", kDefaultMasterSeed),
                                       std::max(1, pick(threads, cfg, "threads", 1)));
      std::ostringstream csv;
      csv << "agent,alpha,gamma,epsilon,beta,mean_score\n";
      char buf[160];
      for (const auto& e : res.entries) {
        std::snprintf(buf, sizeof buf, "%g,%g,%g,%g,%.17g", e.params.alpha, e.params.gamma,
                      e.params.epsilon, e.params.beta, e.mean_score);
        csv << agent_kind_name(kind) << ',' << buf << '\n';
      }
      if (auto dir = out_dir ? out_dir
                             : (cfg.contains("out") ? std::optional(cfg["out"].get<std::string>())
                                                    : std::nullopt)) {
        fs::create_directories(*dir);
        auto os = open_out(fs::path(*dir) / "tune.csv");
        os << csv.str();
      } else {
        out << csv.str();
      }
      std::snprintf(buf, sizeof buf, "best %s alpha=%g gamma=%g epsilon=%g beta=%g score=%.5f",
                    std::string(agent_kind_name(kind)).c_str(), res.best.alpha, res.best.gamma,
                    res.best.epsilon, res.best.beta, res.best_score);
      out << buf << '\n';
      return 0;
    }

    if (report->parsed()) {
      if (!complexity) throw CliError("report: nothing to do (try --complexity)");
      const fs::path in = *in_dir;
      const fs::path dir = out_dir ? fs::path(*out_dir) : in;
      const auto result = complexity_from_dir(in);
      fs::create_directories(dir);
      auto rep = open_out(dir / "complexity_report.csv");
      rep << "agent,env_id,k_approx,score\n";
      char buf[160];
      for (const auto& [agent, per_env] : result.scores)
        for (const auto& [env, score] : per_env) {
          std::snprintf(buf, sizeof buf, "%zu,%.17g", result.k.at(env), score);
          rep << agent << ',' << env << ',' << buf << '\n';
        }
      auto fits = open_out(dir / "complexity_fits.csv");
      fits << "agent,slope,intercept,r,n\n";
      for (const auto& [agent, f] : result.fits) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%zu", f.slope, f.intercept, f.r, f.n);
        fits << agent << ',' << buf << '\n';
        std::snprintf(buf, sizeof buf, "slope=%+.6f r=%+.4f n=%zu", f.slope, f.r, f.n);
        out << agent << ' ' << buf << '\n';
      }
      return 0;
    }

    if (serve->parsed()) {
      SessionStore store(std::chrono::seconds(pick(ttl, cfg, "ttl", 3600)));
      httplib::Server server;
      install_routes(server, store);
      const std::string h = pick(host, cfg, "host", std::string("127.0.0.1"));
      const int p = pick(port, cfg, "port", 8080);
      out << "listening on http://" << h << ':' << p << std::endl;
      if (!server.listen(h, p)) throw CliError("cannot listen on " + h + ":" + std::to_string(p));
      return 0;
    }
  } catch (const CliError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace lambdaenv
