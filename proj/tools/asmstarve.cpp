// Copyright 2026 The asmstarve Authors
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

// asmstarve: check, analyze, run, explore, and monitor DASM models.
//
// Exit codes: 0 clean, 1 findings, 2 usage, parse, or validation errors.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "asmstarve/analysis.hpp"
#include "asmstarve/exec.hpp"
#include "asmstarve/explore.hpp"
#include "asmstarve/io.hpp"
#include "asmstarve/lang.hpp"
#include "asmstarve/machine.hpp"
#include "asmstarve/monitor.hpp"

namespace fs = std::filesystem;
using namespace asmstarve;  // NOLINT(build/namespaces)

namespace {

constexpr int kClean = 0;
constexpr int kFindings = 1;
constexpr int kError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Loaded {
  std::unique_ptr<Machine> machine;
  EnvironmentScript env;
};

/// Parses and validates, printing diagnostics. Returns nullopt on errors.
std::optional<ParseResult> load_checked(const std::string& path) {
  ParseResult r = load_model_file(path);
  for (const auto& d : r.diagnostics) std::cerr << d.format(path) << "\n";
  if (!r.ok()) return std::nullopt;
  return r;
}

Loaded load(const std::string& path, const std::string& env_path) {
  auto parsed = load_checked(path);
  if (!parsed) throw UsageError("model has errors");
  Loaded out;
  out.machine = std::make_unique<Machine>(std::move(*parsed->model));
  std::string env_file = env_path;
  if (env_file.empty() && out.machine->model().environment) {
    env_file = (fs::path(path).parent_path() / *out.machine->model().environment).string();
  }
  if (!env_file.empty()) out.env = load_environment(*out.machine, env_file);
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct Options {
  std::string model;
  std::string format = "text";
  std::string env;
  std::string mode = "syntactic";
  std::size_t bound = 100000;
  std::string scheduler = "round-robin";
  std::uint64_t seed = 0;
  std::string script;
  std::size_t steps = 100;
  std::string trace_out;
  std::size_t depth = 12;
  std::string check = "all";
  std::size_t max_states = 200000;
  std::string trace;
  std::string predicate;
  std::size_t threshold = 20;
  bool global_steps = false;
};

int cmd_check(const Options& o) {
  auto parsed = load_checked(o.model);
  if (!parsed) return kError;
  if (o.format == "json") {
    nlohmann::ordered_json j{{"model", parsed->model->name}, {"errors", 0}};
    j["warnings"] = parsed->diagnostics.size();
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << o.model << ": ok (" << parsed->diagnostics.size() << " warning(s))\n";
  }
  return kClean;
}

int cmd_analyze(const Options& o) {
  Loaded l = load(o.model, o.env);
  AnalysisOptions ao;
  ao.mode = o.mode == "exploration" ? Method::kExploration : Method::kSyntactic;
  ao.bound = o.bound;
  ao.env = l.env;
  VulnerabilityReport r = certify_starvation_free(*l.machine, ao);
  if (o.format == "json") {
    std::cout << report_to_json(r).dump(2) << "\n";
  } else {
    std::cout << report_to_text(r);
  }
  return r.certificate ? kClean : kFindings;
}

int cmd_run(const Options& o) {
  Loaded l = load(o.model, o.env);
  Scheduler s;
  if (o.scheduler == "random") {
    s = Scheduler::random(o.seed);
  } else if (o.scheduler == "scripted") {
    s = Scheduler::scripted(split(o.script, ','));
    if (s.script.empty()) throw UsageError("--scheduler scripted needs --script a1,a2,...");
  }
  Trace t = run_distributed(*l.machine, s, l.env, o.steps);
  std::string lines = trace_to_jsonl(*l.machine, t);
  if (!o.trace_out.empty()) {
    std::ofstream out(o.trace_out, std::ios::binary);
    if (!out) throw UsageError("cannot write '" + o.trace_out + "'");
    out << lines;
  } else {
    std::cout << lines;
  }
  std::ostream& summary = o.trace_out.empty() ? std::cerr : std::cout;
  if (o.format == "json") {
    nlohmann::ordered_json j{{"steps", t.steps.size()}, {"termination", to_string(t.termination)}};
    if (t.clash) j["clash"] = t.clash->first.location.to_string();
    summary << j.dump() << "\n";
  } else {
    summary << t.steps.size() << " step(s), stopped: " << to_string(t.termination);
    if (t.clash) {
      summary << " (" << t.clash->first.to_string() << " vs " << t.clash->second.to_string() << ")";
    }
    summary << "\n";
  }
  return t.termination == Termination::kInconsistent ? kFindings : kClean;
}

int cmd_explore(const Options& o) {
  Loaded l = load(o.model, o.env);
  const Machine& m = *l.machine;
  ExploreOptions eo{o.depth, o.max_states};
  StateGraph g = enumerate_interleavings(m, l.env, eo);
  const bool all = o.check == "all";
  bool findings = g.truncated;
  nlohmann::ordered_json j{{"states", g.nodes.size()}, {"edges", g.edges.size()}, {"truncated", g.truncated}};
  std::ostringstream text;
  text << g.nodes.size() << " state(s), " << g.edges.size() << " move(s) explored to depth " << o.depth << "\n";
  if (g.truncated) text << "truncated: state budget of " << o.max_states << " exceeded\n";

  if (all || o.check == "consistency") {
    j["inconsistent_moves"] = g.inconsistencies.size();
    if (g.inconsistencies.empty()) {
      text << "no inconsistent update sets\n";
    } else {
      findings = true;
      for (const auto& inc : g.inconsistencies) {
        text << "inconsistent move of " << m.agents()[inc.agent].id.to_string() << ": "
             << inc.clash.first.to_string() << " vs " << inc.clash.second.to_string() << "\n";
      }
    }
  }
  if (all || o.check == "deadlock") {
    auto terminal = g.terminal_nodes();
    j["deadlocks"] = terminal.size();
    if (terminal.empty()) {
      text << "no deadlocked states\n";
    } else {
      findings = true;
      text << terminal.size() << " state(s) where no agent can move, e.g. "
           << g.nodes[terminal.front()].state.to_string() << "\n";
    }
  }
  if (all || o.check == "coherence") {
    CoherenceSummary c = check_graph_coherence(m, g);
    j["independent_pairs"] = c.independent_pairs;
    j["dependent_pairs"] = c.dependent_pairs;
    j["coherence_violations"] = c.violations.size();
    j["order_dependent_pairs"] = c.order_dependent.size();
    text << c.independent_pairs << " independent move pair(s), all commuting: "
         << (c.violations.empty() ? "yes" : "no") << "\n";
    text << c.order_dependent.size() << " order-dependent pair(s) among " << c.dependent_pairs << " dependent\n";
    for (const auto& f : c.order_dependent) {
      text << "  order-dependent: " << m.agents()[f.a].id.to_string() << " and " << m.agents()[f.b].id.to_string()
           << " in " << g.nodes[f.node].state.to_string() << "\n";
      break;
    }
    if (!c.violations.empty() || !c.order_dependent.empty()) findings = true;
  }
  if (o.check != "all" && o.check != "consistency" && o.check != "deadlock" && o.check != "coherence") {
    throw UsageError("unknown check '" + o.check + "'");
  }
  if (o.format == "json") {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << text.str();
  }
  return findings ? kFindings : kClean;
}

int cmd_monitor(const Options& o) {
  std::ifstream in(o.trace);
  if (!in) throw UsageError("cannot open trace '" + o.trace + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  AnnotatedTrace at;
  {
    std::istringstream lines(buffer.str());
    at = annotated_trace_from_jsonl(lines);
  }
  if (!o.model.empty()) {
    Loaded l = load(o.model, o.env);
    std::istringstream lines(buffer.str());
    Trace t = trace_from_jsonl(*l.machine, lines);
    AnnotatedTrace replayed = annotate_trace(*l.machine, t);
    for (std::size_t i = 0; i < at.rows.size() && i < replayed.rows.size(); ++i) {
      if (at.rows[i].predicates != replayed.rows[i].predicates) {
        throw UsageError("trace predicates disagree with the model at step " + std::to_string(at.rows[i].step));
      }
    }
  }
  std::vector<std::string> predicates;
  if (!o.predicate.empty()) {
    predicates.push_back(o.predicate);
  } else {
    std::set<std::string> names;
    for (const auto& row : at.rows) {
      for (const auto& [agent, values] : row.predicates) {
        for (const auto& [p, v] : values) names.insert(p);
      }
    }
    predicates.assign(names.begin(), names.end());
  }
  MonitorOptions mo{o.global_steps};
  std::vector<Alarm> alarms;
  for (const auto& p : predicates) {
    auto found = detect_cyclical_return(at, p, o.threshold, mo);
    alarms.insert(alarms.end(), found.begin(), found.end());
  }
  if (o.format == "json") {
    nlohmann::ordered_json j;
    j["alarms"] = alarms_to_json(alarms);
    nlohmann::ordered_json progress = nlohmann::ordered_json::array();
    for (const auto& e : progress_summary(at, mo)) {
      progress.push_back({{"agent", e.agent}, {"predicate", e.predicate}, {"longest_run", e.longest_run}, {"flips", e.flips}});
    }
    j["progress"] = progress;
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& a : alarms) {
      std::cout << "alarm: " << a.agent << " kept " << a.predicate << " for " << a.length << " move(s) from step "
                << a.start << " (threshold " << a.threshold << "); suspected starvation\n";
    }
    if (alarms.empty()) std::cout << "no cyclical return at threshold " << o.threshold << "\n";
  }
  return alarms.empty() ? kClean : kFindings;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Starvation analysis for distributed abstract state machines"};
  app.require_subcommand(1);
  Options o;
  const std::vector<std::string> formats{"text", "json"};

  auto* check = app.add_subcommand("check", "Parse and validate a model");
  check->add_option("model", o.model, "Model file")->required();
  check->add_option("--format", o.format)->check(CLI::IsMember(formats));

  auto* analyze = app.add_subcommand("analyze", "Report risky functions, predicates, and vulnerable rules");
  analyze->add_option("model", o.model, "Model file")->required();
  analyze->add_option("--mode", o.mode)->check(CLI::IsMember({"syntactic", "exploration"}));
  analyze->add_option("--bound", o.bound, "State budget for exploration mode");
  analyze->add_option("--env", o.env, "Environment script (defaults to the model's)");
  analyze->add_option("--format", o.format)->check(CLI::IsMember(formats));

  auto* run = app.add_subcommand("run", "Execute one interleaving and write its trace");
  run->add_option("model", o.model, "Model file")->required();
  run->add_option("--scheduler", o.scheduler)->check(CLI::IsMember({"round-robin", "random", "scripted"}));
  run->add_option("--seed", o.seed);
  run->add_option("--script", o.script, "Comma-separated agent names for --scheduler scripted");
  run->add_option("--steps", o.steps);
  run->add_option("--env", o.env, "Environment script (defaults to the model's)");
  run->add_option("--trace-out", o.trace_out, "Trace file (JSON lines); stdout if absent");
  run->add_option("--format", o.format)->check(CLI::IsMember(formats));

  auto* explore = app.add_subcommand("explore", "Enumerate interleavings and check them");
  explore->add_option("model", o.model, "Model file")->required();
  explore->add_option("--depth", o.depth);
  explore->add_option("--check", o.check)->check(CLI::IsMember({"consistency", "deadlock", "coherence", "all"}));
  explore->add_option("--max-states", o.max_states);
  explore->add_option("--env", o.env, "Environment script (defaults to the model's)");
  explore->add_option("--format", o.format)->check(CLI::IsMember(formats));

  auto* monitor = app.add_subcommand("monitor", "Detect cyclical return in a trace");
  monitor->add_option("trace", o.trace, "Trace file written by run")->required();
  monitor->add_option("--predicate", o.predicate, "Predicate to watch (default: all)");
  monitor->add_option("--threshold", o.threshold)->check(CLI::PositiveNumber);
  monitor->add_option("--model", o.model, "Model to replay the trace against");
  monitor->add_option("--env", o.env);
  monitor->add_flag("--global-steps", o.global_steps, "Count global steps instead of the agent's own moves");
  monitor->add_option("--format", o.format)->check(CLI::IsMember(formats));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kError;
  }

  try {
    if (*check) return cmd_check(o);
    if (*analyze) return cmd_analyze(o);
    if (*run) return cmd_run(o);
    if (*explore) return cmd_explore(o);
    if (*monitor) return cmd_monitor(o);
  } catch (const UsageError& e) {
    std::cerr << "asmstarve: " << e.what() << "\n";
  } catch (const IoError& e) {
    std::cerr << "asmstarve: " << e.what() << "\n";
  } catch (const EvalError& e) {
    std::cerr << "asmstarve: evaluation error: " << e.what() << "\n";
  } catch (const std::invalid_argument& e) {
    std::cerr << "asmstarve: " << e.what() << "\n";
  }
  return kError;
}
