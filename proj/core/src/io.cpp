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

#include "asmstarve/io.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

namespace asmstarve {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json value_to_json(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::kUndef:
      return nullptr;
    case Value::Kind::kBool:
      return v.as_bool();
    case Value::Kind::kInt:
      return v.as_int();
    case Value::Kind::kAtom:
      return v.as_atom().name;
    case Value::Kind::kSeq: {
      ordered_json arr = ordered_json::array();
      for (const auto& item : v.as_seq()) arr.push_back(value_to_json(item));
      return arr;
    }
  }
  return nullptr;
}

Value value_from_json(const Machine& m, const json& j) {
  if (j.is_null()) return Value::undef();
  if (j.is_boolean()) return Value::boolean(j.get<bool>());
  if (j.is_number_integer()) return Value::integer(j.get<std::int64_t>());
  if (j.is_string()) {
    auto atom = m.resolve_atom(j.get<std::string>());
    if (!atom) throw IoError("unknown element '" + j.get<std::string>() + "'");
    return *atom;
  }
  if (j.is_array()) {
    std::vector<Value> items;
    for (const auto& item : j) items.push_back(value_from_json(m, item));
    return Value::sequence(std::move(items));
  }
  throw IoError("unsupported value " + j.dump());
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

Value parse_scalar(const Machine& m, const std::string& text) {
  if (text == "true") return Value::boolean(true);
  if (text == "false") return Value::boolean(false);
  if (text == "undef") return Value::undef();
  std::int64_t i = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), i);
  if (ec == std::errc() && ptr == text.data() + text.size()) return Value::integer(i);
  auto atom = m.resolve_atom(text);
  if (!atom) throw IoError("unknown element '" + text + "'");
  return *atom;
}


ordered_json updates_to_json(const UpdateSet& updates) {
  ordered_json arr = ordered_json::array();
  for (const auto& u : updates) {
    arr.push_back(ordered_json{{"location", u.location.to_string()}, {"value", value_to_json(u.value)}});
  }
  return arr;
}

UpdateSet updates_from_json(const Machine& m, const json& arr) {
  UpdateSet out;
  if (!arr.is_array()) throw IoError("update list must be an array");
  for (const auto& u : arr) {
    if (!u.is_object() || !u.contains("location")) throw IoError("malformed update " + u.dump());
    out.insert({parse_location(m, u.at("location").get<std::string>()),
                value_from_json(m, u.contains("value") ? u.at("value") : json(nullptr))});
  }
  return out;
}

}  // namespace

Location parse_location(const Machine& m, std::string_view text) {
  std::string s = trim(text);
  Location loc;
  std::size_t at = s.rfind('@');
  if (at != std::string::npos && s.find(')', at) == std::string::npos) {
    loc.owner = parse_scalar(m, trim(s.substr(at + 1)));
    s = trim(s.substr(0, at));
  }
  std::size_t open = s.find('(');
  std::string name = trim(s.substr(0, open));
  if (name.empty()) throw IoError("malformed location '" + std::string(text) + "'");
  loc.symbol = name;
  const auto* fn = m.model().find_function(name);
  if (!fn) throw IoError("unknown function symbol '" + name + "'");
  if (open != std::string::npos) {
    if (s.back() != ')') throw IoError("malformed location '" + std::string(text) + "'");
    std::string inner = s.substr(open + 1, s.size() - open - 2);
    if (!trim(inner).empty()) {
      std::stringstream ss(inner);
      std::string arg;
      while (std::getline(ss, arg, ',')) loc.args.push_back(parse_scalar(m, trim(arg)));
    }
  }
  if (loc.args.size() != fn->arity()) {
    throw IoError("location '" + std::string(text) + "' has " + std::to_string(loc.args.size()) +
                  " argument(s), '" + name + "' expects " + std::to_string(fn->arity()));
  }
  if (fn->local && !loc.owner) throw IoError("agent-local location '" + std::string(text) + "' needs @agent");
  return loc;
}

EnvironmentScript environment_from_json(const Machine& m, const json& j) {
  if (!j.is_object()) throw IoError("environment script must be an object keyed by step");
  EnvironmentScript env;
  for (const auto& [key, batch] : j.items()) {
    std::size_t step = 0;
    auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), step);
    if (ec != std::errc() || ptr != key.data() + key.size()) throw IoError("step key '" + key + "' is not a number");
    if (!batch.is_object()) throw IoError("batch for step " + key + " must be an object");
    UpdateSet& out = env.batches[step];
    for (const auto& [loc, value] : batch.items()) out.insert({parse_location(m, loc), value_from_json(m, value)});
  }
  auto errors = validate_script(m, env);
  if (!errors.empty()) throw IoError(errors.front());
  return env;
}

ordered_json environment_to_json(const EnvironmentScript& env) {
  ordered_json j = ordered_json::object();
  for (const auto& [step, batch] : env.batches) {
    ordered_json b = ordered_json::object();
    for (const auto& u : batch) b[u.location.to_string()] = value_to_json(u.value);
    j[std::to_string(step)] = b;
  }
  return j;
}

EnvironmentScript load_environment(const Machine& m, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open environment script '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
  return environment_from_json(m, j);
}

std::string trace_to_jsonl(const Machine& m, const Trace& t) {
  std::string out;
  auto states = replay_states(t);
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const auto& s = t.steps[i];
    ordered_json row;
    row["step"] = s.step;
    row["env_updates"] = updates_to_json(s.env_updates);
    row["agent"] = s.agent ? ordered_json(s.agent->to_string()) : ordered_json(nullptr);
    row["fired_rules"] = s.fired_rules;
    row["updates"] = updates_to_json(s.updates);
    ordered_json preds = ordered_json::object();
    for (const auto& a : m.agents()) {
      ordered_json mine = ordered_json::object();
      for (const auto& p : m.model().predicates) {
        auto owners = m.predicate_agents(p);
        if (std::find(owners.begin(), owners.end(), &a) == owners.end()) continue;
        mine[p.name] = m.eval_predicate(states[i + 1], p, a);
      }
      if (!mine.empty()) preds[a.id.to_string()] = mine;
    }
    row["predicates"] = preds;
    out += row.dump();
    out += '\n';
  }
  return out;
}

Trace trace_from_jsonl(const Machine& m, std::istream& in) {
  Trace t;
  t.initial = m.initial_state();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      json row = json::parse(line);
      TraceStep s;
      s.step = row.at("step").get<std::size_t>();
      s.env_updates = updates_from_json(m, row.at("env_updates"));
      if (!row.at("agent").is_null()) {
        const auto* a = m.find_agent(row.at("agent").get<std::string>());
        if (!a) throw IoError("unknown agent " + row.at("agent").dump());
        s.agent = a->id;
      }
      s.fired_rules = row.at("fired_rules").get<std::vector<std::string>>();
      s.updates = updates_from_json(m, row.at("updates"));
      t.steps.push_back(std::move(s));
    } catch (const json::exception& e) {
      throw IoError("trace line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return t;
}

AnnotatedTrace annotated_trace_from_jsonl(std::istream& in) {
  AnnotatedTrace at;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      json row = json::parse(line);
      AnnotatedRow r;
      r.step = row.at("step").get<std::size_t>();
      if (!row.at("agent").is_null()) r.agent = row.at("agent").get<std::string>();
      for (const auto& [agent, values] : row.at("predicates").items()) {
        for (const auto& [p, v] : values.items()) r.predicates[agent][p] = v.get<bool>();
      }
      at.rows.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw IoError("trace line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return at;
}

ordered_json report_to_json(const VulnerabilityReport& r) {
  ordered_json j;
  ordered_json risky = ordered_json::array();
  for (const auto& f : r.risk.risky) risky.push_back({{"name", f.name}, {"chain", f.chain}});
  j["risky_functions"] = risky;
  ordered_json escaped = ordered_json::array();
  for (const auto& f : r.risk.escaped) escaped.push_back({{"name", f.name}, {"writer", f.writer}});
  j["non_risky_controlled"] = escaped;
  ordered_json preds = ordered_json::array();
  for (const auto& p : r.predicates) {
    ordered_json pj{{"name", p.name},
                    {"verdict", p.risky ? "risky" : "not-risky"},
                    {"method", to_string(p.method)},
                    {"evidence", p.evidence}};
    pj["risky_locations"] = p.risky_symbols;
    if (p.liberating_rule) pj["liberating_rule"] = *p.liberating_rule;
    if (p.witness_agent) pj["witness_agent"] = *p.witness_agent;
    if (!p.warnings.empty()) pj["warnings"] = p.warnings;
    preds.push_back(pj);
  }
  j["predicates"] = preds;
  ordered_json rules = ordered_json::array();
  for (const auto& v : r.rules) {
    std::string verdict = v.vulnerable ? (v.over_approximate ? "vulnerable (over-approximate)" : "vulnerable")
                                       : "not-vulnerable";
    ordered_json rj{{"id", v.id}, {"verdict", verdict}, {"f1_evidence", v.f1_evidence}, {"f2_evidence", v.f2_evidence}};
    if (!v.cleared_by.empty()) rj["cleared_by"] = v.cleared_by;
    if (!v.agents.empty()) rj["agents"] = v.agents;
    rules.push_back(rj);
  }
  j["rules"] = rules;
  if (!r.rankings.empty()) {
    ordered_json ranks = ordered_json::array();
    for (const auto& k : r.rankings) {
      ranks.push_back({{"predicate", k.predicate}, {"counter", k.counter}, {"verified", k.verified}, {"detail", k.detail}});
    }
    j["rankings"] = ranks;
  }
  j["certificate"] = r.certificate;
  j["truncated"] = r.truncated;
  j["notes"] = r.notes;
  return j;
}

std::string report_to_text(const VulnerabilityReport& r) {
  std::ostringstream out;
  out << "risky functions:\n";
  for (const auto& f : r.risk.risky) out << "  " << f.name << "  (" << f.chain << ")\n";
  if (r.risk.risky.empty()) out << "  none\n";
  out << "predicates:\n";
  for (const auto& p : r.predicates) {
    out << "  " << p.name << ": " << (p.risky ? "risky" : "not risky") << " [" << to_string(p.method)
        << "]\n    " << p.evidence << "\n";
    for (const auto& w : p.warnings) out << "    warning: " << w << "\n";
  }
  out << "rules:\n";
  for (const auto& v : r.rules) {
    out << "  " << v.id << ": "
        << (v.vulnerable ? (v.over_approximate ? "VULNERABLE (over-approximate)" : "VULNERABLE") : "not vulnerable");
    if (!v.cleared_by.empty()) out << " (" << v.cleared_by << " fails)";
    out << "\n    f.1: " << v.f1_evidence << "\n    f.2: " << v.f2_evidence << "\n";
  }
  for (const auto& k : r.rankings) {
    out << "ranking " << k.counter << " for " << k.predicate << ": " << (k.verified ? "verified" : "not verified")
        << " (" << k.detail << ")\n";
  }
  out << "certificate: " << (r.certificate ? "starvation-free" : "not issued") << "\n";
  for (const auto& n : r.notes) out << "note: " << n << "\n";
  return out.str();
}

ordered_json alarms_to_json(const std::vector<Alarm>& alarms) {
  ordered_json arr = ordered_json::array();
  for (const auto& a : alarms) {
    arr.push_back({{"agent", a.agent},
                   {"predicate", a.predicate},
                   {"start", a.start},
                   {"length", a.length},
                   {"threshold", a.threshold}});
  }
  return arr;
}

}  // namespace asmstarve
