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

#include "support.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "asmstarve/io.hpp"

namespace asmstarve::testing {

std::string corpus_dir() { return ASMSTARVE_TEST_CORPUS_DIR; }
std::string corpus_file(const std::string& file) { return corpus_dir() + "/" + file; }

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string describe(const std::vector<Diagnostic>& diags, const std::string& file) {
  std::string out;
  for (const auto& d : diags) out += d.format(file) + "\n";
  return out;
}

}  // namespace

Model parse_or_throw(const std::string& text) {
  auto r = parse_model(text);
  if (!r.ok()) throw std::runtime_error("parse failed:\n" + describe(r.diagnostics, "<text>"));
  return *r.model;
}

Model load_corpus_model(const std::string& name) {
  const std::string path = corpus_file(name + ".asm");
  auto r = parse_model(read_file(path));
  if (!r.ok()) throw std::runtime_error(describe(r.diagnostics, path));
  auto diags = validate_model(*r.model, &r.source_map);
  if (has_errors(diags)) throw std::runtime_error(describe(diags, path));
  return *r.model;
}

std::unique_ptr<Machine> load_corpus_machine(const std::string& name) {
  return std::make_unique<Machine>(load_corpus_model(name));
}

nlohmann::json load_manifest(const std::string& name) {
  return nlohmann::json::parse(read_file(corpus_file(name + ".expected.json")));
}

const CorpusEntry& corpus_entry(const std::string& name) {
  for (const auto& e : corpus_entries()) {
    if (e.name == name) return e;
  }
  throw std::runtime_error("no corpus entry " + name);
}

Value atom(const Machine& m, const std::string& name) {
  auto v = m.resolve_atom(name);
  if (!v) throw std::runtime_error("unknown atom " + name);
  return *v;
}

Location loc(const Machine& m, const std::string& text) { return parse_location(m, text); }

State with(const Machine& m, State base, const std::vector<std::pair<std::string, Value>>& writes) {
  for (const auto& [l, v] : writes) base.write(loc(m, l), v);
  return base;
}

const AgentInstance& agent(const Machine& m, const std::string& name) {
  const auto* a = m.find_agent(std::string_view(name));
  if (!a) throw std::runtime_error("unknown agent " + name);
  return *a;
}

const PredicateDecl& predicate(const Machine& m, const std::string& name) {
  const auto* p = m.model().find_predicate(name);
  if (!p) throw std::runtime_error("unknown predicate " + name);
  return *p;
}

std::vector<bool> predicate_series(const Machine& m, const Trace& t, const std::string& agent_name,
                                   const std::string& predicate_name) {
  const auto& a = agent(m, agent_name);
  const auto& p = predicate(m, predicate_name);
  auto states = replay_states(t);
  std::vector<bool> out;
  for (std::size_t i = 1; i < states.size(); ++i) out.push_back(m.eval_predicate(states[i], p, a));
  return out;
}

std::vector<int> fork_owners(const Machine& m, const State& s, std::size_t n) {
  std::vector<int> out;
  for (std::size_t i = 1; i <= n; ++i) {
    Value v = s.read(loc(m, "owner(f" + std::to_string(i) + ")"));
    out.push_back(v.is_undef() ? -1 : std::stoi(v.as_atom().name.substr(1)) - 1);
  }
  return out;
}

int run_command(const std::string& command, const std::string& stdout_path) {
  int status = std::system((command + " >" + stdout_path + " 2>/dev/null").c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

// --- ModelGenerator ------------------------------------------------------------

namespace {

using Scope = std::vector<std::pair<std::string, std::string>>;

constexpr const char* kSignature = R"(dasm generated

domain d = {a, b, c}
domain e = {x, y}

function cnt : d -> integer controlled
function flag : d x e -> boolean shared
function cur : -> d controlled
function sig : e -> boolean monitored
function st : d -> e static
derived isA(v : d) -> boolean := v = a

init {
  forall v in d do {
    st(v) := x
    cnt(v) := 0
  }
  cur := a
}

rule Helper(w) = cnt(w) := cnt(w) + 1

rule Prog() = skip

agent a runs Prog()
agent b runs Prog()
)";

int fresh_counter = 0;

std::string fresh_var() { return "v" + std::to_string(fresh_counter++); }

}  // namespace

Term ModelGenerator::element(const std::string& domain, int depth, const Scope& scope) {
  std::vector<std::string> vars;
  for (const auto& [v, dom] : scope) {
    if (dom == domain) vars.push_back(v);
  }
  if (domain == "d") {
    switch (pick(vars.empty() ? 3 : 4)) {
      case 0:
        return ast::constant(Value::atom("d", std::string(1, "abc"[pick(3)])));
      case 1:
        return ast::self();
      case 2:
        return ast::app("cur");
      default:
        return ast::var(vars[pick(vars.size())]);
    }
  }
  if (domain == "e") {
    switch (pick(vars.empty() ? 2 : 3)) {
      case 0:
        return ast::constant(Value::atom("e", coin() ? "x" : "y"));
      case 1:
        return ast::app("st", {element("d", depth - 1, scope)});
      default:
        return ast::var(vars[pick(vars.size())]);
    }
  }
  if (domain == "integer") {
    switch (pick(depth > 0 ? 3 : 2)) {
      case 0:
        return ast::integer(static_cast<std::int64_t>(pick(5)) - 1);
      case 1:
        return ast::app("cnt", {element("d", depth - 1, scope)});
      default:
        return ast::arith(coin() ? '+' : '-', element("integer", depth - 1, scope),
                          element("integer", depth - 1, scope));
    }
  }
  switch (pick(4)) {
    case 0:
      return ast::boolean(coin());
    case 1:
      return ast::app("flag", {element("d", depth - 1, scope), element("e", depth - 1, scope)});
    case 2:
      return ast::app("sig", {element("e", depth - 1, scope)});
    default:
      return ast::app("isA", {element("d", depth - 1, scope)});
  }
}

Term ModelGenerator::term(int depth, const Scope& scope) {
  static const char* kDomains[] = {"d", "e", "integer", "boolean"};
  return element(kDomains[pick(4)], depth, scope);
}

Formula ModelGenerator::formula(int depth, Scope& scope) {
  static const char* kDomains[] = {"d", "e", "integer", "boolean"};
  const std::size_t kinds = depth > 0 ? 8 : 4;
  switch (pick(kinds)) {
    case 0:
      return ast::truth(coin());
    case 1: {
      const char* dom = kDomains[pick(4)];
      return ast::eq(element(dom, depth, scope), element(dom, depth, scope));
    }
    case 2:
      return ast::holds(element("boolean", depth, scope));
    case 3:
      return ast::member(element("d", depth, scope), "d");
    case 4:
      return ast::negate(formula(depth - 1, scope));
    case 5:
    case 6: {
      std::vector<Formula> ops;
      const std::size_t n = 2 + pick(2);
      for (std::size_t i = 0; i < n; ++i) ops.push_back(formula(depth - 1, scope));
      return coin() ? Formula{formula::And{std::move(ops)}} : Formula{formula::Or{std::move(ops)}};
    }
    default: {
      std::string v = fresh_var();
      std::string dom = coin() ? "d" : "e";
      scope.emplace_back(v, dom);
      Formula body = formula(depth - 1, scope);
      scope.pop_back();
      return coin() ? ast::forall(v, dom, std::move(body)) : ast::exists(v, dom, std::move(body));
    }
  }
}

Rule ModelGenerator::rule(int depth, Scope& scope, int& labels) {
  Rule r;
  switch (pick(depth > 0 ? 8 : 4)) {
    case 0:
      r = ast::assign("cnt", {element("d", 1, scope)}, element("integer", 1, scope));
      break;
    case 1:
      r = ast::assign("flag", {element("d", 1, scope), element("e", 1, scope)}, element("boolean", 1, scope));
      break;
    case 2:
      r = coin() ? ast::assign("cur", {}, element("d", 1, scope)) : ast::skip();
      break;
    case 3:
      r = ast::call("Helper", {element("d", 1, scope)});
      break;
    case 4:
      r = ast::when(formula(2, scope), rule(depth - 1, scope, labels));
      break;
    case 5: {
      std::vector<Rule> members;
      const std::size_t n = 1 + pick(3);
      for (std::size_t i = 0; i < n; ++i) members.push_back(rule(depth - 1, scope, labels));
      r = ast::block(std::move(members));
      break;
    }
    case 6: {
      std::string v = fresh_var();
      std::string dom = coin() ? "d" : "e";
      scope.emplace_back(v, dom);
      Rule body = rule(depth - 1, scope, labels);
      scope.pop_back();
      r = ast::forall_do(v, dom, std::move(body));
      break;
    }
    default: {
      std::string v = fresh_var();
      scope.emplace_back(v, "d");
      Formula sel = formula(1, scope);
      std::optional<Term> rank;
      if (coin()) rank = element("integer", 1, scope);
      Rule body = rule(depth - 1, scope, labels);
      scope.pop_back();
      r = ast::choose(v, "d", std::move(sel), std::move(rank), std::move(body));
      break;
    }
  }
  if (pick(6) == 0) r.label = "L" + std::to_string(labels++);
  return r;
}

Model ModelGenerator::model() {
  Model m = parse_or_throw(kSignature);
  int labels = 0;
  std::vector<Rule> units;
  const std::size_t n = 1 + pick(4);
  for (std::size_t i = 0; i < n; ++i) {
    Scope scope;
    Rule u = rule(3, scope, labels);
    u.label = "R" + std::to_string(i);
    units.push_back(std::move(u));
  }
  RuleDef* prog = nullptr;
  for (auto& def : m.rules) {
    if (def.name == "Prog") prog = &def;
  }
  prog->body = ast::block(std::move(units));

  const std::size_t preds = pick(3);
  for (std::size_t i = 0; i < preds; ++i) {
    Scope scope;
    m.predicates.push_back(PredicateDecl{"p" + std::to_string(i), "self", "d", formula(3, scope)});
  }
  if (preds > 0 && coin()) m.rankings.push_back(RankingDecl{ast::app("cnt", {ast::self()}), "p0"});
  assign_rule_ids(m);
  return m;
}

}  // namespace asmstarve::testing
