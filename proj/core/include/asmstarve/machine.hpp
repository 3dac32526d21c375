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

#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "asmstarve/syntax.hpp"
#include "asmstarve/value.hpp"

namespace asmstarve {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Variable environment. `self` is set when evaluating on behalf of an agent.
struct Bindings {
  std::map<std::string, Value> vars;
  std::optional<Value> self;

  Bindings with(const std::string& name, Value v) const {
    Bindings b = *this;
    b.vars.insert_or_assign(name, std::move(v));
    return b;
  }
};

/// One (agent, program) pair of the distributed machine.
struct AgentInstance {
  Value id;
  std::string program;
  std::vector<Value> args;
};

/// Executable view of a Model: symbol tables, agent instances and the
/// single-agent step semantics. Immutable after construction.
class Machine {
 public:
  /// Expands agent bindings. Throws EvalError if a binding references an
  /// unknown domain, atom, or program.
  explicit Machine(Model model);
  // Holds pointers into its own model.
  Machine(const Machine&) = delete;
  Machine& operator=(const Machine&) = delete;

  const Model& model() const { return model_; }

  const FunctionSymbol& function(std::string_view name) const;
  const RuleDef& rule_def(std::string_view name) const;

  /// Elements of a finite domain in declaration order (`boolean` included).
  const std::vector<Value>& domain_values(std::string_view domain) const;
  bool is_finite_domain(std::string_view domain) const;
  bool in_domain(const Value& v, std::string_view domain) const;
  std::optional<Value> resolve_atom(std::string_view name) const;

  const std::vector<AgentInstance>& agents() const { return agents_; }
  const AgentInstance* find_agent(const Value& id) const;
  const AgentInstance* find_agent(std::string_view name) const;

  /// `self` plus the agent's program parameters bound to its arguments.
  Bindings bindings_for(const AgentInstance& agent) const;

  /// Top-level rules of the agent's program: the members of its body when
  /// the body is a block, otherwise the body itself.
  std::vector<const Rule*> units(const AgentInstance& agent) const;
  std::vector<const Rule*> units(const RuleDef& def) const;

  Value eval_term(const StateReader& state, const Bindings& env, const Term& t) const;
  bool eval_formula(const StateReader& state, const Bindings& env, const Formula& f) const;
  UpdateSet collect_updates(const StateReader& state, const Bindings& env, const Rule& r) const;

  /// Location of `symbol(args)`, namespaced by `self` for agent-local symbols.
  Location make_location(const FunctionSymbol& symbol, std::vector<Value> args,
                         const Bindings& env) const;

  /// Result of running the initialization block on the empty state.
  const State& initial_state() const { return initial_; }

  /// Agents a predicate is declared for, in agent order.
  std::vector<const AgentInstance*> predicate_agents(const PredicateDecl& p) const;
  Bindings predicate_bindings(const PredicateDecl& p, const AgentInstance& agent) const;
  bool eval_predicate(const StateReader& state, const PredicateDecl& p,
                      const AgentInstance& agent) const;

  /// Integer literals occurring anywhere in the model, sorted.
  const std::vector<std::int64_t>& integer_literals() const { return int_literals_; }

 private:
  struct Frame;
  Value eval(const StateReader& s, const Bindings& env, const Term& t, Frame& f) const;
  bool holds(const StateReader& s, const Bindings& env, const Formula& phi, Frame& f) const;
  void collect(const StateReader& s, const Bindings& env, const Rule& r, Frame& f,
               UpdateSet& out) const;
  void check_result_domain(const FunctionSymbol& fn, const Value& v) const;

  Model model_;
  std::unordered_map<std::string, const FunctionSymbol*> functions_;
  std::unordered_map<std::string, const RuleDef*> rules_;
  std::unordered_map<std::string, std::vector<Value>> domains_;
  std::unordered_map<std::string, Value> atoms_;
  std::vector<AgentInstance> agents_;
  std::vector<std::int64_t> int_literals_;
  State initial_;
};

}  // namespace asmstarve
