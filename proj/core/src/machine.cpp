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

#include "asmstarve/machine.hpp"

#include <algorithm>
#include <set>

namespace asmstarve {

struct Machine::Frame {
  std::vector<std::string> derived_stack;
  int call_depth = 0;
};

namespace {

constexpr int kMaxCallDepth = 64;

void literals_in(const Term& t, std::set<std::int64_t>& out);

void literals_in(const Formula& f, std::set<std::int64_t>& out) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, formula::Equals>) {
          literals_in(n.lhs, out);
          literals_in(n.rhs, out);
        } else if constexpr (std::is_same_v<N, formula::Member>) {
          literals_in(n.element, out);
        } else if constexpr (std::is_same_v<N, formula::Not>) {
          literals_in(*n.operand, out);
        } else if constexpr (std::is_same_v<N, formula::And> || std::is_same_v<N, formula::Or>) {
          for (const auto& op : n.operands) literals_in(op, out);
        } else if constexpr (std::is_same_v<N, formula::Quantified>) {
          literals_in(*n.body, out);
        }
      },
      f.node);
}

void literals_in(const Term& t, std::set<std::int64_t>& out) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, term::Constant>) {
          if (n.value.is_int()) out.insert(n.value.as_int());
        } else if constexpr (std::is_same_v<N, term::Apply>) {
          for (const auto& a : n.args) literals_in(a, out);
        } else if constexpr (std::is_same_v<N, term::Arith>) {
          literals_in(*n.lhs, out);
          literals_in(*n.rhs, out);
        }
      },
      t.node);
}

void literals_in(const Rule& r, std::set<std::int64_t>& out) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, rule::Assign>) {
          for (const auto& a : n.target.args) literals_in(a, out);
          literals_in(n.value, out);
        } else if constexpr (std::is_same_v<N, rule::Conditional>) {
          literals_in(n.guard, out);
          literals_in(*n.body, out);
        } else if constexpr (std::is_same_v<N, rule::Block>) {
          for (const auto& m : n.members) literals_in(m, out);
        } else if constexpr (std::is_same_v<N, rule::Forall>) {
          literals_in(*n.body, out);
        } else if constexpr (std::is_same_v<N, rule::Choose>) {
          literals_in(n.selection, out);
          if (n.ranking) literals_in(*n.ranking, out);
          literals_in(*n.body, out);
        } else if constexpr (std::is_same_v<N, rule::Call>) {
          for (const auto& a : n.args) literals_in(a, out);
        }
      },
      r.node);
}

}  // namespace

Machine::Machine(Model model) : model_(std::move(model)) {
  assign_rule_ids(model_);
  for (const auto& fn : model_.functions) functions_.emplace(fn.name, &fn);
  for (const auto& def : model_.rules) rules_.emplace(def.name, &def);

  domains_.emplace(std::string(kBooleanDomain),
                   std::vector<Value>{Value::boolean(false), Value::boolean(true)});
  for (const auto& d : model_.domains) {
    std::vector<Value> values;
    for (const auto& e : d.elements) {
      values.push_back(Value::atom(d.name, e));
      atoms_.emplace(e, values.back());
    }
    domains_.emplace(d.name, std::move(values));
  }

  const State empty;
  for (const auto& binding : model_.agents) {
    if (!rules_.count(binding.program)) {
      throw EvalError("agent binding runs unknown rule '" + binding.program + "'");
    }
    auto instantiate = [&](Value id, const Bindings& env) {
      std::vector<Value> args;
      for (const auto& a : binding.args) args.push_back(eval_term(empty, env, a));
      agents_.push_back(AgentInstance{std::move(id), binding.program, std::move(args)});
    };
    if (!binding.domain.empty()) {
      for (const auto& v : domain_values(binding.domain)) {
        instantiate(v, Bindings{}.with(binding.var, v));
      }
    } else {
      auto id = resolve_atom(binding.agent);
      if (!id) throw EvalError("agent '" + binding.agent + "' is not an element of any domain");
      instantiate(*id, Bindings{});
    }
  }

  std::set<std::int64_t> lits;
  for (const auto& fn : model_.functions) {
    if (fn.definition) {
      std::visit([&](const auto& d) { literals_in(d, lits); }, *fn.definition);
    }
  }
  for (const auto& def : model_.rules) literals_in(def.body, lits);
  if (model_.init) literals_in(*model_.init, lits);
  for (const auto& p : model_.predicates) literals_in(p.formula, lits);
  int_literals_.assign(lits.begin(), lits.end());

  if (model_.init) initial_ = apply_updates(State{}, collect_updates(empty, Bindings{}, *model_.init));
}

const FunctionSymbol& Machine::function(std::string_view name) const {
  auto it = functions_.find(std::string(name));
  if (it == functions_.end()) throw EvalError("unknown function symbol '" + std::string(name) + "'");
  return *it->second;
}

const RuleDef& Machine::rule_def(std::string_view name) const {
  auto it = rules_.find(std::string(name));
  if (it == rules_.end()) throw EvalError("unknown rule '" + std::string(name) + "'");
  return *it->second;
}

const std::vector<Value>& Machine::domain_values(std::string_view domain) const {
  auto it = domains_.find(std::string(domain));
  if (it == domains_.end()) {
    throw EvalError("domain '" + std::string(domain) + "' is not a declared finite domain");
  }
  return it->second;
}

bool Machine::is_finite_domain(std::string_view domain) const {
  return domains_.count(std::string(domain)) > 0;
}

bool Machine::in_domain(const Value& v, std::string_view domain) const {
  if (domain == kIntegerDomain) return v.is_int();
  if (domain == kBooleanDomain) return v.is_bool();
  return v.is_atom() && v.as_atom().domain == domain;
}

std::optional<Value> Machine::resolve_atom(std::string_view name) const {
  auto it = atoms_.find(std::string(name));
  if (it == atoms_.end()) return std::nullopt;
  return it->second;
}

const AgentInstance* Machine::find_agent(const Value& id) const {
  for (const auto& a : agents_) {
    if (a.id == id) return &a;
  }
  return nullptr;
}

const AgentInstance* Machine::find_agent(std::string_view name) const {
  for (const auto& a : agents_) {
    if (a.id.is_atom() && a.id.as_atom().name == name) return &a;
  }
  return nullptr;
}

Bindings Machine::bindings_for(const AgentInstance& agent) const {
  Bindings env;
  env.self = agent.id;
  const auto& def = rule_def(agent.program);
  for (std::size_t i = 0; i < def.params.size() && i < agent.args.size(); ++i) {
    env.vars.insert_or_assign(def.params[i], agent.args[i]);
  }
  return env;
}

std::vector<const Rule*> Machine::units(const RuleDef& def) const {
  std::vector<const Rule*> out;
  if (const auto* b = std::get_if<rule::Block>(&def.body.node)) {
    for (const auto& m : b->members) out.push_back(&m);
  } else {
    out.push_back(&def.body);
  }
  return out;
}

std::vector<const Rule*> Machine::units(const AgentInstance& agent) const {
  return units(rule_def(agent.program));
}

Location Machine::make_location(const FunctionSymbol& fn, std::vector<Value> args,
                                const Bindings& env) const {
  Location loc{fn.name, std::move(args), std::nullopt};
  if (fn.local) {
    if (!env.self) throw EvalError("agent-local symbol '" + fn.name + "' used outside an agent");
    loc.owner = *env.self;
  }
  return loc;
}

Value Machine::eval_term(const StateReader& state, const Bindings& env, const Term& t) const {
  Frame f;
  return eval(state, env, t, f);
}

bool Machine::eval_formula(const StateReader& state, const Bindings& env, const Formula& phi) const {
  Frame f;
  return holds(state, env, phi, f);
}

UpdateSet Machine::collect_updates(const StateReader& state, const Bindings& env,
                                   const Rule& r) const {
  Frame f;
  UpdateSet out;
  collect(state, env, r, f, out);
  return out;
}

Value Machine::eval(const StateReader& s, const Bindings& env, const Term& t, Frame& f) const {
  return std::visit(
      [&](const auto& n) -> Value {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, term::Constant>) {
          return n.value;
        } else if constexpr (std::is_same_v<N, term::Variable>) {
          auto it = env.vars.find(n.name);
          if (it == env.vars.end()) throw EvalError("unbound variable '" + n.name + "'");
          return it->second;
        } else if constexpr (std::is_same_v<N, term::Self>) {
          if (!env.self) throw EvalError("'self' used outside an agent context");
          return *env.self;
        } else if constexpr (std::is_same_v<N, term::Apply>) {
          const auto& fn = function(n.symbol);
          if (fn.arity() != n.args.size()) {
            throw EvalError("'" + fn.name + "' expects " + std::to_string(fn.arity()) +
                            " arguments, got " + std::to_string(n.args.size()));
          }
          std::vector<Value> args;
          args.reserve(n.args.size());
          for (const auto& a : n.args) args.push_back(eval(s, env, a, f));
          if (fn.kind != FunctionKind::kDerived) return s.read(make_location(fn, std::move(args), env));

          if (!fn.definition) throw EvalError("derived symbol '" + fn.name + "' has no definition");
          if (std::find(f.derived_stack.begin(), f.derived_stack.end(), fn.name) !=
              f.derived_stack.end()) {
            throw EvalError("cyclic derived definition through '" + fn.name + "'");
          }
          Bindings inner;
          inner.self = env.self;
          for (std::size_t i = 0; i < fn.params.size(); ++i) inner.vars.emplace(fn.params[i], args[i]);
          f.derived_stack.push_back(fn.name);
          Value out = std::visit(
              [&](const auto& def) -> Value {
                if constexpr (std::is_same_v<std::decay_t<decltype(def)>, Term>) {
                  return eval(s, inner, def, f);
                } else {
                  return Value::boolean(holds(s, inner, def, f));
                }
              },
              *fn.definition);
          f.derived_stack.pop_back();
          return out;
        } else {
          Value lhs = eval(s, env, *n.lhs, f);
          Value rhs = eval(s, env, *n.rhs, f);
          if (lhs.is_undef() || rhs.is_undef()) return Value::undef();
          if (!lhs.is_int() || !rhs.is_int()) {
            throw EvalError("arithmetic on non-integer values " + lhs.to_string() + " and " +
                            rhs.to_string());
          }
          return Value::integer(n.op == '+' ? lhs.as_int() + rhs.as_int()
                                            : lhs.as_int() - rhs.as_int());
        }
      },
      t.node);
}

bool Machine::holds(const StateReader& s, const Bindings& env, const Formula& phi, Frame& f) const {
  return std::visit(
      [&](const auto& n) -> bool {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, formula::Truth>) {
          return n.value;
        } else if constexpr (std::is_same_v<N, formula::Equals>) {
          return eval(s, env, n.lhs, f) == eval(s, env, n.rhs, f);
        } else if constexpr (std::is_same_v<N, formula::Member>) {
          return in_domain(eval(s, env, n.element, f), n.domain);
        } else if constexpr (std::is_same_v<N, formula::Not>) {
          return !holds(s, env, *n.operand, f);
        } else if constexpr (std::is_same_v<N, formula::And>) {
          for (const auto& op : n.operands) {
            if (!holds(s, env, op, f)) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<N, formula::Or>) {
          for (const auto& op : n.operands) {
            if (holds(s, env, op, f)) return true;
          }
          return false;
        } else {
          for (const auto& v : domain_values(n.domain)) {
            bool b = holds(s, env.with(n.var, v), *n.body, f);
            if (n.universal && !b) return false;
            if (!n.universal && b) return true;
          }
          return n.universal;
        }
      },
      phi.node);
}

void Machine::check_result_domain(const FunctionSymbol& fn, const Value& v) const {
  if (v.is_undef() || in_domain(v, fn.result_domain)) return;
  // Sequences are not tied to a domain.
  if (v.is_seq()) return;
  throw EvalError("value " + v.to_string() + " is outside the result domain '" +
                  fn.result_domain + "' of '" + fn.name + "'");
}

void Machine::collect(const StateReader& s, const Bindings& env, const Rule& r, Frame& f,
                      UpdateSet& out) const {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, rule::Assign>) {
          const auto& fn = function(n.target.symbol);
          if (fn.kind == FunctionKind::kDerived) {
            throw EvalError("derived symbol '" + fn.name + "' cannot be updated");
          }
          if (fn.arity() != n.target.args.size()) {
            throw EvalError("'" + fn.name + "' expects " + std::to_string(fn.arity()) +
                            " arguments, got " + std::to_string(n.target.args.size()));
          }
          std::vector<Value> args;
          for (const auto& a : n.target.args) args.push_back(eval(s, env, a, f));
          Value v = eval(s, env, n.value, f);
          check_result_domain(fn, v);
          out.insert(Update{make_location(fn, std::move(args), env), std::move(v)});
        } else if constexpr (std::is_same_v<N, rule::Conditional>) {
          if (holds(s, env, n.guard, f)) collect(s, env, *n.body, f, out);
        } else if constexpr (std::is_same_v<N, rule::Block>) {
          for (const auto& m : n.members) collect(s, env, m, f, out);
        } else if constexpr (std::is_same_v<N, rule::Forall>) {
          for (const auto& v : domain_values(n.domain)) collect(s, env.with(n.var, v), *n.body, f, out);
        } else if constexpr (std::is_same_v<N, rule::Choose>) {
          std::optional<Value> best;
          std::optional<std::int64_t> best_rank;
          bool best_rank_undef = false;
          for (const auto& v : domain_values(n.domain)) {
            Bindings candidate = env.with(n.var, v);
            if (!holds(s, candidate, n.selection, f)) continue;
            if (!n.ranking) {
              best = v;
              break;
            }
            Value rank = eval(s, candidate, *n.ranking, f);
            if (!rank.is_undef() && !rank.is_int()) {
              throw EvalError("choose ranking must be an integer, got " + rank.to_string());
            }
            // undef ranks below every integer; strict comparison keeps the
            // earliest element on ties.
            bool better = false;
            if (!best) {
              better = true;
            } else if (rank.is_int() && (best_rank_undef || rank.as_int() > *best_rank)) {
              better = true;
            }
            if (better) {
              best = v;
              best_rank_undef = rank.is_undef();
              best_rank = rank.is_int() ? std::optional<std::int64_t>(rank.as_int()) : std::nullopt;
            }
          }
          if (best) collect(s, env.with(n.var, *best), *n.body, f, out);
        } else if constexpr (std::is_same_v<N, rule::Call>) {
          const auto& def = rule_def(n.name);
          if (def.params.size() != n.args.size()) {
            throw EvalError("rule '" + def.name + "' expects " + std::to_string(def.params.size()) +
                            " arguments, got " + std::to_string(n.args.size()));
          }
          if (f.call_depth >= kMaxCallDepth) throw EvalError("rule call depth exceeded at '" + def.name + "'");
          Bindings callee;
          callee.self = env.self;
          for (std::size_t i = 0; i < def.params.size(); ++i) {
            callee.vars.insert_or_assign(def.params[i], eval(s, env, n.args[i], f));
          }
          ++f.call_depth;
          collect(s, callee, def.body, f, out);
          --f.call_depth;
        }
      },
      r.node);
}

std::vector<const AgentInstance*> Machine::predicate_agents(const PredicateDecl& p) const {
  std::vector<const AgentInstance*> out;
  for (const auto& a : agents_) {
    if (a.id.is_atom() && a.id.as_atom().domain == p.domain) out.push_back(&a);
  }
  return out;
}

Bindings Machine::predicate_bindings(const PredicateDecl& p, const AgentInstance& agent) const {
  Bindings env = bindings_for(agent);
  if (p.var != "self") env.vars.insert_or_assign(p.var, agent.id);
  return env;
}

bool Machine::eval_predicate(const StateReader& state, const PredicateDecl& p,
                             const AgentInstance& agent) const {
  return eval_formula(state, predicate_bindings(p, agent), p.formula);
}

}  // namespace asmstarve
