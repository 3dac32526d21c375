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

#include "asmstarve/syntax.hpp"

#include <algorithm>

namespace asmstarve {

bool term::Apply::operator==(const Apply& o) const {
  return symbol == o.symbol && args == o.args;
}
bool formula::And::operator==(const And& o) const { return operands == o.operands; }
bool formula::Or::operator==(const Or& o) const { return operands == o.operands; }
bool rule::Block::operator==(const Block& o) const { return members == o.members; }
bool rule::Call::operator==(const Call& o) const { return name == o.name && args == o.args; }

std::string_view to_string(FunctionKind kind) {
  switch (kind) {
    case FunctionKind::kStatic:
      return "static";
    case FunctionKind::kControlled:
      return "controlled";
    case FunctionKind::kMonitored:
      return "monitored";
    case FunctionKind::kShared:
      return "shared";
    case FunctionKind::kDerived:
      return "derived";
    case FunctionKind::kOut:
      return "out";
  }
  return "?";
}

std::optional<FunctionKind> function_kind_from_string(std::string_view s) {
  for (auto k : {FunctionKind::kStatic, FunctionKind::kControlled, FunctionKind::kMonitored,
                 FunctionKind::kShared, FunctionKind::kDerived, FunctionKind::kOut}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

namespace {
template <class Vec>
auto find_named(const Vec& v, std::string_view name) -> decltype(&v.front()) {
  auto it = std::find_if(v.begin(), v.end(), [&](const auto& x) { return x.name == name; });
  return it == v.end() ? nullptr : &*it;
}
}  // namespace

const DomainDecl* Model::find_domain(std::string_view n) const { return find_named(domains, n); }
const FunctionSymbol* Model::find_function(std::string_view n) const {
  return find_named(functions, n);
}
const RuleDef* Model::find_rule(std::string_view n) const { return find_named(rules, n); }
const PredicateDecl* Model::find_predicate(std::string_view n) const {
  return find_named(predicates, n);
}

const DomainDecl* Model::domain_of_atom(std::string_view atom) const {
  for (const auto& d : domains) {
    if (std::find(d.elements.begin(), d.elements.end(), atom) != d.elements.end()) return &d;
  }
  return nullptr;
}

namespace {

void assign_ids(Rule& r, const std::string& path) {
  r.id = r.label.empty() ? path : r.label;
  const std::string& base = r.id;
  std::visit(
      [&](auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, rule::Conditional> || std::is_same_v<N, rule::Forall> ||
                      std::is_same_v<N, rule::Choose>) {
          assign_ids(*n.body, base + ".0");
        } else if constexpr (std::is_same_v<N, rule::Block>) {
          for (std::size_t i = 0; i < n.members.size(); ++i) {
            assign_ids(n.members[i], base + "." + std::to_string(i));
          }
        }
      },
      r.node);
}

}  // namespace

void assign_rule_ids(Model& model) {
  for (auto& def : model.rules) assign_ids(def.body, def.name);
  if (model.init) assign_ids(*model.init, "init");
}

namespace ast {

Term constant(Value v) { return Term{term::Constant{std::move(v)}}; }
Term var(std::string name) { return Term{term::Variable{std::move(name)}}; }
Term self() { return Term{term::Self{}}; }
Term app(std::string symbol, std::vector<Term> args) {
  return Term{term::Apply{std::move(symbol), std::move(args)}};
}
Term arith(char op, Term lhs, Term rhs) {
  return Term{term::Arith{op, std::move(lhs), std::move(rhs)}};
}
Term integer(std::int64_t i) { return constant(Value::integer(i)); }
Term boolean(bool b) { return constant(Value::boolean(b)); }
Term undef() { return constant(Value::undef()); }

Formula truth(bool b) { return Formula{formula::Truth{b}}; }
Formula eq(Term lhs, Term rhs) { return Formula{formula::Equals{std::move(lhs), std::move(rhs)}}; }
Formula neq(Term lhs, Term rhs) { return negate(eq(std::move(lhs), std::move(rhs))); }
Formula member(Term element, std::string domain) {
  return Formula{formula::Member{std::move(element), std::move(domain)}};
}
Formula negate(Formula f) { return Formula{formula::Not{std::move(f)}}; }
Formula all_of(std::vector<Formula> fs) {
  if (fs.empty()) return truth(true);
  if (fs.size() == 1) return std::move(fs.front());
  return Formula{formula::And{std::move(fs)}};
}
Formula any_of(std::vector<Formula> fs) {
  if (fs.empty()) return truth(false);
  if (fs.size() == 1) return std::move(fs.front());
  return Formula{formula::Or{std::move(fs)}};
}
Formula forall(std::string var, std::string domain, Formula body) {
  return Formula{formula::Quantified{true, std::move(var), std::move(domain), std::move(body)}};
}
Formula exists(std::string var, std::string domain, Formula body) {
  return Formula{formula::Quantified{false, std::move(var), std::move(domain), std::move(body)}};
}
Formula holds(Term t) { return eq(std::move(t), boolean(true)); }

Rule assign(std::string symbol, std::vector<Term> args, Term value) {
  return Rule{rule::Assign{term::Apply{std::move(symbol), std::move(args)}, std::move(value)}, {}, {}};
}
Rule when(Formula guard, Rule body) {
  return Rule{rule::Conditional{std::move(guard), std::move(body)}, {}, {}};
}
Rule block(std::vector<Rule> members) { return Rule{rule::Block{std::move(members)}, {}, {}}; }
Rule forall_do(std::string var, std::string domain, Rule body) {
  return Rule{rule::Forall{std::move(var), std::move(domain), std::move(body)}, {}, {}};
}
Rule choose(std::string var, std::string domain, Formula selection, std::optional<Term> ranking,
            Rule body) {
  return Rule{rule::Choose{std::move(var), std::move(domain), std::move(selection),
                           std::move(ranking), std::move(body)},
              {},
              {}};
}
Rule call(std::string name, std::vector<Term> args) {
  return Rule{rule::Call{std::move(name), std::move(args)}, {}, {}};
}
Rule skip() { return Rule{rule::Skip{}, {}, {}}; }
Rule labeled(std::string label, Rule r) {
  r.label = std::move(label);
  return r;
}

}  // namespace ast

void collect_symbols(const Term& t, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, term::Apply>) {
          out.insert(n.symbol);
          for (const auto& a : n.args) collect_symbols(a, out);
        } else if constexpr (std::is_same_v<N, term::Arith>) {
          collect_symbols(*n.lhs, out);
          collect_symbols(*n.rhs, out);
        }
      },
      t.node);
}

void collect_symbols(const Formula& f, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, formula::Equals>) {
          collect_symbols(n.lhs, out);
          collect_symbols(n.rhs, out);
        } else if constexpr (std::is_same_v<N, formula::Member>) {
          collect_symbols(n.element, out);
        } else if constexpr (std::is_same_v<N, formula::Not>) {
          collect_symbols(*n.operand, out);
        } else if constexpr (std::is_same_v<N, formula::And> || std::is_same_v<N, formula::Or>) {
          for (const auto& op : n.operands) collect_symbols(op, out);
        } else if constexpr (std::is_same_v<N, formula::Quantified>) {
          collect_symbols(*n.body, out);
        }
      },
      f.node);
}

std::vector<Formula> flatten_conjuncts(const Formula& f) {
  std::vector<Formula> out;
  if (const auto* conj = std::get_if<formula::And>(&f.node)) {
    for (const auto& op : conj->operands) {
      auto sub = flatten_conjuncts(op);
      out.insert(out.end(), std::make_move_iterator(sub.begin()), std::make_move_iterator(sub.end()));
    }
  } else {
    out.push_back(f);
  }
  return out;
}

}  // namespace asmstarve
