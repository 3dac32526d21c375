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

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "asmstarve/value.hpp"

namespace asmstarve {

/// Owning, deep-copying pointer for recursive AST nodes.
template <class T>
class Box {
 public:
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}  // NOLINT(runtime/explicit)
  Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;

  const T& operator*() const { return *ptr_; }
  T& operator*() { return *ptr_; }
  const T* operator->() const { return ptr_.get(); }
  T* operator->() { return ptr_.get(); }

  friend bool operator==(const Box& a, const Box& b) { return *a == *b; }

 private:
  std::unique_ptr<T> ptr_;
};

struct Term;
struct Formula;
struct Rule;

namespace term {
struct Constant {
  Value value;
  bool operator==(const Constant&) const = default;
};
struct Variable {
  std::string name;
  bool operator==(const Variable&) const = default;
};
struct Self {
  bool operator==(const Self&) const = default;
};
struct Apply {
  std::string symbol;
  std::vector<Term> args;
  bool operator==(const Apply&) const;
};
/// Integer `+` / `-`. Undef operands yield undef.
struct Arith {
  char op;
  Box<Term> lhs;
  Box<Term> rhs;
  bool operator==(const Arith&) const = default;
};
}  // namespace term

struct Term {
  std::variant<term::Constant, term::Variable, term::Self, term::Apply, term::Arith> node;
  bool operator==(const Term&) const = default;
};

namespace formula {
struct Truth {
  bool value;
  bool operator==(const Truth&) const = default;
};
struct Equals {
  Term lhs;
  Term rhs;
  bool operator==(const Equals&) const = default;
};
struct Member {
  Term element;
  std::string domain;
  bool operator==(const Member&) const = default;
};
struct Not {
  Box<Formula> operand;
  bool operator==(const Not&) const = default;
};
struct And {
  std::vector<Formula> operands;
  bool operator==(const And&) const;
};
struct Or {
  std::vector<Formula> operands;
  bool operator==(const Or&) const;
};
/// Bounded quantifier over a declared finite domain.
struct Quantified {
  bool universal;
  std::string var;
  std::string domain;
  Box<Formula> body;
  bool operator==(const Quantified&) const = default;
};
}  // namespace formula

struct Formula {
  std::variant<formula::Truth, formula::Equals, formula::Member, formula::Not, formula::And,
               formula::Or, formula::Quantified>
      node;
  bool operator==(const Formula&) const = default;
};

namespace rule {
struct Assign {
  term::Apply target;
  Term value;
  bool operator==(const Assign&) const = default;
};
struct Conditional {
  Formula guard;
  Box<Rule> body;
  bool operator==(const Conditional&) const = default;
};
/// Members fire in parallel; their update sets are unioned.
struct Block {
  std::vector<Rule> members;
  bool operator==(const Block&) const;
};
struct Forall {
  std::string var;
  std::string domain;
  Box<Rule> body;
  bool operator==(const Forall&) const = default;
};
/// Picks the candidate satisfying `selection` that maximizes `ranking`; ties go
/// to the element declared first in the domain.
struct Choose {
  std::string var;
  std::string domain;
  Formula selection;
  std::optional<Term> ranking;
  Box<Rule> body;
  bool operator==(const Choose&) const = default;
};
struct Call {
  std::string name;
  std::vector<Term> args;
  bool operator==(const Call&) const;
};
struct Skip {
  bool operator==(const Skip&) const = default;
};
}  // namespace rule

struct Rule {
  std::variant<rule::Assign, rule::Conditional, rule::Block, rule::Forall, rule::Choose,
               rule::Call, rule::Skip>
      node;
  /// Source label such as "RULE 1"; empty when unlabeled.
  std::string label;
  /// Stable identifier used in reports. Set by assign_rule_ids().
  std::string id;
  bool operator==(const Rule&) const = default;
};

enum class FunctionKind { kStatic, kControlled, kMonitored, kShared, kDerived, kOut };

std::string_view to_string(FunctionKind kind);
std::optional<FunctionKind> function_kind_from_string(std::string_view s);

inline constexpr std::string_view kBooleanDomain = "boolean";
inline constexpr std::string_view kIntegerDomain = "integer";

struct DomainDecl {
  std::string name;
  std::vector<std::string> elements;
  bool operator==(const DomainDecl&) const = default;
};

struct FunctionSymbol {
  std::string name;
  std::vector<std::string> arg_domains;
  std::string result_domain;
  FunctionKind kind = FunctionKind::kControlled;
  /// One instance per agent; locations carry the owning agent.
  bool local = false;
  /// For monitored symbols: the domain of agents allowed to write it. Those
  /// agents see the symbol as controlled, every other agent as monitored.
  std::string writer_domain;
  /// Derived symbols only: formal parameters and defining expression. Boolean
  /// derived symbols are defined by a formula, others by a term.
  std::vector<std::string> params;
  std::optional<std::variant<Term, Formula>> definition;

  std::size_t arity() const { return arg_domains.size(); }
  bool operator==(const FunctionSymbol&) const = default;
};

struct RuleDef {
  std::string name;
  std::vector<std::string> params;
  Rule body;
  bool operator==(const RuleDef&) const = default;
};

/// `agent x in d runs R(args)` binds every element of d; `agent a runs R(args)`
/// binds the single atom a (then `var` and `domain` are empty).
struct AgentBinding {
  std::string var;
  std::string domain;
  std::string agent;
  std::string program;
  std::vector<Term> args;
  bool operator==(const AgentBinding&) const = default;
};

struct PredicateDecl {
  std::string name;
  std::string var;
  std::string domain;
  Formula formula;
  bool operator==(const PredicateDecl&) const = default;
};

/// `ranking <counter term> for <predicate>`: a documented variant function.
struct RankingDecl {
  Term counter;
  std::string predicate;
  bool operator==(const RankingDecl&) const = default;
};

struct Model {
  std::string name;
  std::vector<DomainDecl> domains;
  std::vector<FunctionSymbol> functions;
  std::vector<RuleDef> rules;
  std::vector<AgentBinding> agents;
  std::optional<Rule> init;
  std::vector<PredicateDecl> predicates;
  std::vector<RankingDecl> rankings;
  std::optional<std::string> environment;

  bool operator==(const Model&) const = default;

  const DomainDecl* find_domain(std::string_view name) const;
  const FunctionSymbol* find_function(std::string_view name) const;
  const RuleDef* find_rule(std::string_view name) const;
  const PredicateDecl* find_predicate(std::string_view name) const;
  /// Domain declaring `atom`, or nullptr.
  const DomainDecl* domain_of_atom(std::string_view atom) const;
};

/// Gives every rule node an identifier: its label when it has one, otherwise
/// the path from the enclosing labeled node or rule definition ("Prog.1.0").
void assign_rule_ids(Model& model);

// Small construction helpers shared by the parser, builders, and tests.
namespace ast {
Term constant(Value v);
Term var(std::string name);
Term self();
Term app(std::string symbol, std::vector<Term> args = {});
Term arith(char op, Term lhs, Term rhs);
Term integer(std::int64_t i);
Term boolean(bool b);
Term undef();

Formula truth(bool b);
Formula eq(Term lhs, Term rhs);
Formula neq(Term lhs, Term rhs);
Formula member(Term element, std::string domain);
Formula negate(Formula f);
Formula all_of(std::vector<Formula> fs);
Formula any_of(std::vector<Formula> fs);
Formula forall(std::string var, std::string domain, Formula body);
Formula exists(std::string var, std::string domain, Formula body);
/// `t = true`; the parser produces this for a bare boolean term.
Formula holds(Term t);

Rule assign(std::string symbol, std::vector<Term> args, Term value);
Rule when(Formula guard, Rule body);
Rule block(std::vector<Rule> members);
Rule forall_do(std::string var, std::string domain, Rule body);
Rule choose(std::string var, std::string domain, Formula selection,
            std::optional<Term> ranking, Rule body);
Rule call(std::string name, std::vector<Term> args = {});
Rule skip();
Rule labeled(std::string label, Rule r);
}  // namespace ast

/// Symbols syntactically referenced (read) by a term or formula.
void collect_symbols(const Term& t, std::set<std::string>& out);
void collect_symbols(const Formula& f, std::set<std::string>& out);

/// Splits a formula on top-level conjunctions.
std::vector<Formula> flatten_conjuncts(const Formula& f);

}  // namespace asmstarve
