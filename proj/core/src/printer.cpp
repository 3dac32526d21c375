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

#include <sstream>

#include "asmstarve/lang.hpp"

namespace asmstarve {

namespace {

std::string value_text(const Value& v) {
  // Value::to_string already prints atoms by bare name and sequences as [..].
  return v.to_string();
}

bool is_compound_term(const Term& t) { return std::holds_alternative<term::Arith>(t.node); }

void print_term(std::ostream& os, const Term& t) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, term::Constant>) {
          os << value_text(n.value);
        } else if constexpr (std::is_same_v<N, term::Variable>) {
          os << n.name;
        } else if constexpr (std::is_same_v<N, term::Self>) {
          os << "self";
        } else if constexpr (std::is_same_v<N, term::Apply>) {
          os << n.symbol;
          if (!n.args.empty()) {
            os << '(';
            for (std::size_t i = 0; i < n.args.size(); ++i) {
              if (i) os << ", ";
              print_term(os, n.args[i]);
            }
            os << ')';
          }
        } else {
          print_term(os, *n.lhs);
          os << ' ' << n.op << ' ';
          if (is_compound_term(*n.rhs)) {
            os << '(';
            print_term(os, *n.rhs);
            os << ')';
          } else {
            print_term(os, *n.rhs);
          }
        }
      },
      t.node);
}

enum class Prec { kOr, kAnd, kUnary };

/// `t = true` prints as the bare term, which parses back to the same shape.
const Term* bare_term(const formula::Equals& e) {
  const auto* c = std::get_if<term::Constant>(&e.rhs.node);
  if (!c || c->value != Value::boolean(true)) return nullptr;
  if (!std::holds_alternative<term::Apply>(e.lhs.node) && !std::holds_alternative<term::Variable>(e.lhs.node)) {
    return nullptr;
  }
  return &e.lhs;
}

void print_formula(std::ostream& os, const Formula& f, Prec ctx);

void print_operand(std::ostream& os, const Formula& f, Prec ctx) {
  bool needs_parens = false;
  if (std::holds_alternative<formula::Or>(f.node)) needs_parens = ctx != Prec::kOr;
  if (std::holds_alternative<formula::And>(f.node)) needs_parens = ctx == Prec::kUnary;
  // A quantifier body extends to the right, so nested quantifiers are closed.
  if (std::holds_alternative<formula::Quantified>(f.node)) needs_parens = true;
  // Negated or-chains and conjunctions are parenthesized above; a nested
  // or-chain inside an or-chain must be parenthesized to keep its shape.
  if (needs_parens) os << '(';
  print_formula(os, f, needs_parens ? Prec::kOr : ctx);
  if (needs_parens) os << ')';
}

void print_formula(std::ostream& os, const Formula& f, Prec ctx) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, formula::Truth>) {
          os << (n.value ? "true" : "false");
        } else if constexpr (std::is_same_v<N, formula::Equals>) {
          if (const Term* t = bare_term(n)) {
            print_term(os, *t);
            return;
          }
          print_term(os, n.lhs);
          os << " = ";
          print_term(os, n.rhs);
        } else if constexpr (std::is_same_v<N, formula::Member>) {
          print_term(os, n.element);
          os << " in " << n.domain;
        } else if constexpr (std::is_same_v<N, formula::Not>) {
          const auto* e = std::get_if<formula::Equals>(&n.operand->node);
          if (e && bare_term(*e)) {
            os << "not ";
            print_term(os, *bare_term(*e));
          } else if (e) {
            print_term(os, e->lhs);
            os << " != ";
            print_term(os, e->rhs);
          } else {
            os << "not ";
            print_operand(os, *n.operand, Prec::kUnary);
          }
        } else if constexpr (std::is_same_v<N, formula::And>) {
          for (std::size_t i = 0; i < n.operands.size(); ++i) {
            if (i) os << " and ";
            // Nested conjunctions are kept as written.
            if (std::holds_alternative<formula::And>(n.operands[i].node)) {
              os << '(';
              print_formula(os, n.operands[i], Prec::kOr);
              os << ')';
            } else {
              print_operand(os, n.operands[i], Prec::kAnd);
            }
          }
        } else if constexpr (std::is_same_v<N, formula::Or>) {
          for (std::size_t i = 0; i < n.operands.size(); ++i) {
            if (i) os << " or ";
            if (std::holds_alternative<formula::Or>(n.operands[i].node)) {
              os << '(';
              print_formula(os, n.operands[i], Prec::kOr);
              os << ')';
            } else {
              print_operand(os, n.operands[i], Prec::kOr);
            }
          }
        } else {
          os << (n.universal ? "forall " : "exists ") << n.var << " in " << n.domain << " : ";
          print_formula(os, *n.body, Prec::kOr);
        }
      },
      f.node);
  (void)ctx;
}

class RulePrinter {
 public:
  explicit RulePrinter(std::ostream& os) : os_(os) {}

  // Prints `r` starting at the current column; nested lines use `indent`.
  void print(const Rule& r, int indent) {
    if (!r.label.empty()) os_ << '"' << r.label << "\": ";
    std::visit(
        [&](const auto& n) {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, rule::Assign>) {
            print_term(os_, Term{n.target});
            os_ << " := ";
            print_term(os_, n.value);
          } else if constexpr (std::is_same_v<N, rule::Conditional>) {
            os_ << "if ";
            print_formula(os_, n.guard, Prec::kOr);
            os_ << " then ";
            print(*n.body, indent);
          } else if constexpr (std::is_same_v<N, rule::Block>) {
            if (n.members.empty()) {
              os_ << "{ }";
              return;
            }
            os_ << "{\n";
            for (const auto& m : n.members) {
              pad(indent + 2);
              print(m, indent + 2);
              os_ << '\n';
            }
            pad(indent);
            os_ << '}';
          } else if constexpr (std::is_same_v<N, rule::Forall>) {
            os_ << "forall " << n.var << " in " << n.domain << " do ";
            print(*n.body, indent);
          } else if constexpr (std::is_same_v<N, rule::Choose>) {
            os_ << "choose " << n.var << " in " << n.domain << " with ";
            print_formula(os_, n.selection, Prec::kOr);
            if (n.ranking) {
              os_ << " maximizing ";
              print_term(os_, *n.ranking);
            }
            os_ << " do ";
            print(*n.body, indent);
          } else if constexpr (std::is_same_v<N, rule::Call>) {
            os_ << n.name << '(';
            for (std::size_t i = 0; i < n.args.size(); ++i) {
              if (i) os_ << ", ";
              print_term(os_, n.args[i]);
            }
            os_ << ')';
          } else {
            os_ << "skip";
          }
        },
        r.node);
  }

 private:
  void pad(int n) { os_ << std::string(static_cast<std::size_t>(n), ' '); }
  std::ostream& os_;
};

}  // namespace

std::string to_text(const Term& t) {
  std::ostringstream os;
  print_term(os, t);
  return os.str();
}

std::string to_text(const Formula& f) {
  std::ostringstream os;
  print_formula(os, f, Prec::kOr);
  return os.str();
}

std::string pretty_print(const Model& m) {
  std::ostringstream os;
  RulePrinter rp(os);
  os << "dasm " << m.name << "\n";
  if (m.environment) os << "\nenvironment \"" << *m.environment << "\"\n";

  if (!m.domains.empty()) os << '\n';
  for (const auto& d : m.domains) {
    os << "domain " << d.name << " = {";
    for (std::size_t i = 0; i < d.elements.size(); ++i) os << (i ? ", " : "") << d.elements[i];
    os << "}\n";
  }

  if (!m.functions.empty()) os << '\n';
  for (const auto& fn : m.functions) {
    if (fn.kind == FunctionKind::kDerived) {
      os << "derived " << fn.name << '(';
      for (std::size_t i = 0; i < fn.params.size(); ++i) {
        os << (i ? ", " : "") << fn.params[i] << " : " << fn.arg_domains[i];
      }
      os << ") -> " << fn.result_domain << " := ";
      if (fn.definition) {
        std::visit(
            [&](const auto& d) {
              if constexpr (std::is_same_v<std::decay_t<decltype(d)>, Term>) {
                os << to_text(d);
              } else {
                os << to_text(d);
              }
            },
            *fn.definition);
      }
      os << '\n';
      continue;
    }
    os << "function " << fn.name << " : ";
    for (std::size_t i = 0; i < fn.arg_domains.size(); ++i) os << (i ? " x " : "") << fn.arg_domains[i];
    os << (fn.arg_domains.empty() ? "-> " : " -> ") << fn.result_domain << ' ' << to_string(fn.kind);
    if (fn.local) os << " local";
    if (!fn.writer_domain.empty()) os << " by " << fn.writer_domain;
    os << '\n';
  }

  if (m.init) {
    os << "\ninit ";
    rp.print(*m.init, 0);
    os << '\n';
  }

  for (const auto& def : m.rules) {
    os << "\nrule " << def.name << '(';
    for (std::size_t i = 0; i < def.params.size(); ++i) os << (i ? ", " : "") << def.params[i];
    os << ") = ";
    rp.print(def.body, 0);
    os << '\n';
  }

  if (!m.agents.empty()) os << '\n';
  for (const auto& a : m.agents) {
    os << "agent ";
    if (!a.domain.empty()) {
      os << a.var << " in " << a.domain;
    } else {
      os << a.agent;
    }
    os << " runs " << a.program << '(';
    for (std::size_t i = 0; i < a.args.size(); ++i) os << (i ? ", " : "") << to_text(a.args[i]);
    os << ")\n";
  }

  if (!m.predicates.empty()) os << '\n';
  for (const auto& p : m.predicates) {
    os << "predicate " << p.name << " for " << p.var << " in " << p.domain << " := "
       << to_text(p.formula) << '\n';
  }

  if (!m.rankings.empty()) os << '\n';
  for (const auto& r : m.rankings) os << "ranking " << to_text(r.counter) << " for " << r.predicate << '\n';
  return os.str();
}

}  // namespace asmstarve
