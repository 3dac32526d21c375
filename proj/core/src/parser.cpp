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

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "asmstarve/lang.hpp"
#include "lexer.hpp"

namespace asmstarve {

std::string Diagnostic::format(std::string_view file) const {
  std::ostringstream os;
  os << file << ':' << pos.line << ':' << pos.column << ": "
     << (severity == Severity::kError ? "error" : "warning") << ": " << message;
  if (!code.empty()) os << " [" << code << ']';
  return os.str();
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::kError; });
}

namespace {

using detail::Token;
using detail::TokenKind;

struct SyntaxError {
  SourcePos pos;
  std::string message;
};

const std::set<std::string, std::less<>> kKeywords = {
    "dasm",   "domain", "function", "derived",    "init",   "rule", "agent", "predicate",
    "ranking", "environment", "if", "then", "forall", "exists", "choose", "with",
    "maximizing", "do", "skip", "in", "runs", "for", "not", "and", "or", "true", "false",
    "undef", "self", "local", "by"};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  ParseResult run() {
    ParseResult result;
    try {
      if (peek().kind == TokenKind::kEnd) {
        result.diagnostics.push_back({Severity::kError, peek().pos, "E100", "no model declaration"});
        return result;
      }
      if (!at_kw("dasm")) fail(peek(), "no model declaration (expected 'dasm <name>')");
      next();
      model_.name = expect_ident("model name");
      while (peek().kind != TokenKind::kEnd) declaration();
    } catch (const SyntaxError& e) {
      diags_.push_back({Severity::kError, e.pos, "E101", e.message});
      result.diagnostics = std::move(diags_);
      return result;
    }
    resolve();
    assign_rule_ids(model_);
    for (auto& def : model_.rules) record_rule_positions(def.body, rule_positions_[def.name]);
    if (model_.init) record_rule_positions(*model_.init, rule_positions_["#init"]);
    result.model = std::move(model_);
    result.diagnostics = std::move(diags_);
    result.source_map = std::move(map_);
    return result;
  }

 private:
  // --- token helpers -------------------------------------------------------

  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool at_kw(std::string_view kw, std::size_t k = 0) const {
    return peek(k).kind == TokenKind::kIdent && peek(k).text == kw;
  }
  bool at_punct(std::string_view p, std::size_t k = 0) const {
    return peek(k).kind == TokenKind::kPunct && peek(k).text == p;
  }
  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    std::string found = t.kind == TokenKind::kEnd ? "end of input" : "'" + t.text + "'";
    throw SyntaxError{t.pos, msg + ", found " + found};
  }
  void expect_kw(std::string_view kw) {
    if (!at_kw(kw)) fail(peek(), "expected '" + std::string(kw) + "'");
    next();
  }
  void expect_punct(std::string_view p) {
    if (!at_punct(p)) fail(peek(), "expected '" + std::string(p) + "'");
    next();
  }
  std::string expect_ident(const std::string& what) {
    const Token& t = peek();
    if (t.kind != TokenKind::kIdent || kKeywords.count(t.text)) fail(t, "expected " + what);
    next();
    return t.text;
  }
  bool accept_punct(std::string_view p) {
    if (!at_punct(p)) return false;
    next();
    return true;
  }

  void duplicate(const SourcePos& pos, const std::string& what) {
    diags_.push_back({Severity::kError, pos, "E102", "duplicate declaration of " + what});
  }

  // --- scopes ---------------------------------------------------------------

  bool bound(const std::string& name) const {
    for (const auto& s : scopes_) {
      if (std::find(s.begin(), s.end(), name) != s.end()) return true;
    }
    return false;
  }
  struct ScopeGuard {
    Parser* p;
    ScopeGuard(Parser* parser, std::vector<std::string> names) : p(parser) {
      p->scopes_.push_back(std::move(names));
    }
    ~ScopeGuard() { p->scopes_.pop_back(); }
  };

  // --- declarations --------------------------------------------------------

  void declaration() {
    const Token& t = peek();
    if (at_kw("domain")) return domain_decl();
    if (at_kw("function")) return function_decl();
    if (at_kw("derived")) return derived_decl();
    if (at_kw("init")) return init_decl();
    if (at_kw("rule")) return rule_decl();
    if (at_kw("agent")) return agent_decl();
    if (at_kw("predicate")) return predicate_decl();
    if (at_kw("ranking")) return ranking_decl();
    if (at_kw("environment")) {
      next();
      if (peek().kind != TokenKind::kString) fail(peek(), "expected environment script path string");
      if (model_.environment) duplicate(t.pos, "environment");
      model_.environment = next().text;
      return;
    }
    if (at_kw("dasm")) fail(t, "only one model declaration per file");
    fail(t, "expected a declaration");
  }

  void domain_decl() {
    SourcePos pos = next().pos;
    DomainDecl d;
    d.name = expect_ident("domain name");
    expect_punct("=");
    expect_punct("{");
    if (!at_punct("}")) {
      do {
        SourcePos epos = peek().pos;
        std::string e = expect_ident("domain element");
        if (atoms_.count(e)) duplicate(epos, "element '" + e + "'");
        atoms_.insert(e);
        d.elements.push_back(std::move(e));
      } while (accept_punct(","));
    }
    expect_punct("}");
    if (d.name == kBooleanDomain || d.name == kIntegerDomain || model_.find_domain(d.name)) {
      duplicate(pos, "domain '" + d.name + "'");
    }
    map_["domain:" + d.name] = pos;
    model_.domains.push_back(std::move(d));
  }

  void function_decl() {
    SourcePos pos = next().pos;
    FunctionSymbol fn;
    fn.name = expect_ident("function name");
    expect_punct(":");
    if (!at_punct("->")) {
      fn.arg_domains.push_back(expect_ident("argument domain"));
      while (at_kw("x")) {
        next();
        fn.arg_domains.push_back(expect_ident("argument domain"));
      }
    }
    expect_punct("->");
    fn.result_domain = expect_ident("result domain");
    const Token& kt = peek();
    auto kind = kt.kind == TokenKind::kIdent ? function_kind_from_string(kt.text) : std::nullopt;
    if (!kind || *kind == FunctionKind::kDerived) {
      fail(kt, "expected function kind (static, controlled, monitored, shared, out)");
    }
    next();
    fn.kind = *kind;
    if (at_kw("local")) {
      next();
      fn.local = true;
    }
    if (at_kw("by")) {
      next();
      fn.writer_domain = expect_ident("writer domain");
    }
    add_function(std::move(fn), pos);
  }

  void derived_decl() {
    SourcePos pos = next().pos;
    FunctionSymbol fn;
    fn.kind = FunctionKind::kDerived;
    fn.name = expect_ident("derived function name");
    expect_punct("(");
    if (!at_punct(")")) {
      do {
        fn.params.push_back(expect_ident("parameter name"));
        expect_punct(":");
        fn.arg_domains.push_back(expect_ident("parameter domain"));
      } while (accept_punct(","));
    }
    expect_punct(")");
    expect_punct("->");
    fn.result_domain = expect_ident("result domain");
    expect_punct(":=");
    ScopeGuard scope(this, fn.params);
    if (fn.result_domain == kBooleanDomain) {
      fn.definition = parse_formula();
    } else {
      fn.definition = parse_term();
    }
    add_function(std::move(fn), pos);
  }

  void add_function(FunctionSymbol fn, SourcePos pos) {
    if (model_.find_function(fn.name)) duplicate(pos, "function '" + fn.name + "'");
    map_["function:" + fn.name] = pos;
    model_.functions.push_back(std::move(fn));
  }

  void init_decl() {
    SourcePos pos = next().pos;
    if (model_.init) duplicate(pos, "init block");
    map_["init"] = pos;
    current_positions_ = &rule_positions_["#init"];
    current_positions_->clear();
    model_.init = parse_rule();
    current_positions_ = nullptr;
  }

  void rule_decl() {
    SourcePos pos = next().pos;
    RuleDef def;
    def.name = expect_ident("rule name");
    expect_punct("(");
    if (!at_punct(")")) {
      do {
        def.params.push_back(expect_ident("parameter name"));
      } while (accept_punct(","));
    }
    expect_punct(")");
    expect_punct("=");
    if (model_.find_rule(def.name)) duplicate(pos, "rule '" + def.name + "'");
    map_["ruledef:" + def.name] = pos;
    ScopeGuard scope(this, def.params);
    current_positions_ = &rule_positions_[def.name];
    current_positions_->clear();
    def.body = parse_rule();
    current_positions_ = nullptr;
    model_.rules.push_back(std::move(def));
  }

  void agent_decl() {
    SourcePos pos = next().pos;
    AgentBinding b;
    std::string first = expect_ident("agent name or variable");
    if (at_kw("in")) {
      next();
      b.var = first;
      b.domain = expect_ident("agent domain");
    } else {
      b.agent = first;
    }
    expect_kw("runs");
    b.program = expect_ident("program rule name");
    std::vector<std::string> names;
    if (!b.var.empty()) names.push_back(b.var);
    ScopeGuard scope(this, names);
    expect_punct("(");
    b.args = parse_args(")");
    map_["agent:" + std::to_string(model_.agents.size())] = pos;
    model_.agents.push_back(std::move(b));
  }

  void predicate_decl() {
    SourcePos pos = next().pos;
    PredicateDecl p;
    p.name = expect_ident("predicate name");
    expect_kw("for");
    if (at_kw("self")) {
      next();
      p.var = "self";
    } else {
      p.var = expect_ident("predicate variable");
    }
    expect_kw("in");
    p.domain = expect_ident("agent domain");
    expect_punct(":=");
    std::vector<std::string> names;
    if (p.var != "self") names.push_back(p.var);
    ScopeGuard scope(this, names);
    p.formula = parse_formula();
    if (model_.find_predicate(p.name)) duplicate(pos, "predicate '" + p.name + "'");
    map_["predicate:" + p.name] = pos;
    model_.predicates.push_back(std::move(p));
  }

  void ranking_decl() {
    SourcePos pos = next().pos;
    RankingDecl r;
    r.counter = parse_term();
    expect_kw("for");
    r.predicate = expect_ident("predicate name");
    map_["ranking:" + r.predicate] = pos;
    model_.rankings.push_back(std::move(r));
  }

  // --- rules -----------------------------------------------------------------

  Rule parse_rule() {
    SourcePos pos = peek().pos;
    std::string label;
    if (peek().kind == TokenKind::kString) {
      label = next().text;
      expect_punct(":");
    }
    // Recorded in pre-order, matching the assign_rule_ids traversal.
    if (current_positions_) current_positions_->push_back(pos);
    Rule r = parse_statement();
    r.label = std::move(label);
    return r;
  }

  Rule parse_statement() {
    const Token& t = peek();
    if (at_kw("if")) {
      next();
      Formula guard = parse_formula();
      expect_kw("then");
      return ast::when(std::move(guard), parse_rule());
    }
    if (at_punct("{")) {
      next();
      std::vector<Rule> members;
      while (!at_punct("}")) {
        if (peek().kind == TokenKind::kEnd) fail(peek(), "expected '}'");
        if (accept_punct(";")) continue;
        members.push_back(parse_rule());
      }
      next();
      return ast::block(std::move(members));
    }
    if (at_kw("forall")) {
      next();
      std::string var = expect_ident("variable");
      expect_kw("in");
      std::string dom = expect_ident("domain");
      expect_kw("do");
      ScopeGuard scope(this, {var});
      return ast::forall_do(var, dom, parse_rule());
    }
    if (at_kw("choose")) {
      next();
      std::string var = expect_ident("variable");
      expect_kw("in");
      std::string dom = expect_ident("domain");
      ScopeGuard scope(this, {var});
      expect_kw("with");
      Formula sel = parse_formula();
      std::optional<Term> rank;
      if (at_kw("maximizing")) {
        next();
        rank = parse_term();
      }
      expect_kw("do");
      return ast::choose(var, dom, std::move(sel), std::move(rank), parse_rule());
    }
    if (at_kw("skip")) {
      next();
      return ast::skip();
    }
    if (t.kind == TokenKind::kIdent && !kKeywords.count(t.text)) {
      std::string name = next().text;
      std::vector<Term> args;
      bool has_parens = false;
      if (accept_punct("(")) {
        has_parens = true;
        args = parse_args(")");
      }
      if (accept_punct(":=")) {
        Term value = parse_term();
        return ast::assign(std::move(name), std::move(args), std::move(value));
      }
      if (!has_parens) fail(peek(), "expected ':=' or '(' after '" + name + "'");
      return ast::call(std::move(name), std::move(args));
    }
    fail(t, "expected a rule");
  }

  std::vector<Term> parse_args(std::string_view close) {
    std::vector<Term> args;
    if (!at_punct(close)) {
      do {
        args.push_back(parse_term());
      } while (accept_punct(","));
    }
    expect_punct(close);
    return args;
  }

  // --- formulas --------------------------------------------------------------

  Formula parse_formula() {
    std::vector<Formula> ops;
    ops.push_back(parse_conjunction());
    while (at_kw("or")) {
      next();
      ops.push_back(parse_conjunction());
    }
    return ops.size() == 1 ? std::move(ops.front()) : ast::any_of(std::move(ops));
  }

  Formula parse_conjunction() {
    std::vector<Formula> ops;
    ops.push_back(parse_negation());
    while (at_kw("and")) {
      next();
      ops.push_back(parse_negation());
    }
    return ops.size() == 1 ? std::move(ops.front()) : ast::all_of(std::move(ops));
  }

  Formula parse_negation() {
    if (at_kw("not")) {
      next();
      return ast::negate(parse_negation());
    }
    if (at_kw("forall") || at_kw("exists")) {
      bool universal = next().text == "forall";
      std::string var = expect_ident("variable");
      expect_kw("in");
      std::string dom = expect_ident("domain");
      expect_punct(":");
      ScopeGuard scope(this, {var});
      Formula body = parse_formula();
      return universal ? ast::forall(var, dom, std::move(body)) : ast::exists(var, dom, std::move(body));
    }
    return parse_atomic();
  }

  bool at_term_continuation() const {
    return at_punct("=") || at_punct("!=") || at_punct("+") || at_punct("-") || at_kw("in");
  }

  Formula parse_atomic() {
    if (at_punct("(")) {
      std::size_t save = pos_;
      try {
        next();
        Formula inner = parse_formula();
        expect_punct(")");
        if (!at_term_continuation()) return inner;
      } catch (const SyntaxError&) {
      }
      pos_ = save;
    }
    if ((at_kw("true") || at_kw("false")) && !(at_punct("=", 1) || at_punct("!=", 1))) {
      return ast::truth(next().text == "true");
    }
    Term lhs = parse_term();
    if (accept_punct("=")) return ast::eq(std::move(lhs), parse_term());
    if (accept_punct("!=")) return ast::neq(std::move(lhs), parse_term());
    if (at_kw("in")) {
      next();
      return ast::member(std::move(lhs), expect_ident("domain"));
    }
    return ast::holds(std::move(lhs));
  }

  // --- terms -----------------------------------------------------------------

  Term parse_term() {
    Term lhs = parse_primary();
    while (at_punct("+") || at_punct("-")) {
      char op = next().text[0];
      lhs = ast::arith(op, std::move(lhs), parse_primary());
    }
    return lhs;
  }

  Value parse_literal_value() {
    const Token& t = peek();
    if (at_punct("-") && peek(1).kind == TokenKind::kInt) {
      next();
      return Value::integer(-std::stoll(next().text));
    }
    if (t.kind == TokenKind::kInt) return Value::integer(std::stoll(next().text));
    if (at_kw("true") || at_kw("false")) return Value::boolean(next().text == "true");
    if (at_kw("undef")) {
      next();
      return Value::undef();
    }
    if (at_punct("[")) {
      next();
      std::vector<Value> items;
      if (!at_punct("]")) {
        do {
          items.push_back(parse_literal_value());
        } while (accept_punct(","));
      }
      expect_punct("]");
      return Value::sequence(std::move(items));
    }
    if (t.kind == TokenKind::kIdent && !kKeywords.count(t.text)) {
      // Atom names inside sequence literals; domains are attached in resolve().
      return Value::atom("", next().text);
    }
    fail(t, "expected a literal");
  }

  Term parse_primary() {
    const Token& t = peek();
    if ((at_punct("-") && peek(1).kind == TokenKind::kInt) || t.kind == TokenKind::kInt ||
        at_kw("true") || at_kw("false") || at_kw("undef") || at_punct("[")) {
      return ast::constant(parse_literal_value());
    }
    if (at_kw("self")) {
      next();
      return ast::self();
    }
    if (accept_punct("(")) {
      Term inner = parse_term();
      expect_punct(")");
      return inner;
    }
    if (t.kind == TokenKind::kIdent && !kKeywords.count(t.text)) {
      std::string name = next().text;
      if (accept_punct("(")) return ast::app(std::move(name), parse_args(")"));
      if (bound(name)) return ast::var(std::move(name));
      return ast::app(std::move(name));
    }
    fail(t, "expected a term");
  }

  // --- post-processing ---------------------------------------------------------

  // Unscoped bare names: function symbol, else atom, else a free variable
  // (e.g. a program parameter referenced by a predicate).
  void resolve_value(Value& v) {
    if (v.is_seq()) {
      std::vector<Value> items = v.as_seq();
      for (auto& i : items) resolve_value(i);
      v = Value::sequence(std::move(items));
    } else if (v.is_atom() && v.as_atom().domain.empty()) {
      if (const auto* d = model_.domain_of_atom(v.as_atom().name)) v = Value::atom(d->name, v.as_atom().name);
    }
  }
  void resolve(Term& t) {
    if (auto* app = std::get_if<term::Apply>(&t.node)) {
      for (auto& a : app->args) resolve(a);
      if (app->args.empty() && !model_.find_function(app->symbol)) {
        if (const auto* d = model_.domain_of_atom(app->symbol)) {
          t = ast::constant(Value::atom(d->name, app->symbol));
        } else {
          t = ast::var(app->symbol);
        }
      }
    } else if (auto* ar = std::get_if<term::Arith>(&t.node)) {
      resolve(*ar->lhs);
      resolve(*ar->rhs);
    } else if (auto* c = std::get_if<term::Constant>(&t.node)) {
      resolve_value(c->value);
    }
  }
  void resolve(Formula& f) {
    std::visit(
        [&](auto& n) {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, formula::Equals>) {
            resolve(n.lhs);
            resolve(n.rhs);
          } else if constexpr (std::is_same_v<N, formula::Member>) {
            resolve(n.element);
          } else if constexpr (std::is_same_v<N, formula::Not>) {
            resolve(*n.operand);
          } else if constexpr (std::is_same_v<N, formula::And> || std::is_same_v<N, formula::Or>) {
            for (auto& op : n.operands) resolve(op);
          } else if constexpr (std::is_same_v<N, formula::Quantified>) {
            resolve(*n.body);
          }
        },
        f.node);
  }
  void resolve(Rule& r) {
    std::visit(
        [&](auto& n) {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, rule::Assign>) {
            for (auto& a : n.target.args) resolve(a);
            resolve(n.value);
          } else if constexpr (std::is_same_v<N, rule::Conditional>) {
            resolve(n.guard);
            resolve(*n.body);
          } else if constexpr (std::is_same_v<N, rule::Block>) {
            for (auto& m : n.members) resolve(m);
          } else if constexpr (std::is_same_v<N, rule::Forall>) {
            resolve(*n.body);
          } else if constexpr (std::is_same_v<N, rule::Choose>) {
            resolve(n.selection);
            if (n.ranking) resolve(*n.ranking);
            resolve(*n.body);
          } else if constexpr (std::is_same_v<N, rule::Call>) {
            for (auto& a : n.args) resolve(a);
          }
        },
        r.node);
  }
  void resolve() {
    for (auto& fn : model_.functions) {
      if (fn.definition) std::visit([&](auto& d) { resolve(d); }, *fn.definition);
    }
    for (auto& def : model_.rules) resolve(def.body);
    if (model_.init) resolve(*model_.init);
    for (auto& a : model_.agents) {
      for (auto& t : a.args) resolve(t);
    }
    for (auto& p : model_.predicates) resolve(p.formula);
    for (auto& rk : model_.rankings) resolve(rk.counter);
  }

  void record_rule_positions(const Rule& root, const std::vector<SourcePos>& positions) {
    std::size_t idx = 0;
    auto walk = [&](auto& self, const Rule& r) -> void {
      if (idx < positions.size()) map_["rule:" + r.id] = positions[idx];
      ++idx;
      std::visit(
          [&](const auto& n) {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, rule::Conditional> || std::is_same_v<N, rule::Forall> ||
                          std::is_same_v<N, rule::Choose>) {
              self(self, *n.body);
            } else if constexpr (std::is_same_v<N, rule::Block>) {
              for (const auto& m : n.members) self(self, m);
            }
          },
          r.node);
    };
    walk(walk, root);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Model model_;
  std::vector<Diagnostic> diags_;
  SourceMap map_;
  std::set<std::string> atoms_;
  std::vector<std::vector<std::string>> scopes_;
  std::map<std::string, std::vector<SourcePos>> rule_positions_;
  std::vector<SourcePos>* current_positions_ = nullptr;
};

}  // namespace

ParseResult parse_model(std::string_view text) {
  std::vector<detail::Token> tokens;
  try {
    tokens = detail::tokenize(text);
  } catch (const detail::LexError& e) {
    ParseResult r;
    r.diagnostics.push_back({Severity::kError, e.pos, "E101", e.message});
    return r;
  }
  return Parser(std::move(tokens)).run();
}

ParseResult load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ParseResult r;
    r.diagnostics.push_back({Severity::kError, {0, 0}, "E001", "cannot open model file '" + path + "'"});
    return r;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  ParseResult r = parse_model(ss.str());
  if (r.model && !has_errors(r.diagnostics)) {
    auto more = validate_model(*r.model, &r.source_map);
    r.diagnostics.insert(r.diagnostics.end(), more.begin(), more.end());
  }
  return r;
}

}  // namespace asmstarve
