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
#include <functional>
#include <map>
#include <set>

#include "asmstarve/lang.hpp"

namespace asmstarve {

namespace {

struct Context {
  std::set<std::string> scope;
  bool agent = false;  // `self` and agent-local symbols available
  bool init = false;
  SourcePos pos;
};

class Validator {
 public:
  Validator(const Model& m, const SourceMap* positions) : m_(m), positions_(positions) {
    for (const auto& d : m_.domains) {
      for (const auto& e : d.elements) atoms_.insert(e);
    }
  }

  std::vector<Diagnostic> run() {
    check_domains_and_functions();
    check_rule_defs();
    check_init();
    check_agents();
    check_predicates();
    check_rankings();
    check_call_cycles();
    check_derived_cycles();
    check_unused();
    return std::move(diags_);
  }

 private:
  SourcePos at(const std::string& key) const {
    if (!positions_) return {};
    auto it = positions_->find(key);
    return it == positions_->end() ? SourcePos{} : it->second;
  }
  void error(SourcePos pos, std::string code, std::string msg) {
    diags_.push_back({Severity::kError, pos, std::move(code), std::move(msg)});
  }
  void warning(SourcePos pos, std::string code, std::string msg) {
    diags_.push_back({Severity::kWarning, pos, std::move(code), std::move(msg)});
  }

  bool known_domain(const std::string& d) const {
    return d == kBooleanDomain || d == kIntegerDomain || m_.find_domain(d) != nullptr;
  }
  bool finite_domain(const std::string& d) const {
    return d == kBooleanDomain || m_.find_domain(d) != nullptr;
  }

  void check_domains_and_functions() {
    for (const auto& fn : m_.functions) {
      SourcePos pos = at("function:" + fn.name);
      for (const auto& d : fn.arg_domains) {
        if (!known_domain(d)) error(pos, "E201", "unknown domain '" + d + "' in signature of '" + fn.name + "'");
      }
      if (!known_domain(fn.result_domain)) {
        error(pos, "E201", "unknown domain '" + fn.result_domain + "' in signature of '" + fn.name + "'");
      }
      if (atoms_.count(fn.name)) error(pos, "E202", "'" + fn.name + "' is declared both as function and as domain element");
      if (m_.find_rule(fn.name)) error(pos, "E202", "'" + fn.name + "' is declared both as function and as rule");
      if (!fn.writer_domain.empty()) {
        if (fn.kind != FunctionKind::kMonitored) {
          error(pos, "E203", "'by' clause is only allowed on monitored symbols ('" + fn.name + "')");
        }
        if (!m_.find_domain(fn.writer_domain)) {
          error(pos, "E201", "unknown writer domain '" + fn.writer_domain + "' for '" + fn.name + "'");
        }
      }
      if (fn.kind == FunctionKind::kDerived) {
        if (!fn.definition) {
          error(pos, "E204", "derived symbol '" + fn.name + "' has no definition");
          continue;
        }
        if (fn.local) error(pos, "E203", "derived symbol '" + fn.name + "' cannot be agent-local");
        Context ctx;
        ctx.scope.insert(fn.params.begin(), fn.params.end());
        ctx.pos = pos;
        if (fn.result_domain == kBooleanDomain && !std::holds_alternative<Formula>(*fn.definition)) {
          error(pos, "E204", "boolean derived symbol '" + fn.name + "' must be defined by a formula");
        }
        std::visit([&](const auto& d) { check(d, ctx); }, *fn.definition);
      } else if (fn.definition) {
        error(pos, "E204", "only derived symbols may have a definition ('" + fn.name + "')");
      }
    }
  }

  // --- expressions --------------------------------------------------------------

  void check(const Term& t, const Context& ctx) {
    std::visit(
        [&](const auto& n) {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, term::Variable>) {
            if (!ctx.scope.count(n.name)) error(ctx.pos, "E210", "unbound variable '" + n.name + "'");
          } else if constexpr (std::is_same_v<N, term::Self>) {
            if (!ctx.agent) error(ctx.pos, "E211", "'self' used outside an agent context");
          } else if constexpr (std::is_same_v<N, term::Apply>) {
            check_application(n, ctx, /*write=*/false);
          } else if constexpr (std::is_same_v<N, term::Arith>) {
            check(*n.lhs, ctx);
            check(*n.rhs, ctx);
          } else if constexpr (std::is_same_v<N, term::Constant>) {
            check_constant(n.value, ctx);
          }
        },
        t.node);
  }

  void check_constant(const Value& v, const Context& ctx) {
    if (v.is_atom() && v.as_atom().domain.empty()) {
      error(ctx.pos, "E212", "unknown element '" + v.as_atom().name + "'");
    } else if (v.is_seq()) {
      for (const auto& i : v.as_seq()) check_constant(i, ctx);
    }
  }

  void check_application(const term::Apply& app, const Context& ctx, bool write) {
    used_.insert(app.symbol);
    for (const auto& a : app.args) check(a, ctx);
    const auto* fn = m_.find_function(app.symbol);
    if (!fn) {
      if (m_.find_rule(app.symbol)) {
        error(ctx.pos, "E213", "rule '" + app.symbol + "' used as a function");
      } else {
        error(ctx.pos, "E213", "unknown function symbol '" + app.symbol + "'");
      }
      return;
    }
    if (fn->arity() != app.args.size()) {
      error(ctx.pos, "E214", "'" + fn->name + "' expects " + std::to_string(fn->arity()) +
                                 " argument(s), got " + std::to_string(app.args.size()));
    }
    if (!write && fn->kind == FunctionKind::kOut) {
      error(ctx.pos, "E215", "out symbol '" + fn->name + "' is read");
    }
    if (fn->local && !ctx.agent) {
      error(ctx.pos, "E216", "agent-local symbol '" + fn->name + "' used outside an agent context");
    }
  }

  void check(const Formula& f, const Context& ctx) {
    std::visit(
        [&](const auto& n) {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, formula::Equals>) {
            check(n.lhs, ctx);
            check(n.rhs, ctx);
          } else if constexpr (std::is_same_v<N, formula::Member>) {
            check(n.element, ctx);
            if (!known_domain(n.domain)) error(ctx.pos, "E201", "unknown domain '" + n.domain + "'");
          } else if constexpr (std::is_same_v<N, formula::Not>) {
            check(*n.operand, ctx);
          } else if constexpr (std::is_same_v<N, formula::And> || std::is_same_v<N, formula::Or>) {
            for (const auto& op : n.operands) check(op, ctx);
          } else if constexpr (std::is_same_v<N, formula::Quantified>) {
            if (!finite_domain(n.domain)) {
              error(ctx.pos, "E217", "quantifier over '" + n.domain + "', which is not a finite domain");
            }
            Context inner = ctx;
            inner.scope.insert(n.var);
            check(*n.body, inner);
          }
        },
        f.node);
  }

  void check(const Rule& r, const Context& outer, const std::string& owner) {
    Context ctx = outer;
    SourcePos p = at("rule:" + r.id);
    if (p.line) ctx.pos = p;
    if (!r.id.empty()) {
      auto [it, fresh] = rule_ids_.emplace(r.id, owner);
      if (!fresh) error(ctx.pos, "E220", "duplicate rule label '" + r.id + "'");
    }
    std::visit(
        [&](const auto& n) {
          using N = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<N, rule::Assign>) {
            check_application(n.target, ctx, /*write=*/true);
            check(n.value, ctx);
            check_write(n.target.symbol, ctx, owner);
          } else if constexpr (std::is_same_v<N, rule::Conditional>) {
            check(n.guard, ctx);
            check(*n.body, ctx, owner);
          } else if constexpr (std::is_same_v<N, rule::Block>) {
            for (const auto& mbr : n.members) check(mbr, ctx, owner);
          } else if constexpr (std::is_same_v<N, rule::Forall>) {
            if (!finite_domain(n.domain)) {
              error(ctx.pos, "E217", "forall over '" + n.domain + "', which is not a finite domain");
            }
            Context inner = ctx;
            inner.scope.insert(n.var);
            check(*n.body, inner, owner);
          } else if constexpr (std::is_same_v<N, rule::Choose>) {
            if (!finite_domain(n.domain)) {
              error(ctx.pos, "E217", "choose over '" + n.domain + "', which is not a finite domain");
            }
            Context inner = ctx;
            inner.scope.insert(n.var);
            check(n.selection, inner);
            if (n.ranking) check(*n.ranking, inner);
            check(*n.body, inner, owner);
          } else if constexpr (std::is_same_v<N, rule::Call>) {
            for (const auto& a : n.args) check(a, ctx);
            const auto* def = m_.find_rule(n.name);
            if (!def) {
              error(ctx.pos, "E221", "call to unknown rule '" + n.name + "'");
            } else if (def->params.size() != n.args.size()) {
              error(ctx.pos, "E214", "rule '" + n.name + "' expects " + std::to_string(def->params.size()) +
                                         " argument(s), got " + std::to_string(n.args.size()));
            }
            if (!ctx.init) calls_[owner].insert(n.name);
          }
        },
        r.node);
  }

  void check_write(const std::string& symbol, const Context& ctx, const std::string& owner) {
    const auto* fn = m_.find_function(symbol);
    if (!fn) return;
    switch (fn->kind) {
      case FunctionKind::kDerived:
        error(ctx.pos, "E230", "derived symbol '" + symbol + "' is written");
        break;
      case FunctionKind::kStatic:
        if (!ctx.init) error(ctx.pos, "E231", "static symbol '" + symbol + "' written after initialization");
        break;
      case FunctionKind::kMonitored:
        if (ctx.init) break;
        if (fn->writer_domain.empty()) {
          error(ctx.pos, "E232", "monitored symbol written by agent ('" + symbol + "')");
        } else {
          monitored_writes_[owner].push_back({symbol, ctx.pos});
        }
        break;
      default:
        break;
    }
  }

  void check_rule_defs() {
    for (const auto& def : m_.rules) {
      Context ctx;
      ctx.agent = true;
      ctx.scope.insert(def.params.begin(), def.params.end());
      ctx.pos = at("ruledef:" + def.name);
      std::set<std::string> seen;
      for (const auto& p : def.params) {
        if (!seen.insert(p).second) error(ctx.pos, "E222", "duplicate parameter '" + p + "' in rule '" + def.name + "'");
      }
      check(def.body, ctx, def.name);
    }
  }

  void check_init() {
    if (!m_.init) {
      error({}, "E240", "missing init block");
      return;
    }
    Context ctx;
    ctx.init = true;
    ctx.pos = at("init");
    check(*m_.init, ctx, "#init");
  }

  std::set<std::string> reachable_rules(const std::string& program) const {
    std::set<std::string> seen;
    std::vector<std::string> todo{program};
    while (!todo.empty()) {
      std::string r = todo.back();
      todo.pop_back();
      if (!seen.insert(r).second) continue;
      auto it = calls_.find(r);
      if (it != calls_.end()) todo.insert(todo.end(), it->second.begin(), it->second.end());
    }
    return seen;
  }

  void check_agents() {
    std::set<std::string> ids;
    for (std::size_t i = 0; i < m_.agents.size(); ++i) {
      const auto& b = m_.agents[i];
      SourcePos pos = at("agent:" + std::to_string(i));
      std::vector<std::string> members;
      std::string agent_domain;
      if (!b.domain.empty()) {
        const auto* d = m_.find_domain(b.domain);
        if (!d) {
          error(pos, "E201", "unknown agent domain '" + b.domain + "'");
        } else {
          members = d->elements;
          agent_domain = d->name;
        }
      } else {
        const auto* d = m_.domain_of_atom(b.agent);
        if (!d) {
          error(pos, "E250", "agent '" + b.agent + "' is not an element of any domain");
        } else {
          members.push_back(b.agent);
          agent_domain = d->name;
        }
      }
      for (const auto& a : members) {
        if (!ids.insert(a).second) error(pos, "E251", "agent '" + a + "' is bound more than once");
      }
      Context ctx;
      ctx.pos = pos;
      if (!b.var.empty()) ctx.scope.insert(b.var);
      for (const auto& a : b.args) check(a, ctx);
      const auto* def = m_.find_rule(b.program);
      if (!def) {
        error(pos, "E221", "agent runs unknown rule '" + b.program + "'");
        continue;
      }
      if (def->params.size() != b.args.size()) {
        error(pos, "E214", "rule '" + b.program + "' expects " + std::to_string(def->params.size()) +
                               " argument(s), got " + std::to_string(b.args.size()));
      }
      for (const auto& r : reachable_rules(b.program)) {
        auto it = monitored_writes_.find(r);
        if (it == monitored_writes_.end()) continue;
        for (const auto& [symbol, wpos] : it->second) {
          const auto* fn = m_.find_function(symbol);
          if (fn && fn->writer_domain != agent_domain) {
            error(wpos, "E232", "monitored symbol written by agent ('" + symbol + "' is writable only by '" +
                                    fn->writer_domain + "' agents)");
          }
        }
      }
    }
  }

  void check_predicates() {
    for (const auto& p : m_.predicates) {
      SourcePos pos = at("predicate:" + p.name);
      Context ctx;
      ctx.agent = true;
      ctx.pos = pos;
      if (p.var != "self") ctx.scope.insert(p.var);
      const auto* d = m_.find_domain(p.domain);
      if (!d) {
        error(pos, "E201", "unknown domain '" + p.domain + "' for predicate '" + p.name + "'");
        continue;
      }
      // Program parameters shared by every agent of the domain are in scope.
      std::optional<std::set<std::string>> params;
      for (const auto& b : m_.agents) {
        bool covers = b.domain == p.domain ||
                      (b.domain.empty() && std::find(d->elements.begin(), d->elements.end(), b.agent) !=
                                               d->elements.end());
        if (!covers) continue;
        const auto* def = m_.find_rule(b.program);
        std::set<std::string> names;
        if (def) names.insert(def->params.begin(), def->params.end());
        if (!params) {
          params = names;
        } else {
          std::set<std::string> both;
          std::set_intersection(params->begin(), params->end(), names.begin(), names.end(),
                                std::inserter(both, both.begin()));
          params = both;
        }
      }
      if (!params) warning(pos, "W301", "predicate '" + p.name + "' applies to no agent");
      if (params) ctx.scope.insert(params->begin(), params->end());
      check(p.formula, ctx);
      std::set<std::string> syms;
      collect_symbols(p.formula, syms);
      if (syms.empty()) warning(pos, "W302", "predicate '" + p.name + "' references no locations");
    }
  }

  void check_rankings() {
    for (const auto& r : m_.rankings) {
      SourcePos pos = at("ranking:" + r.predicate);
      const auto* p = m_.find_predicate(r.predicate);
      if (!p) {
        error(pos, "E260", "ranking for unknown predicate '" + r.predicate + "'");
        continue;
      }
      const auto* app = std::get_if<term::Apply>(&r.counter.node);
      if (!app || !m_.find_function(app->symbol)) {
        error(pos, "E261", "ranking counter must be a function application");
        continue;
      }
      Context ctx;
      ctx.agent = true;
      ctx.pos = pos;
      if (p->var != "self") ctx.scope.insert(p->var);
      for (const auto& b : m_.agents) {
        if (b.domain == p->domain || !b.agent.empty()) {
          if (const auto* def = m_.find_rule(b.program)) ctx.scope.insert(def->params.begin(), def->params.end());
        }
      }
      check(r.counter, ctx);
    }
  }

  void check_call_cycles() {
    std::map<std::string, int> color;
    std::function<bool(const std::string&)> dfs = [&](const std::string& r) {
      color[r] = 1;
      auto it = calls_.find(r);
      if (it != calls_.end()) {
        for (const auto& c : it->second) {
          if (color[c] == 1) return true;
          if (color[c] == 0 && dfs(c)) return true;
        }
      }
      color[r] = 2;
      return false;
    };
    for (const auto& def : m_.rules) {
      if (color[def.name] == 0 && dfs(def.name)) {
        error(at("ruledef:" + def.name), "E223", "recursive rule call involving '" + def.name + "'");
        return;
      }
    }
  }

  void check_derived_cycles() {
    std::map<std::string, std::set<std::string>> deps;
    for (const auto& fn : m_.functions) {
      if (fn.kind != FunctionKind::kDerived || !fn.definition) continue;
      std::set<std::string> syms;
      std::visit([&](const auto& d) { collect_symbols(d, syms); }, *fn.definition);
      for (const auto& s : syms) {
        const auto* g = m_.find_function(s);
        if (g && g->kind == FunctionKind::kDerived) deps[fn.name].insert(s);
      }
    }
    std::map<std::string, int> color;
    std::function<bool(const std::string&)> dfs = [&](const std::string& f) {
      color[f] = 1;
      for (const auto& g : deps[f]) {
        if (color[g] == 1) return true;
        if (color[g] == 0 && dfs(g)) return true;
      }
      color[f] = 2;
      return false;
    };
    for (const auto& [f, _] : deps) {
      if (color[f] == 0 && dfs(f)) {
        error(at("function:" + f), "E205", "cyclic derived definition involving '" + f + "'");
        return;
      }
    }
  }

  void check_unused() {
    for (const auto& fn : m_.functions) {
      if (!used_.count(fn.name)) {
        warning(at("function:" + fn.name), "W303", "function '" + fn.name + "' is never used");
      }
    }
  }

  const Model& m_;
  const SourceMap* positions_;
  std::set<std::string> atoms_;
  std::set<std::string> used_;
  std::map<std::string, std::string> rule_ids_;
  std::map<std::string, std::set<std::string>> calls_;
  std::map<std::string, std::vector<std::pair<std::string, SourcePos>>> monitored_writes_;
  std::vector<Diagnostic> diags_;
};

}  // namespace

std::vector<Diagnostic> validate_model(const Model& model, const SourceMap* positions) {
  Model m = model;
  assign_rule_ids(m);
  return Validator(m, positions).run();
}

}  // namespace asmstarve
