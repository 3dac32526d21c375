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

#include "asmstarve/analysis.hpp"

#include <algorithm>
#include <map>
#include <memory>

#include "asmstarve/grounding.hpp"
#include "asmstarve/lang.hpp"

namespace asmstarve {

namespace {

constexpr int kMaxInlineDepth = 64;

std::set<std::string> symbols_of(const Term& t) {
  std::set<std::string> s;
  collect_symbols(t, s);
  return s;
}
std::set<std::string> symbols_of(const Formula& f) {
  std::set<std::string> s;
  collect_symbols(f, s);
  return s;
}

void merge(std::set<std::string>& into, const std::set<std::string>& from) {
  into.insert(from.begin(), from.end());
}

std::string join(const std::vector<std::string>& parts, const std::string& sep = ", ") {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string join(const std::set<std::string>& parts) {
  return join(std::vector<std::string>(parts.begin(), parts.end()));
}

// --- footprints and write sites ----------------------------------------------------

void walk_footprint(const Machine& m, const Rule& r, RuleFootprint& fp, int depth) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, rule::Assign>) {
          fp.writes.insert(n.target.symbol);
          for (const auto& a : n.target.args) merge(fp.value_reads, symbols_of(a));
          merge(fp.value_reads, symbols_of(n.value));
        } else if constexpr (std::is_same_v<N, rule::Conditional>) {
          merge(fp.reads, symbols_of(n.guard));
          walk_footprint(m, *n.body, fp, depth);
        } else if constexpr (std::is_same_v<N, rule::Block>) {
          for (const auto& mbr : n.members) walk_footprint(m, mbr, fp, depth);
        } else if constexpr (std::is_same_v<N, rule::Forall>) {
          walk_footprint(m, *n.body, fp, depth);
        } else if constexpr (std::is_same_v<N, rule::Choose>) {
          merge(fp.reads, symbols_of(n.selection));
          if (n.ranking) merge(fp.value_reads, symbols_of(*n.ranking));
          walk_footprint(m, *n.body, fp, depth);
        } else if constexpr (std::is_same_v<N, rule::Call>) {
          for (const auto& a : n.args) merge(fp.value_reads, symbols_of(a));
          if (depth < kMaxInlineDepth) walk_footprint(m, m.rule_def(n.name).body, fp, depth + 1);
        }
      },
      r.node);
}

/// One assignment reachable from a top-level rule, with every symbol its
/// execution or its written value depends on.
struct WriteSite {
  std::string symbol;
  std::string unit;
  std::set<std::string> depends;
};

void walk_sites(const Machine& m, const Rule& r, const std::set<std::string>& ctx, const std::string& unit,
                std::vector<WriteSite>& out, int depth) {
  std::visit(
      [&](const auto& n) {
        using N = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<N, rule::Assign>) {
          WriteSite site{n.target.symbol, unit, ctx};
          for (const auto& a : n.target.args) merge(site.depends, symbols_of(a));
          merge(site.depends, symbols_of(n.value));
          out.push_back(std::move(site));
        } else if constexpr (std::is_same_v<N, rule::Conditional>) {
          auto inner = ctx;
          merge(inner, symbols_of(n.guard));
          walk_sites(m, *n.body, inner, unit, out, depth);
        } else if constexpr (std::is_same_v<N, rule::Block>) {
          for (const auto& mbr : n.members) walk_sites(m, mbr, ctx, unit, out, depth);
        } else if constexpr (std::is_same_v<N, rule::Forall>) {
          walk_sites(m, *n.body, ctx, unit, out, depth);
        } else if constexpr (std::is_same_v<N, rule::Choose>) {
          auto inner = ctx;
          merge(inner, symbols_of(n.selection));
          if (n.ranking) merge(inner, symbols_of(*n.ranking));
          walk_sites(m, *n.body, inner, unit, out, depth);
        } else if constexpr (std::is_same_v<N, rule::Call>) {
          auto inner = ctx;
          for (const auto& a : n.args) merge(inner, symbols_of(a));
          if (depth < kMaxInlineDepth) walk_sites(m, m.rule_def(n.name).body, inner, unit, out, depth + 1);
        }
      },
      r.node);
}

/// Programs run by some agent, in agent order.
std::vector<const RuleDef*> agent_programs(const Machine& m) {
  std::vector<const RuleDef*> out;
  for (const auto& a : m.agents()) {
    const RuleDef* def = &m.rule_def(a.program);
    if (std::find(out.begin(), out.end(), def) == out.end()) out.push_back(def);
  }
  return out;
}

std::vector<Formula> top_conjuncts(const Rule& unit) {
  if (const auto* c = std::get_if<rule::Conditional>(&unit.node)) return flatten_conjuncts(c->guard);
  return {};
}

// --- state oracles -------------------------------------------------------------------

/// Existential queries over candidate states: grounded valuations in
/// syntactic mode, reachable states in exploration mode.
class Oracle {
 public:
  virtual ~Oracle() = default;
  virtual std::optional<State> find(const GroundSearch::Goal& goal) = 0;
  virtual bool truncated() const = 0;
};

class GroundOracle : public Oracle {
 public:
  GroundOracle(const Machine& m, std::size_t budget) : search_(m, budget) {}
  std::optional<State> find(const GroundSearch::Goal& goal) override { return search_.find(goal); }
  bool truncated() const override { return search_.truncated(); }

 private:
  GroundSearch search_;
};

class GraphOracle : public Oracle {
 public:
  explicit GraphOracle(const StateGraph& g) : g_(g) {}
  std::optional<State> find(const GroundSearch::Goal& goal) override {
    for (const auto& n : g_.nodes) {
      try {
        if (goal(n.state)) return n.state;
      } catch (const EvalError&) {
      }
    }
    return std::nullopt;
  }
  bool truncated() const override { return g_.truncated; }

 private:
  const StateGraph& g_;
};

std::unique_ptr<Oracle> make_oracle(const Machine& m, const AnalysisOptions& options, const StateGraph* graph) {
  if (options.mode == Method::kExploration && graph && !graph->truncated) {
    return std::make_unique<GraphOracle>(*graph);
  }
  return std::make_unique<GroundOracle>(m, options.ground_budget);
}

/// Updates of one top-level rule of `mover`, or of its whole program when
/// `unit` is null.
UpdateSet move_updates(const Machine& m, const StateReader& s, const AgentInstance& mover, const Rule* unit) {
  Bindings env = m.bindings_for(mover);
  if (unit) return m.collect_updates(s, env, *unit);
  UpdateSet all;
  for (const Rule* u : m.units(mover)) {
    UpdateSet part = m.collect_updates(s, env, *u);
    all.insert(part.begin(), part.end());
  }
  return all;
}

/// The move is nonempty, consistent, and leaves p false for `owner`.
bool falsifies(const Machine& m, const StateReader& s, const AgentInstance& mover, const Rule* unit,
               const PredicateDecl& p, const AgentInstance& owner) {
  UpdateSet u = move_updates(m, s, mover, unit);
  if (u.empty() || !check_consistent(u)) return false;
  OverlayReader post(s, u);
  return !m.eval_predicate(post, p, owner);
}

std::string agent_name(const AgentInstance& a) { return a.id.to_string(); }

/// Symbols a formula depends on, with derived definitions expanded.
std::set<std::string> closure(const Machine& m, std::set<std::string> syms) {
  std::vector<std::string> todo(syms.begin(), syms.end());
  while (!todo.empty()) {
    std::string s = todo.back();
    todo.pop_back();
    const auto* fn = m.model().find_function(s);
    if (!fn || !fn->definition) continue;
    std::set<std::string> refs;
    std::visit([&](const auto& d) { collect_symbols(d, refs); }, *fn->definition);
    for (const auto& r : refs) {
      if (syms.insert(r).second) todo.push_back(r);
    }
  }
  return syms;
}

std::set<std::string> unit_writes(const Machine& m, const Rule& unit) {
  RuleFootprint fp;
  walk_footprint(m, unit, fp, 0);
  return fp.writes;
}

/// Cheap necessary condition for a rule to change a predicate: it writes a
/// symbol the predicate depends on.
bool may_change(const Machine& m, const Rule& unit, const PredicateDecl& p) {
  auto deps = closure(m, symbols_of(p.formula));
  for (const auto& w : unit_writes(m, unit)) {
    if (deps.count(w)) return true;
  }
  return false;
}

std::string describe_state(const State& s) {
  std::vector<std::string> parts;
  for (const auto& [loc, v] : s.entries()) parts.push_back(loc.to_string() + " = " + v.to_string());
  return parts.empty() ? "all locations undef" : join(parts);
}

StateGraph explore_for_analysis(const Machine& m, const AnalysisOptions& options) {
  ExploreOptions eo;
  eo.depth = static_cast<std::size_t>(-1);
  eo.max_states = options.bound;
  return enumerate_interleavings(m, options.env, eo);
}

}  // namespace

// --- risky functions -------------------------------------------------------------------

std::vector<RuleFootprint> rule_footprints(const Machine& m) {
  std::vector<RuleFootprint> out;
  for (const auto& def : m.model().rules) {
    for (const Rule* unit : m.units(def)) {
      RuleFootprint fp;
      fp.id = unit->id;
      fp.program = def.name;
      fp.conjuncts = top_conjuncts(*unit);
      walk_footprint(m, *unit, fp, 0);
      out.push_back(std::move(fp));
    }
  }
  return out;
}

bool RiskReport::contains(const std::string& name) const {
  return std::any_of(risky.begin(), risky.end(), [&](const auto& r) { return r.name == name; });
}

std::set<std::string> RiskReport::names() const {
  std::set<std::string> out;
  for (const auto& r : risky) out.insert(r.name);
  return out;
}

RiskReport compute_risky_functions(const Machine& m) {
  RiskReport report;
  std::vector<WriteSite> sites;
  for (const RuleDef* def : agent_programs(m)) {
    for (const Rule* unit : m.units(*def)) walk_sites(m, *unit, {}, unit->id, sites, 0);
  }

  std::set<std::string> risky;
  for (const auto& fn : m.model().functions) {
    if (fn.kind == FunctionKind::kMonitored || fn.kind == FunctionKind::kShared) {
      risky.insert(fn.name);
      report.risky.push_back({fn.name, std::string(to_string(fn.kind))});
    }
  }

  auto tainting = [&](const WriteSite& s) {
    std::set<std::string> hit;
    for (const auto& d : s.depends) {
      if (risky.count(d)) hit.insert(d);
    }
    return hit;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    ++report.iterations;
    std::vector<std::pair<std::string, std::string>> joined;
    for (const auto& fn : m.model().functions) {
      if (risky.count(fn.name)) continue;
      if (fn.kind == FunctionKind::kDerived && fn.definition) {
        std::set<std::string> refs;
        std::visit([&](const auto& d) { collect_symbols(d, refs); }, *fn.definition);
        std::set<std::string> hit;
        for (const auto& r : refs) {
          if (risky.count(r)) hit.insert(r);
        }
        if (!hit.empty()) joined.emplace_back(fn.name, "derived from " + join(hit));
      } else if (fn.kind == FunctionKind::kControlled) {
        std::vector<std::string> reasons;
        bool any = false;
        bool all = true;
        for (const auto& s : sites) {
          if (s.symbol != fn.name) continue;
          any = true;
          auto hit = tainting(s);
          if (hit.empty()) {
            all = false;
            break;
          }
          std::string reason = s.unit + " via " + join(hit);
          if (std::find(reasons.begin(), reasons.end(), reason) == reasons.end()) reasons.push_back(reason);
        }
        if (any && all) joined.emplace_back(fn.name, "every writer depends on a risky function: " + join(reasons, "; "));
      }
    }
    // Symbols join simultaneously so chains cite only earlier rounds.
    for (auto& [name, chain] : joined) {
      risky.insert(name);
      report.risky.push_back({name, std::move(chain)});
      changed = true;
    }
  }

  for (const auto& fn : m.model().functions) {
    if (fn.kind != FunctionKind::kControlled || risky.count(fn.name)) continue;
    std::string writer = "none outside initialization";
    for (const auto& s : sites) {
      if (s.symbol == fn.name && tainting(s).empty()) {
        writer = s.unit;
        break;
      }
    }
    report.escaped.push_back({fn.name, writer});
  }
  return report;
}

std::string to_string(Method m) { return m == Method::kSyntactic ? "syntactic" : "exploration"; }

// --- predicates ------------------------------------------------------------------------

PredicateVerdict classify_predicate(const Machine& m, const RiskReport& risk, const PredicateDecl& p,
                                    const AnalysisOptions& options, const StateGraph* graph) {
  PredicateVerdict v;
  v.name = p.name;
  v.method = options.mode;
  for (const auto& s : symbols_of(p.formula)) {
    if (risk.contains(s)) v.risky_symbols.push_back(s);
  }
  if (v.risky_symbols.empty()) {
    v.evidence = "mentions no risky function";
    return v;
  }
  const std::string over = "defined over risky " + join(v.risky_symbols);
  auto agents = m.predicate_agents(p);

  if (options.mode == Method::kExploration && graph && !graph->truncated) {
    std::size_t holding = 0;
    for (const auto& node : graph->nodes) {
      for (const auto* a : agents) {
        if (!m.eval_predicate(node.state, p, *a)) continue;
        ++holding;
        if (!falsifies(m, node.state, *a, nullptr, p, *a)) {
          v.risky = true;
          v.witness_agent = agent_name(*a);
          v.witness = node.state;
          v.evidence = over + "; reachable state where " + agent_name(*a) +
                       " cannot falsify it by its own move: " + describe_state(node.state);
          return v;
        }
      }
    }
    v.evidence = over + "; the owning agent's move falsifies it in all " + std::to_string(holding) +
                 " reachable states where it holds";
    return v;
  }
  if (options.mode == Method::kExploration) {
    v.method = Method::kSyntactic;
    v.warnings.push_back("exploration exceeded the state budget; fell back to the syntactic check");
  }

  // Syntactic: look for an own rule that falsifies p from every p-state.
  GroundSearch search(m, options.ground_budget);
  std::optional<std::string> liberating;
  bool all_liberated = !agents.empty();
  for (const auto* a : agents) {
    bool found = false;
    for (const Rule* unit : m.units(*a)) {
      if (!may_change(m, *unit, p)) continue;
      auto counter = search.find([&](const StateReader& s) {
        return m.eval_predicate(s, p, *a) && !falsifies(m, s, *a, unit, p, *a);
      });
      if (!counter && !search.truncated()) {
        found = true;
        if (!liberating) liberating = unit->id;
        break;
      }
    }
    if (!found) {
      all_liberated = false;
      auto w = search.find([&](const StateReader& s) {
        return m.eval_predicate(s, p, *a) && !falsifies(m, s, *a, nullptr, p, *a);
      });
      if (w && !v.witness) {
        v.witness_agent = agent_name(*a);
        v.witness = std::move(w);
      }
    }
  }
  v.truncated = search.truncated();
  if (v.truncated) v.warnings.push_back("grounded search exceeded its budget; verdict is conservative");
  if (all_liberated) {
    v.liberating_rule = liberating;
    v.evidence = over + ", but self-liberating: " + *liberating +
                 " of the same agent falsifies it from every state where it holds";
    return v;
  }
  v.risky = true;
  v.evidence = over + "; no own rule falsifies it from every state where it holds";
  if (v.witness) {
    v.evidence += "; e.g. " + *v.witness_agent + " stays blocked in " + describe_state(*v.witness);
  }
  return v;
}

// --- vulnerable rules ------------------------------------------------------------------

namespace {

struct Instance {
  std::size_t agent;
  const Rule* unit;
};

struct Candidate {
  std::size_t agent = 0;
  const Rule* unit = nullptr;
  const PredicateDecl* predicate = nullptr;
  bool alive = true;
  bool over_approximate = false;
  std::string f2_note;
};

RankingCheck check_ranking(const Machine& m, const RankingDecl& r, Oracle& oracle) {
  RankingCheck check;
  check.predicate = r.predicate;
  check.counter = to_text(r.counter);
  const auto* p = m.model().find_predicate(r.predicate);
  if (!p) {
    check.detail = "unknown predicate";
    return check;
  }
  for (const auto* a : m.predicate_agents(*p)) {
    Bindings env = m.predicate_bindings(*p, *a);
    auto bad = oracle.find([&](const StateReader& s) {
      if (!m.eval_predicate(s, *p, *a)) return false;
      Value before = m.eval_term(s, env, r.counter);
      if (!before.is_int() || before.as_int() < 0) return false;
      UpdateSet u = move_updates(m, s, *a, nullptr);
      if (!check_consistent(u)) return false;
      OverlayReader post(s, u);
      if (!m.eval_predicate(post, *p, *a)) return false;
      Value after = m.eval_term(post, env, r.counter);
      return !(after.is_int() && after.as_int() < before.as_int());
    });
    if (bad) {
      check.detail = "counter does not decrease for " + agent_name(*a) + " in " + describe_state(*bad);
      return check;
    }
  }
  if (oracle.truncated()) {
    check.detail = "search budget exceeded";
    return check;
  }
  check.verified = true;
  check.detail = "while " + r.predicate + " holds, every move of the agent decreases " + check.counter +
                 " (from a non-negative value) or falsifies " + r.predicate;
  return check;
}

}  // namespace

std::vector<std::string> VulnerabilityReport::vulnerable_ids() const {
  std::vector<std::string> out;
  for (const auto& r : rules) {
    if (r.vulnerable) out.push_back(r.id);
  }
  return out;
}

const PredicateVerdict* VulnerabilityReport::predicate(const std::string& name) const {
  for (const auto& p : predicates) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

VulnerabilityReport detect_vulnerable_rules(const Machine& m, const AnalysisOptions& options) {
  VulnerabilityReport report;
  report.risk = compute_risky_functions(m);
  const auto risky = report.risk.names();

  std::optional<StateGraph> graph;
  if (options.mode == Method::kExploration) {
    graph = explore_for_analysis(m, options);
    if (graph->truncated) {
      report.notes.push_back("exploration exceeded " + std::to_string(options.bound) +
                             " states; verdicts use the syntactic check");
    }
  }
  const StateGraph* g = graph ? &*graph : nullptr;
  auto oracle = make_oracle(m, options, g);
  // Association asks what a rule can do, so it ranges over all grounded
  // states even in exploration mode: a rule that never fires on the explored
  // instance (a route that is never found) must still be associated.
  GroundOracle capability(m, options.ground_budget);

  std::map<std::string, const PredicateVerdict*> risky_preds;
  for (const auto& p : m.model().predicates) {
    report.predicates.push_back(classify_predicate(m, report.risk, p, options, g));
  }
  for (const auto& v : report.predicates) {
    if (v.risky) risky_preds.emplace(v.name, &v);
    if (v.truncated) report.truncated = true;
  }

  const auto& agents = m.agents();
  std::vector<Instance> instances;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    for (const Rule* u : m.units(agents[i])) instances.push_back({i, u});
  }

  // f.1 per unit, and association with the owner's risky predicates.
  std::map<const Rule*, std::vector<std::string>> f1;
  for (const auto& inst : instances) {
    if (f1.count(inst.unit)) continue;
    std::vector<std::string> hits;
    for (const auto& c : top_conjuncts(*inst.unit)) {
      auto syms = symbols_of(c);
      if (std::any_of(syms.begin(), syms.end(), [&](const auto& s) { return risky.count(s) > 0; })) {
        hits.push_back(to_text(c));
      }
    }
    f1.emplace(inst.unit, std::move(hits));
  }

  std::vector<Candidate> candidates;
  std::map<const Rule*, std::vector<std::string>> associations;
  for (const auto& inst : instances) {
    if (f1[inst.unit].empty()) continue;
    const AgentInstance& a = agents[inst.agent];
    for (const auto& [name, verdict] : risky_preds) {
      const auto* p = m.model().find_predicate(name);
      auto owners = m.predicate_agents(*p);
      if (std::find(owners.begin(), owners.end(), &a) == owners.end()) continue;
      if (!may_change(m, *inst.unit, *p)) continue;
      auto hit = capability.find([&](const StateReader& s) {
        return m.eval_predicate(s, *p, a) && falsifies(m, s, a, inst.unit, *p, a);
      });
      bool truncated = !hit && capability.truncated();
      if (hit || truncated) {
        Candidate c;
        c.agent = inst.agent;
        c.unit = inst.unit;
        c.predicate = p;
        c.over_approximate = truncated;
        candidates.push_back(c);
        auto& assoc = associations[inst.unit];
        if (std::find(assoc.begin(), assoc.end(), name) == assoc.end()) assoc.push_back(name);
      }
    }
  }

  // f.2: drop candidates whose predicate some non-candidate rule can also
  // falsify; repeat until stable.
  auto is_candidate = [&](std::size_t agent, const Rule* unit) {
    return std::any_of(candidates.begin(), candidates.end(),
                       [&](const Candidate& c) { return c.alive && c.agent == agent && c.unit == unit; });
  };
  std::map<std::tuple<std::size_t, const Rule*, std::size_t, const PredicateDecl*>, bool> memo;
  auto can_falsify = [&](const Instance& by, const Candidate& c) {
    auto key = std::make_tuple(by.agent, by.unit, c.agent, c.predicate);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    const AgentInstance& owner = agents[c.agent];
    bool r = may_change(m, *by.unit, *c.predicate) &&
             oracle
                 ->find([&](const StateReader& s) {
                   return m.eval_predicate(s, *c.predicate, owner) &&
                          falsifies(m, s, agents[by.agent], by.unit, *c.predicate, owner);
                 })
                 .has_value();
    memo.emplace(key, r);
    return r;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& c : candidates) {
      if (!c.alive) continue;
      for (const auto& inst : instances) {
        if (is_candidate(inst.agent, inst.unit)) continue;
        if (can_falsify(inst, c)) {
          c.alive = false;
          c.f2_note = c.predicate->name + " of " + agent_name(agents[c.agent]) + " is also falsified by " +
                      inst.unit->id + " of " + agent_name(agents[inst.agent]) + ", which is not vulnerable";
          changed = true;
          break;
        }
      }
    }
  }
  if (oracle->truncated() || capability.truncated()) report.truncated = true;

  // Aggregate per top-level rule.
  std::vector<const Rule*> order;
  for (const auto& inst : instances) {
    if (std::find(order.begin(), order.end(), inst.unit) == order.end()) order.push_back(inst.unit);
  }
  std::set<std::string> seen_ids;
  for (const Rule* unit : order) {
    if (!seen_ids.insert(unit->id).second) continue;
    RuleVerdict v;
    v.id = unit->id;
    const auto& hits = f1[unit];
    v.f1_evidence = hits.empty() ? "no guard conjunct reads a risky function"
                                 : "guard conjunct(s) over risky functions: " + join(hits, "; ");
    std::vector<std::string> dropped;
    for (const auto& c : candidates) {
      if (c.unit != unit) continue;
      if (c.alive) {
        v.vulnerable = true;
        v.over_approximate = v.over_approximate || c.over_approximate || report.truncated;
        std::string name = agent_name(agents[c.agent]);
        if (std::find(v.agents.begin(), v.agents.end(), name) == v.agents.end()) v.agents.push_back(name);
      } else if (std::find(dropped.begin(), dropped.end(), c.f2_note) == dropped.end()) {
        dropped.push_back(c.f2_note);
      }
    }
    if (hits.empty()) {
      v.cleared_by = "f.1";
      v.f2_evidence = "not applicable";
    } else if (v.vulnerable) {
      std::set<std::string> preds;
      for (const auto& c : candidates) {
        if (c.unit == unit && c.alive) preds.insert(c.predicate->name);
      }
      v.f2_evidence = "falsifies risky predicate " + join(preds) + ", which no non-vulnerable rule can falsify";
    } else {
      v.cleared_by = "f.2";
      if (!associations.count(unit)) {
        v.f2_evidence = "falsifies no risky predicate of its agent";
      } else {
        v.f2_evidence = join(dropped, "; ");
      }
    }
    report.rules.push_back(std::move(v));
  }

  for (const auto& r : m.model().rankings) report.rankings.push_back(check_ranking(m, r, *oracle));

  report.certificate = report.vulnerable_ids().empty() && !report.truncated;
  report.notes.push_back(
      "a vulnerable rule is necessary for starvation but not sufficient: a flagged agent can be "
      "kept waiting, but the analysis does not show that it is");
  report.notes.push_back(
      "a.1 (dependency): a risky predicate of the agent is defined over locations other agents can "
      "change; a.2 (forced waiting): only a vulnerable rule, whose guard reads risky functions, can "
      "change it");
  return report;
}

VulnerabilityReport certify_starvation_free(const Machine& m, const AnalysisOptions& options) {
  VulnerabilityReport report = detect_vulnerable_rules(m, options);
  if (report.certificate) {
    report.notes.push_back(
        "certificate: no agent program has a vulnerable rule, so every rule is cleared by a failing "
        "f.1 or f.2 and the machine is starvation-free");
  } else if (report.truncated) {
    report.notes.push_back("no certificate: the analysis was truncated by its search budget");
  } else {
    report.notes.push_back("no certificate: vulnerable rule(s) " + join(report.vulnerable_ids()));
  }
  return report;
}

}  // namespace asmstarve
