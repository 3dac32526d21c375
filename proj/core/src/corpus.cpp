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

#include "asmstarve/corpus.hpp"

#include <deque>
#include <stdexcept>

namespace asmstarve {

using namespace ast;  // NOLINT(build/namespaces)

namespace {

std::string numbered(const char* prefix, std::size_t i) { return prefix + std::to_string(i); }

Value atom_of(const std::string& domain, const std::string& name) { return Value::atom(domain, name); }

Term atom_term(const std::string& domain, const std::string& name) { return constant(atom_of(domain, name)); }

FunctionSymbol fn(std::string name, std::vector<std::string> args, std::string result, FunctionKind kind) {
  FunctionSymbol f;
  f.name = std::move(name);
  f.arg_domains = std::move(args);
  f.result_domain = std::move(result);
  f.kind = kind;
  return f;
}

Term owner_of(Term fork) { return app("owner", {std::move(fork)}); }

}  // namespace

Model build_dining_philosophers(std::size_t n, DpVariant variant) {
  if (n < 2) throw std::invalid_argument("dining philosophers need at least 2 philosophers");
  const bool bakery = variant == DpVariant::kBakery;
  Model m;
  m.name = n == 5 ? (bakery ? "dp_bakery" : "dining_philosophers")
                  : "dp" + std::to_string(n) + (bakery ? "_bakery" : "");

  DomainDecl phils{"philosophers", {}};
  DomainDecl forks{"forks", {}};
  for (std::size_t i = 1; i <= n; ++i) {
    phils.elements.push_back(numbered("p", i));
    forks.elements.push_back(numbered("f", i));
  }
  m.domains = {phils, forks};
  if (bakery) m.domains.push_back({"schedulers", {"sched"}});

  using K = FunctionKind;
  m.functions = {fn("rightFork", {"philosophers"}, "forks", K::kStatic),
                 fn("leftFork", {"philosophers"}, "forks", K::kStatic),
                 fn("owner", {"forks"}, "philosophers", K::kShared)};
  if (bakery) {
    auto turn_fn = fn("isMyTurn", {"philosophers"}, "boolean", K::kMonitored);
    turn_fn.writer_domain = "schedulers";
    m.functions.push_back(turn_fn);
    m.functions.push_back(fn("turn", {}, "philosophers", K::kControlled));
    m.functions.push_back(fn("granted", {}, "boolean", K::kControlled));
    m.functions.push_back(fn("nextInTurn", {"philosophers"}, "philosophers", K::kStatic));
  }

  std::vector<Rule> init;
  for (std::size_t i = 1; i <= n; ++i) {
    Term p = atom_term("philosophers", numbered("p", i));
    init.push_back(assign("rightFork", {p}, atom_term("forks", numbered("f", i))));
    init.push_back(assign("leftFork", {p}, atom_term("forks", numbered("f", i == 1 ? n : i - 1))));
  }
  init.push_back(forall_do("f", "forks", assign("owner", {var("f")}, undef())));
  if (bakery) {
    for (std::size_t i = 1; i <= n; ++i) {
      init.push_back(assign("nextInTurn", {atom_term("philosophers", numbered("p", i))},
                            atom_term("philosophers", numbered("p", i == n ? 1 : i + 1))));
    }
    init.push_back(forall_do("p", "philosophers", assign("isMyTurn", {var("p")}, boolean(false))));
    init.push_back(assign("turn", {}, atom_term("philosophers", "p1")));
    init.push_back(assign("granted", {}, boolean(false)));
  }
  m.init = block(std::move(init));

  Term right = owner_of(app("rightFork", {self()}));
  Term left = owner_of(app("leftFork", {self()}));
  std::vector<Formula> take_guard;
  if (bakery) take_guard.push_back(holds(app("isMyTurn", {self()})));
  take_guard.push_back(eq(right, undef()));
  take_guard.push_back(eq(left, undef()));
  Rule take = labeled(bakery ? "RULE 1'" : "RULE 1",
                      when(all_of(std::move(take_guard)),
                           block({assign("owner", {app("rightFork", {self()})}, self()),
                                  assign("owner", {app("leftFork", {self()})}, self())})));
  Rule release = labeled("RULE 2", when(all_of({eq(right, self()), eq(left, self())}),
                                        block({call("Eat", {self()}),
                                               assign("owner", {app("rightFork", {self()})}, undef()),
                                               assign("owner", {app("leftFork", {self()})}, undef())})));
  m.rules.push_back({"PhilosopherProgram", {}, block({take, release}), });
  m.rules.push_back({"Eat", {"p"}, skip()});

  if (bakery) {
    Term turn = app("turn");
    Rule grant = labeled("GRANT", when(negate(holds(app("granted"))),
                                       block({assign("isMyTurn", {turn}, boolean(true)),
                                              assign("granted", {}, boolean(true))})));
    Rule advance = labeled(
        "ADVANCE",
        when(all_of({holds(app("granted")), eq(owner_of(app("rightFork", {turn})), turn),
                     eq(owner_of(app("leftFork", {turn})), turn)}),
             block({assign("isMyTurn", {turn}, boolean(false)), assign("granted", {}, boolean(false)),
                    assign("turn", {}, app("nextInTurn", {turn}))})));
    m.rules.push_back({"Scheduler", {}, block({grant, advance})});
  }

  m.agents.push_back({"p", "philosophers", "", "PhilosopherProgram", {}});
  if (bakery) m.agents.push_back({"", "", "sched", "Scheduler", {}});

  m.predicates.push_back({"thinking", "self", "philosophers", negate(any_of({eq(right, self()), eq(left, self())}))});
  m.predicates.push_back({"eating", "self", "philosophers", all_of({eq(right, self()), eq(left, self())})});
  assign_rule_ids(m);
  return m;
}

Topology parse_topology(std::size_t hosts, const std::string& text) {
  if (hosts < 2) throw std::invalid_argument("at least 2 hosts are required");
  Topology t;
  t.hosts = hosts;
  if (text == "partitioned" || text.empty()) return t;
  if (text == "line" || text == "ring") {
    for (std::size_t i = 1; i < hosts; ++i) t.links.emplace_back(i, i + 1);
    if (text == "ring" && hosts > 2) t.links.emplace_back(hosts, 1);
    return t;
  }
  if (text == "full") {
    for (std::size_t i = 1; i <= hosts; ++i) {
      for (std::size_t j = i + 1; j <= hosts; ++j) t.links.emplace_back(i, j);
    }
    return t;
  }
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t dash = item.find('-');
    if (dash == std::string::npos) throw std::invalid_argument("malformed link '" + item + "'");
    std::size_t a = 0;
    std::size_t b = 0;
    try {
      std::size_t used = 0;
      a = std::stoul(item.substr(0, dash), &used);
      if (used != dash) throw std::invalid_argument(item);
      std::string rest = item.substr(dash + 1);
      b = std::stoul(rest, &used);
      if (used != rest.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed link '" + item + "'");
    }
    if (a < 1 || b < 1 || a > hosts || b > hosts || a == b) {
      throw std::invalid_argument("link '" + item + "' does not join two distinct hosts");
    }
    t.links.emplace_back(a, b);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return t;
}

AodvInstance build_aodv(const AodvOptions& options) {
  const Topology& topo = options.topology;
  const std::size_t n = topo.hosts;
  if (n < 2) throw std::invalid_argument("at least 2 hosts are required");
  if (options.with_timeout && options.timeout_init < 1) {
    throw std::invalid_argument("timeout_init must be positive");
  }
  for (const auto& [a, b] : topo.links) {
    if (a < 1 || b < 1 || a > n || b > n || a == b) throw std::invalid_argument("malformed topology");
  }

  auto host = [](std::size_t i) { return atom_term("hosts", numbered("h", i)); };
  AodvInstance out;
  Model& m = out.model;
  m.name = options.name;
  if (!options.environment_file.empty()) m.environment = options.environment_file;

  DomainDecl hosts{"hosts", {}};
  for (std::size_t i = 1; i <= n; ++i) hosts.elements.push_back(numbered("h", i));
  m.domains = {hosts, {"network", {"net"}}};

  using K = FunctionKind;
  const std::vector<std::string> hh{"hosts", "hosts"};
  m.functions = {fn("neighb", hh, "boolean", K::kMonitored),
                 fn("wishToInitiate", hh, "boolean", K::kShared),
                 fn("routingTable", hh, "boolean", K::kControlled),
                 fn("nextHop", hh, "hosts", K::kControlled),
                 fn("waiting", hh, "boolean", K::kControlled)};
  if (options.with_timeout) m.functions.push_back(fn("timeout", hh, "integer", K::kControlled));
  m.functions.push_back(fn("requests", hh, "boolean", K::kShared));
  m.functions.push_back(fn("replies", hh, "integer", K::kShared));
  m.functions.push_back(fn("session", hh, "boolean", K::kOut));
  m.functions.push_back(fn("hops", hh, "integer", K::kStatic));
  m.functions.push_back(fn("via", hh, "hosts", K::kStatic));
  m.functions.push_back(fn("pending", hh, "integer", K::kControlled));
  m.functions.push_back(fn("seqNo", {}, "integer", K::kControlled));
  auto route_found = fn("routeFound", {"hosts"}, "boolean", K::kDerived);
  route_found.params = {"h"};
  route_found.definition = exists("r", "hosts", neq(app("replies", {var("h"), var("r")}), undef()));
  m.functions.push_back(route_found);

  // Distance and first hop from h1 to the destination.
  std::vector<std::size_t> dist(n + 1, 0);
  std::vector<std::size_t> first(n + 1, 0);
  std::vector<bool> seen(n + 1, false);
  std::deque<std::size_t> queue{1};
  seen[1] = true;
  while (!queue.empty()) {
    std::size_t u = queue.front();
    queue.pop_front();
    for (const auto& [a, b] : topo.links) {
      std::size_t v = a == u ? b : (b == u ? a : 0);
      if (v == 0 || seen[v]) continue;
      seen[v] = true;
      dist[v] = dist[u] + 1;
      first[v] = u == 1 ? v : first[u];
      queue.push_back(v);
    }
  }
  std::vector<Rule> init{assign("seqNo", {}, integer(1))};
  if (seen[n]) {
    init.push_back(assign("hops", {host(1), host(n)}, integer(static_cast<std::int64_t>(dist[n]))));
    init.push_back(assign("via", {host(1), host(n)}, host(first[n])));
  }
  m.init = block(std::move(init));

  Term dest = var("dest");
  auto at = [&](const char* f) { return app(f, {self(), dest}); };
  Rule session_rule = call("CommunicationSession", {self(), dest});

  Rule rule1 = labeled("RULE 1", when(all_of({holds(at("wishToInitiate")),
                                              any_of({holds(at("neighb")), holds(at("routingTable"))})}),
                                      block({session_rule, assign("wishToInitiate", {self(), dest}, boolean(false))})));
  std::vector<Rule> rreq{assign("requests", {self(), dest}, boolean(true)),
                         assign("waiting", {self(), dest}, boolean(true))};
  if (options.with_timeout) rreq.push_back(assign("timeout", {self(), dest}, integer(options.timeout_init)));
  Rule rule2 = labeled("RULE 2", when(all_of({holds(at("wishToInitiate")), negate(holds(at("waiting"))),
                                              negate(holds(at("neighb"))), negate(holds(at("routingTable")))}),
                                      block(std::move(rreq))));
  Term reply = app("replies", {self(), var("r")});
  Rule found = when(holds(app("routeFound", {self()})),
                    block({choose("r", "hosts", neq(reply, undef()), reply,
                                  block({assign("nextHop", {self(), dest}, var("r")),
                                         assign("routingTable", {self(), dest}, boolean(true))})),
                           session_rule, assign("wishToInitiate", {self(), dest}, boolean(false)),
                           assign("waiting", {self(), dest}, boolean(false)),
                           forall_do("r", "hosts", assign("replies", {self(), var("r")}, undef()))}));
  std::vector<Rule> program{rule1, rule2};
  if (options.with_timeout) {
    program.push_back(labeled(
        "RULE 3'", when(holds(at("waiting")),
                        block({found, assign("timeout", {self(), dest}, arith('-', at("timeout"), integer(1)))}))));
    program.push_back(labeled("RULE 4", when(all_of({holds(at("waiting")), eq(at("timeout"), integer(0))}),
                                             block({assign("wishToInitiate", {self(), dest}, boolean(false)),
                                                    assign("waiting", {self(), dest}, boolean(false))}))));
  } else {
    program.push_back(labeled("RULE 3", when(holds(at("waiting")), found)));
  }
  m.rules.push_back({"Initiator", {"dest"}, block(std::move(program))});
  m.rules.push_back({"CommunicationSession", {"src", "dst"},
                     assign("session", {var("src"), var("dst")}, boolean(true))});

  Term i = var("i");
  Term d = var("d");
  auto each = [&](Rule body) { return forall_do("i", "hosts", forall_do("d", "hosts", std::move(body))); };
  Formula routed = neq(app("hops", {i, d}), undef());
  Term pend = app("pending", {i, d});
  Rule rreq_rule = labeled("RREQ", each(when(all_of({routed, holds(app("requests", {i, d}))}),
                                             block({assign("requests", {i, d}, boolean(false)),
                                                    assign("pending", {i, d}, app("hops", {i, d}))}))));
  Rule rrep_rule = labeled("RREP", each(when(all_of({routed, eq(pend, integer(0))}),
                                             block({assign("replies", {i, app("via", {i, d})}, app("seqNo")),
                                                    assign("seqNo", {}, arith('+', app("seqNo"), integer(1))),
                                                    assign("pending", {i, d}, undef())}))));
  Rule hop_rule = labeled("HOP", each(when(all_of({routed, neq(pend, undef()), neq(pend, integer(0))}),
                                           assign("pending", {i, d}, arith('-', pend, integer(1))))));
  m.rules.push_back({"Responder", {}, block({rreq_rule, rrep_rule, hop_rule})});

  m.agents.push_back({"", "", "h1", "Initiator", {host(n)}});
  m.agents.push_back({"", "", "net", "Responder", {}});
  m.predicates.push_back({"waiting", "self", "hosts", holds(at("waiting"))});
  if (options.with_timeout) m.rankings.push_back({at("timeout"), "waiting"});
  assign_rule_ids(m);

  UpdateSet batch;
  auto loc = [&](const char* f, std::size_t a, std::size_t b) {
    return Location{f, {atom_of("hosts", numbered("h", a)), atom_of("hosts", numbered("h", b))}, std::nullopt};
  };
  for (const auto& [a, b] : topo.links) {
    batch.insert({loc("neighb", a, b), Value::boolean(true)});
    batch.insert({loc("neighb", b, a), Value::boolean(true)});
  }
  batch.insert({loc("wishToInitiate", 1, n), Value::boolean(true)});
  out.env.batches.emplace(0, std::move(batch));
  return out;
}

namespace {

CorpusEntry dp_entry(std::size_t n, DpVariant variant, bool explorable) {
  Model probe = build_dining_philosophers(n, variant);
  CorpusEntry e;
  e.name = probe.name;
  e.file = probe.name + ".asm";
  e.build = [n, variant] { return build_dining_philosophers(n, variant); };
  e.env = [] { return EnvironmentScript{}; };
  e.explorable = explorable;
  const bool bakery = variant == DpVariant::kBakery;
  if (bakery) {
    e.expected.risky_functions_include = {"owner", "isMyTurn"};
  } else {
    e.expected.risky_functions_exact = std::vector<std::string>{"owner"};
  }
  e.expected.risky_functions_exclude = {"rightFork", "leftFork"};
  e.expected.risky_predicates = {"thinking"};
  e.expected.safe_predicates = {"eating"};
  e.expected.vulnerable = {bakery ? "RULE 1'" : "RULE 1"};
  e.expected.certificate = false;
  return e;
}

CorpusEntry aodv_entry(const std::string& name, std::size_t hosts, const std::string& topology, bool timeout,
                       bool explorable) {
  AodvOptions o;
  o.name = name;
  o.topology = parse_topology(hosts, topology);
  o.with_timeout = timeout;
  o.timeout_init = 5;
  o.environment_file = name + ".env.json";
  CorpusEntry e;
  e.name = name;
  e.file = name + ".asm";
  e.build = [o] { return build_aodv(o).model; };
  e.env = [o] { return build_aodv(o).env; };
  e.explorable = explorable;
  e.expected.risky_functions_include = {"neighb", "wishToInitiate", "requests", "replies", "routeFound",
                                        "routingTable", "nextHop"};
  e.expected.risky_functions_exclude = {"session", "hops", "via"};
  if (timeout) {
    e.expected.risky_functions_exclude.push_back("waiting");
    e.expected.risky_functions_exclude.push_back("timeout");
    e.expected.safe_predicates = {"waiting"};
    e.expected.certificate = true;
  } else {
    e.expected.risky_functions_include.push_back("waiting");
    e.expected.risky_predicates = {"waiting"};
    e.expected.vulnerable = {"RULE 3"};
  }
  return e;
}

}  // namespace

const std::vector<CorpusEntry>& corpus_entries() {
  static const std::vector<CorpusEntry> entries = [] {
    std::vector<CorpusEntry> v;
    v.push_back(dp_entry(5, DpVariant::kBaseline, true));
    v.push_back(dp_entry(5, DpVariant::kBakery, false));
    v.push_back(dp_entry(2, DpVariant::kBaseline, true));
    v.push_back(dp_entry(3, DpVariant::kBaseline, true));
    v.push_back(dp_entry(3, DpVariant::kBakery, true));
    v.push_back(aodv_entry("aodv_no_timeout", 2, "partitioned", false, true));
    v.push_back(aodv_entry("aodv_timeout", 2, "partitioned", true, true));
    v.push_back(aodv_entry("aodv3_line", 3, "line", false, true));
    v.push_back(aodv_entry("aodv3_line_timeout", 3, "line", true, true));
    return v;
  }();
  return entries;
}

}  // namespace asmstarve
