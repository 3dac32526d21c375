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
#include <random>

#include "asmstarve/machine.hpp"
#include "asmstarve/value.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace asmstarve;
using namespace asmstarve::testing;

namespace {

// Philosopher p1 holds rightFork f1 and leftFork f5. The five situations
// below are named after the fork configurations a philosopher can see.
struct DpFixture {
  std::unique_ptr<Machine> m = load_corpus_machine("dining_philosophers");
  const AgentInstance& p1 = agent(*m, "p1");
  Value v(const std::string& name) const { return atom(*m, name); }

  State s1() const { return m->initial_state(); }
  State s2() const { return with(*m, s1(), {{"owner(f5)", v("p5")}}); }
  State s3() const { return with(*m, s1(), {{"owner(f1)", v("p2")}}); }
  State s4() const { return with(*m, s1(), {{"owner(f1)", v("p2")}, {"owner(f5)", v("p5")}}); }
  State s5() const { return with(*m, s1(), {{"owner(f1)", v("p1")}, {"owner(f5)", v("p1")}}); }

  const Rule& unit(const std::string& id) const {
    for (const Rule* r : m->units(p1)) {
      if (r->id == id) return *r;
    }
    throw std::runtime_error("no unit " + id);
  }
  Term owner_of(const char* fork_fn) const { return ast::app("owner", {ast::app(fork_fn, {ast::self()})}); }
};

}  // namespace

TEST_CASE("undef equals only itself and atoms carry their domain") {
  CHECK(Value::undef() == Value::undef());
  CHECK(Value::undef() != Value::boolean(false));
  CHECK(Value::undef() != Value::integer(0));
  CHECK(Value::atom("forks", "f1") != Value::atom("philosophers", "f1"));
  CHECK(Value::atom("forks", "f1") == Value::atom("forks", "f1"));
  CHECK(Value::sequence({Value::integer(1)}) != Value::sequence({}));
}

TEST_CASE("check_consistent") {
  Location l{"f", {Value::integer(1)}, std::nullopt};
  SUBCASE("two values on one location clash") {
    UpdateSet u{{l, Value::integer(1)}, {l, Value::integer(2)}};
    CHECK_FALSE(check_consistent(u));
    auto clash = find_clash(u);
    REQUIRE(clash);
    CHECK(clash->first.location == l);
  }
  SUBCASE("empty set") { CHECK(check_consistent({})); }
  SUBCASE("equal values collapse") {
    UpdateSet u{{l, Value::boolean(false)}, {l, Value::boolean(false)}};
    CHECK(u.size() == 1);
    CHECK(check_consistent(u));
  }
  SUBCASE("distinct locations never clash") {
    Location other{"f", {Value::integer(2)}, std::nullopt};
    CHECK(check_consistent({{l, Value::integer(1)}, {other, Value::integer(2)}}));
  }
  SUBCASE("agent-local copies are distinct locations") {
    Location mine{"f", {}, Value::atom("d", "a")};
    Location yours{"f", {}, Value::atom("d", "b")};
    CHECK(check_consistent({{mine, Value::integer(1)}, {yours, Value::integer(2)}}));
  }
}

TEST_CASE("apply_updates") {
  Location l{"f", {}, std::nullopt};
  State s;
  s.write(l, Value::integer(3));
  CHECK(apply_updates(s, {}) == s);
  State t = apply_updates(s, {{l, Value::integer(4)}});
  CHECK(t.read(l) == Value::integer(4));
  CHECK(apply_updates(t, {{l, Value::undef()}}).size() == 0);
  CHECK_THROWS_AS(apply_updates(s, {{l, Value::integer(1)}, {l, Value::integer(2)}}), InconsistentUpdateError);
}

TEST_CASE("frame property over random states and update sets") {
  std::mt19937_64 rng(7);
  auto random_loc = [&] {
    return Location{std::string(1, "fgh"[rng() % 3]), {Value::integer(static_cast<std::int64_t>(rng() % 4))},
                    std::nullopt};
  };
  auto random_value = [&]() -> Value {
    switch (rng() % 4) {
      case 0:
        return Value::undef();
      case 1:
        return Value::boolean(rng() % 2 == 0);
      default:
        return Value::integer(static_cast<std::int64_t>(rng() % 5));
    }
  };
  for (int trial = 0; trial < 500; ++trial) {
    State s;
    for (int i = 0; i < 6; ++i) s.write(random_loc(), random_value());
    std::map<Location, Value> chosen;
    for (int i = 0; i < 4; ++i) chosen[random_loc()] = random_value();
    UpdateSet u;
    for (const auto& [l, v] : chosen) u.insert({l, v});
    State t = apply_updates(s, u);
    // Every location ever mentioned: updated ones read their new value,
    // the rest keep the old one.
    std::set<Location> universe;
    for (const auto& [l, v] : s.entries()) universe.insert(l);
    for (const auto& [l, v] : chosen) universe.insert(l);
    for (const auto& l : universe) {
      auto it = chosen.find(l);
      CHECK(t.read(l) == (it != chosen.end() ? it->second : s.read(l)));
    }
    for (const auto& [l, v] : t.entries()) CHECK(universe.count(l) == 1);
  }
}

TEST_CASE("eval_term on the philosophers") {
  DpFixture f;
  Bindings env = f.m->bindings_for(f.p1);
  CHECK(f.m->eval_term(f.s1(), env, f.owner_of("rightFork")).is_undef());
  CHECK(f.m->eval_term(f.s5(), env, f.owner_of("leftFork")) == f.v("p1"));
  CHECK(f.m->eval_term(f.s1(), env, ast::integer(5)) == Value::integer(5));
  CHECK(f.m->eval_term(f.s1(), env, ast::app("rightFork", {ast::self()})) == f.v("f1"));
}

TEST_CASE("undeclared reads are total through undef") {
  DpFixture f;
  Bindings env = f.m->bindings_for(f.p1);
  for (const auto& fork : {"f1", "f2", "f3", "f4", "f5"}) {
    CHECK(f.m->eval_term(State{}, env, ast::app("owner", {ast::constant(f.v(fork))})).is_undef());
  }
  CHECK_THROWS_AS(f.m->eval_term(State{}, env, ast::var("nope")), EvalError);
  CHECK_THROWS_AS(f.m->eval_term(State{}, Bindings{}, ast::self()), EvalError);
}

TEST_CASE("eval_formula on the thinking and eating predicates") {
  DpFixture f;
  const auto& thinking = predicate(*f.m, "thinking");
  const auto& eating = predicate(*f.m, "eating");
  for (const State& s : {f.s1(), f.s2(), f.s3(), f.s4()}) {
    CHECK(f.m->eval_predicate(s, thinking, f.p1));
    CHECK_FALSE(f.m->eval_predicate(s, eating, f.p1));
  }
  CHECK(f.m->eval_predicate(f.s5(), eating, f.p1));
  CHECK_FALSE(f.m->eval_predicate(f.s5(), thinking, f.p1));
  Bindings env = f.m->bindings_for(f.p1);
  CHECK_FALSE(f.m->eval_formula(f.s2(), env, ast::negate(thinking.formula)));
}

TEST_CASE("collect_updates for the philosopher rules") {
  DpFixture f;
  Bindings env = f.m->bindings_for(f.p1);
  UpdateSet rule1 = f.m->collect_updates(f.s1(), env, f.unit("RULE 1"));
  CHECK(rule1 == UpdateSet{{loc(*f.m, "owner(f1)"), f.v("p1")}, {loc(*f.m, "owner(f5)"), f.v("p1")}});
  CHECK(f.m->collect_updates(f.s1(), env, f.unit("RULE 2")).empty());
  CHECK(apply_updates(f.s1(), rule1) == f.s5());
  CHECK(f.m->collect_updates(f.s4(), env, f.unit("RULE 1")).empty());

  // The init block writes owner(f) := undef for each of the five forks.
  const Rule& init = *f.m->model().init;
  UpdateSet u = f.m->collect_updates(State{}, Bindings{}, init);
  std::size_t undef_owner = std::count_if(u.begin(), u.end(), [](const Update& x) {
    return x.location.symbol == "owner" && x.value.is_undef();
  });
  CHECK(undef_owner == 5);
}

TEST_CASE("a false guard contributes nothing") {
  DpFixture f;
  std::mt19937_64 rng(11);
  const std::vector<std::string> forks{"f1", "f2", "f3", "f4", "f5"};
  const std::vector<std::string> phils{"p1", "p2", "p3", "p4", "p5"};
  for (int trial = 0; trial < 300; ++trial) {
    State s = f.s1();
    for (const auto& fk : forks) {
      if (rng() % 2) s.write(loc(*f.m, "owner(" + fk + ")"), f.v(phils[rng() % 5]));
    }
    for (const auto& a : f.m->agents()) {
      Bindings env = f.m->bindings_for(a);
      for (const Rule* r : f.m->units(a)) {
        const auto& c = std::get<rule::Conditional>(r->node);
        UpdateSet u = f.m->collect_updates(s, env, *r);
        if (!f.m->eval_formula(s, env, c.guard)) CHECK(u.empty());
        // Pure function of its inputs.
        CHECK(u == f.m->collect_updates(s, env, *r));
      }
    }
  }
}

TEST_CASE("choose picks the maximum with the least-element tie-break") {
  Model model = parse_or_throw(R"(dasm choice
domain d = {e0, e1, e2, e3, e4, e5}
function sel : d -> boolean controlled
function rank : d -> integer controlled
function out : -> d controlled
init { out := e0 }
rule P() = choose x in d with sel(x) maximizing rank(x) do out := x
agent e0 runs P()
)");
  Machine m(std::move(model));
  const Rule& body = m.rule_def("P").body;
  const auto& values = m.domain_values("d");
  std::mt19937_64 rng(3);
  Location out_loc{"out", {}, std::nullopt};
  for (int trial = 0; trial < 2000; ++trial) {
    const std::size_t n = 1 + rng() % values.size();
    State s;
    std::vector<bool> sel(values.size(), false);
    std::vector<std::optional<std::int64_t>> rank(values.size());
    for (std::size_t i = 0; i < n; ++i) {
      sel[i] = rng() % 2 == 0;
      s.write(Location{"sel", {values[i]}, std::nullopt}, Value::boolean(sel[i]));
      if (rng() % 4) {
        rank[i] = static_cast<std::int64_t>(rng() % 4);
        s.write(Location{"rank", {values[i]}, std::nullopt}, Value::integer(*rank[i]));
      }
    }
    // Brute force: undef ranks below every integer; ties keep the first.
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!sel[i]) continue;
      if (!best) {
        best = i;
        continue;
      }
      const auto& cur = rank[*best];
      if (rank[i] && (!cur || *rank[i] > *cur)) best = i;
    }
    UpdateSet u = m.collect_updates(s, Bindings{}, body);
    if (!best) {
      CHECK(u.empty());
    } else {
      CHECK(u == UpdateSet{{out_loc, values[*best]}});
    }
  }
}

TEST_CASE("derived symbols and agent-local locations") {
  Model model = parse_or_throw(R"(dasm locals
domain hosts = {h1, h2}
function replies : hosts x hosts -> integer shared
function mine : -> integer controlled local
derived found(h : hosts) -> boolean := exists r in hosts : replies(h, r) != undef
init { skip }
rule P() = mine := 1
agent h1 runs P()
agent h2 runs P()
)");
  Machine m(std::move(model));
  State s;
  Term found = ast::app("found", {ast::constant(atom(m, "h1"))});
  CHECK(m.eval_term(s, Bindings{}, found) == Value::boolean(false));
  s.write(loc(m, "replies(h1,h2)"), Value::integer(4));
  CHECK(m.eval_term(s, Bindings{}, found) == Value::boolean(true));

  const auto& h1 = agent(m, "h1");
  UpdateSet u = m.collect_updates(s, m.bindings_for(h1), m.rule_def("P").body);
  REQUIRE(u.size() == 1);
  CHECK(u.begin()->location.owner == atom(m, "h1"));
  UpdateSet both = u;
  for (const auto& x : m.collect_updates(s, m.bindings_for(agent(m, "h2")), m.rule_def("P").body)) both.insert(x);
  CHECK(both.size() == 2);
  CHECK(check_consistent(both));
}

TEST_CASE("equal-value updates from two rules in one move are consistent") {
  // The timeout expires on the same move that finds a route: both the
  // decrementing rule and the expiry rule set waiting to false.
  auto m = load_corpus_machine("aodv_timeout");
  const auto& h1 = agent(*m, "h1");
  State s = with(*m, m->initial_state(),
                 {{"waiting(h1,h2)", Value::boolean(true)},
                  {"wishToInitiate(h1,h2)", Value::boolean(true)},
                  {"timeout(h1,h2)", Value::integer(0)},
                  {"replies(h1,h2)", Value::integer(1)}});
  UpdateSet all;
  std::vector<UpdateSet> parts;
  for (const Rule* r : m->units(h1)) {
    parts.push_back(m->collect_updates(s, m->bindings_for(h1), *r));
    all.insert(parts.back().begin(), parts.back().end());
  }
  Update off{loc(*m, "waiting(h1,h2)"), Value::boolean(false)};
  CHECK(std::count_if(parts.begin(), parts.end(), [&](const UpdateSet& p) { return p.count(off) > 0; }) == 2);
  CHECK(check_consistent(all));
}
