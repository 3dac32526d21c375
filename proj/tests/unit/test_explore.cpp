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
#include <deque>
#include <map>
#include <set>

#include "asmstarve/corpus.hpp"
#include "asmstarve/exec.hpp"
#include "asmstarve/explore.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace asmstarve;
using namespace asmstarve::testing;

namespace {

// Reachable fork assignments of n philosophers, by plain BFS over arrays.
std::set<std::vector<int>> reachable_owners(std::size_t n) {
  std::set<std::vector<int>> seen{ArrayPhilosophers(n).owner};
  std::deque<std::vector<int>> todo{ArrayPhilosophers(n).owner};
  while (!todo.empty()) {
    ArrayPhilosophers cur(n);
    cur.owner = todo.front();
    todo.pop_front();
    for (std::size_t p = 0; p < n; ++p) {
      if (!cur.enabled(p)) continue;
      ArrayPhilosophers next = cur;
      next.move(p);
      if (seen.insert(next.owner).second) todo.push_back(next.owner);
    }
  }
  return seen;
}

std::optional<std::size_t> find_node(const StateGraph& g, const State& s, std::size_t cursor) {
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    if (g.nodes[i].cursor == cursor && g.nodes[i].state == s) return i;
  }
  return std::nullopt;
}

// Every state a run passes through, with its environment batch applied, is a
// node, and consecutive ones are joined by an edge of the mover.
void check_trace_is_path(const Machine& m, const EnvironmentScript& env, const StateGraph& g, const Trace& t) {
  auto states = replay_states(t);
  const std::size_t end = env.last_step();
  auto ready = [&](std::size_t i) {
    State s = states[i];
    if (const auto* b = env.at(i)) s = apply_updates(s, *b);
    return s;
  };
  auto from = find_node(g, ready(0), 0);
  REQUIRE(from);
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    CAPTURE(i);
    auto to = find_node(g, ready(i + 1), std::min(i + 1, end));
    REQUIRE(to);
    bool linked = std::any_of(g.out[*from].begin(), g.out[*from].end(), [&](std::size_t e) {
      const GraphEdge& edge = g.edges[e];
      if (edge.to != *to) return false;
      if (!t.steps[i].agent) return !edge.agent;
      return edge.agent && m.agents()[*edge.agent].id == *t.steps[i].agent;
    });
    CHECK(linked);
    from = to;
  }
}

}  // namespace

TEST_CASE("depth zero keeps only the initial state") {
  Machine m(build_dining_philosophers(3));
  StateGraph g = enumerate_interleavings(m, {}, ExploreOptions{0, 1000});
  REQUIRE(g.nodes.size() == 1);
  CHECK(g.nodes[0].state == m.initial_state());
  CHECK(g.edges.empty());
  CHECK_FALSE(g.truncated);
}

TEST_CASE("two philosophers never hold exactly one fork") {
  Machine m(build_dining_philosophers(2));
  StateGraph g = enumerate_interleavings(m, {}, ExploreOptions{12, 100000});
  CHECK(g.inconsistencies.empty());
  CHECK_FALSE(g.truncated);
  CHECK(g.nodes.size() == 3);
  for (const auto& node : g.nodes) {
    auto owners = fork_owners(m, node.state, 2);
    for (int p : {0, 1}) CHECK(std::count(owners.begin(), owners.end(), p) != 1);
  }
  CHECK(g.terminal_nodes().empty());
}

TEST_CASE("reachable philosopher states match an independent search") {
  for (std::size_t n = 2; n <= 6; ++n) {
    CAPTURE(n);
    Machine m(build_dining_philosophers(n));
    StateGraph g = enumerate_interleavings(m, {}, ExploreOptions{4 * n, 100000});
    CHECK_FALSE(g.truncated);
    std::set<std::vector<int>> got;
    for (const auto& node : g.nodes) got.insert(fork_owners(m, node.state, n));
    CHECK(got.size() == g.nodes.size());
    CHECK(got == reachable_owners(n));
  }
}

TEST_CASE("every run is a path in the explored graph") {
  SUBCASE("philosophers") {
    Machine m(build_dining_philosophers(3));
    StateGraph g = enumerate_interleavings(m, {}, ExploreOptions{40, 100000});
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      check_trace_is_path(m, {}, g, run_distributed(m, Scheduler::random(seed), {}, 40));
    }
    check_trace_is_path(m, {}, g, run_distributed(m, Scheduler::round_robin(), {}, 40));
  }
  for (const char* name : {"aodv3_line", "aodv_no_timeout", "aodv3_line_timeout"}) {
    CAPTURE(name);
    auto m = load_corpus_machine(name);
    EnvironmentScript env = corpus_entry(name).env();
    StateGraph g = enumerate_interleavings(*m, env, ExploreOptions{60, 200000});
    CHECK_FALSE(g.truncated);
    CHECK(g.inconsistencies.empty());
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      check_trace_is_path(*m, env, g, run_distributed(*m, Scheduler::random(seed), env, 40));
    }
  }
}

TEST_CASE("a partitioned initiator ends in a state where it still waits") {
  auto m = load_corpus_machine("aodv_no_timeout");
  EnvironmentScript env = corpus_entry("aodv_no_timeout").env();
  StateGraph g = enumerate_interleavings(*m, env, ExploreOptions{40, 100000});
  auto terminal = g.terminal_nodes();
  REQUIRE_FALSE(terminal.empty());
  const Location w = loc(*m, "waiting(h1,h2)");
  CHECK(std::any_of(terminal.begin(), terminal.end(),
                    [&](std::size_t n) { return g.nodes[n].state.read(w) == Value::boolean(true); }));
}

TEST_CASE("the state budget truncates exploration") {
  Machine m(build_dining_philosophers(6));
  StateGraph g = enumerate_interleavings(m, {}, ExploreOptions{30, 5});
  CHECK(g.truncated);
  CHECK(g.nodes.size() == 5);
  for (const auto& e : g.edges) {
    CHECK(e.from < g.nodes.size());
    CHECK(e.to < g.nodes.size());
  }
}

TEST_CASE("the depth bound limits exploration") {
  Machine m(build_dining_philosophers(5));
  StateGraph g = enumerate_interleavings(m, {}, ExploreOptions{1, 1000});
  // The initial state plus one state per philosopher who can eat.
  CHECK(g.nodes.size() == 6);
  for (const auto& node : g.nodes) CHECK(node.depth <= 1);
}

TEST_CASE("strongly connected components") {
  Machine m(build_dining_philosophers(2));
  StateGraph g = enumerate_interleavings(m, {}, ExploreOptions{12, 1000});
  auto all = strongly_connected_components(g, [](std::size_t) { return true; });
  REQUIRE(all.size() == 1);
  CHECK(all[0].size() == 3);

  // Without the initial state nothing links the two eating states.
  auto rest = strongly_connected_components(g, [](std::size_t n) { return n != 0; });
  CHECK(rest.size() == 2);
  for (const auto& c : rest) CHECK(c.size() == 1);

  // Components cover each kept node exactly once.
  Machine m4(build_dining_philosophers(4));
  StateGraph g4 = enumerate_interleavings(m4, {}, ExploreOptions{20, 1000});
  auto odd = [](std::size_t n) { return n % 2 == 1; };
  std::multiset<std::size_t> covered;
  for (const auto& c : strongly_connected_components(g4, odd)) covered.insert(c.begin(), c.end());
  std::multiset<std::size_t> expected;
  for (std::size_t n = 0; n < g4.nodes.size(); ++n) {
    if (odd(n)) expected.insert(n);
  }
  CHECK(covered == expected);
}

TEST_CASE("graph coherence") {
  SUBCASE("two philosophers compete for the same forks") {
    Machine m(build_dining_philosophers(2));
    auto c = check_graph_coherence(m, enumerate_interleavings(m, {}, ExploreOptions{12, 1000}));
    CHECK(c.independent_pairs == 0);
    CHECK(c.violations.empty());
    CHECK(c.dependent_pairs == 1);
    CHECK(c.order_dependent.size() == 1);
  }
  SUBCASE("opposite philosophers of four move independently") {
    Machine m(build_dining_philosophers(4));
    auto c = check_graph_coherence(m, enumerate_interleavings(m, {}, ExploreOptions{12, 1000}));
    CHECK(c.independent_pairs > 0);
    CHECK(c.violations.empty());
  }
  SUBCASE("route discovery") {
    auto m = load_corpus_machine("aodv3_line");
    EnvironmentScript env = corpus_entry("aodv3_line").env();
    auto c = check_graph_coherence(*m, enumerate_interleavings(*m, env, ExploreOptions{40, 100000}));
    CHECK(c.violations.empty());
  }
}
