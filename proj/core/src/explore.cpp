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

#include "asmstarve/explore.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace asmstarve {

namespace {

struct KeyHash {
  std::size_t operator()(const std::pair<State, std::size_t>& k) const {
    std::size_t h = k.first.hash();
    hash_combine(h, k.second);
    return h;
  }
};

}  // namespace

std::vector<std::size_t> StateGraph::terminal_nodes() const {
  std::vector<std::size_t> out_nodes;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].expanded && out[i].empty()) out_nodes.push_back(i);
  }
  return out_nodes;
}

StateGraph enumerate_interleavings(const Machine& m, const EnvironmentScript& env,
                                   const ExploreOptions& options) {
  StateGraph g;
  std::unordered_map<std::pair<State, std::size_t>, std::size_t, KeyHash> index;
  const std::size_t env_end = env.last_step();

  auto with_env = [&](State s, std::size_t cursor) {
    if (const auto* batch = env.at(cursor)) s = apply_updates(s, *batch);
    return s;
  };
  std::deque<std::size_t> frontier;
  auto intern = [&](State s, std::size_t cursor, std::size_t depth) -> std::optional<std::size_t> {
    auto key = std::make_pair(std::move(s), cursor);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    if (g.nodes.size() >= options.max_states) {
      g.truncated = true;
      return std::nullopt;
    }
    std::size_t id = g.nodes.size();
    g.nodes.push_back(GraphNode{key.first, cursor, depth, false});
    g.out.emplace_back();
    index.emplace(std::move(key), id);
    frontier.push_back(id);
    return id;
  };

  intern(with_env(m.initial_state(), 0), 0, 0);
  const auto& agents = m.agents();

  while (!frontier.empty()) {
    std::size_t id = frontier.front();
    frontier.pop_front();
    if (g.nodes[id].depth >= options.depth) continue;
    g.nodes[id].expanded = true;
    const State state = g.nodes[id].state;
    const std::size_t cursor = g.nodes[id].cursor;
    const std::size_t depth = g.nodes[id].depth;
    const std::size_t next_cursor = std::min(cursor + 1, env_end);

    auto add_edge = [&](State next, std::optional<std::size_t> agent, StepResult* r) {
      if (next_cursor != cursor) next = with_env(std::move(next), next_cursor);
      auto to = intern(std::move(next), next_cursor, depth + 1);
      if (!to) return;
      GraphEdge e;
      e.from = id;
      e.to = *to;
      e.agent = agent;
      if (r) {
        e.fired_rules = r->fired_rules;
        e.updates = r->updates;
      }
      g.out[id].push_back(g.edges.size());
      g.edges.push_back(std::move(e));
    };

    bool moved = false;
    for (std::size_t i = 0; i < agents.size(); ++i) {
      StepResult r = agent_step(m, state, agents[i]);
      if (r.status == StepStatus::kQuiescent) continue;
      if (r.status == StepStatus::kInconsistent) {
        g.inconsistencies.push_back(InconsistentMove{id, i, *r.clash});
        continue;
      }
      moved = true;
      add_edge(r.next, i, &r);
    }
    if (!moved && env.pending_after(cursor)) add_edge(state, std::nullopt, nullptr);
  }
  return g;
}

CoherenceSummary check_graph_coherence(const Machine& m, const StateGraph& g) {
  CoherenceSummary summary;
  const auto& agents = m.agents();
  for (std::size_t n = 0; n < g.nodes.size(); ++n) {
    if (!g.nodes[n].expanded) continue;
    const State& s = g.nodes[n].state;
    std::vector<std::optional<MoveFootprint>> fps(agents.size());
    for (std::size_t i = 0; i < agents.size(); ++i) {
      MoveFootprint fp = move_footprint(m, s, agents[i]);
      if (fp.step.status == StepStatus::kApplied) fps[i] = std::move(fp);
    }
    for (std::size_t a = 0; a < agents.size(); ++a) {
      if (!fps[a]) continue;
      for (std::size_t b = a + 1; b < agents.size(); ++b) {
        if (!fps[b]) continue;
        CoherenceFinding f{n, a, b, independent(*fps[a], *fps[b]), false};
        f.commute = check_coherence(m, s, agents[a], agents[b]);
        if (f.independent) {
          ++summary.independent_pairs;
          if (!f.commute) summary.violations.push_back(f);
        } else {
          ++summary.dependent_pairs;
          if (!f.commute) summary.order_dependent.push_back(f);
        }
      }
    }
  }
  return summary;
}

std::vector<std::vector<std::size_t>> strongly_connected_components(
    const StateGraph& g, const std::function<bool(std::size_t)>& keep) {
  // Iterative Tarjan.
  const std::size_t n = g.nodes.size();
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> components;
  std::size_t counter = 0;

  struct Frame {
    std::size_t node;
    std::size_t next_edge;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (!keep(root) || index[root] != kUnvisited) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      const auto& edges = g.out[f.node];
      if (f.next_edge < edges.size()) {
        std::size_t w = g.edges[edges[f.next_edge++]].to;
        if (!keep(w)) continue;
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.node] = std::min(low[f.node], index[w]);
        }
        continue;
      }
      std::size_t v = f.node;
      call.pop_back();
      if (!call.empty()) low[call.back().node] = std::min(low[call.back().node], low[v]);
      if (low[v] == index[v]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != v);
        components.push_back(std::move(comp));
      }
    }
  }
  return components;
}

}  // namespace asmstarve
