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

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "asmstarve/exec.hpp"

namespace asmstarve {

struct ExploreOptions {
  std::size_t depth = 12;
  std::size_t max_states = 200000;
};

/// A state ready for the next move: the environment batch of step `cursor`
/// has already been applied. Once the script is exhausted the cursor stays
/// at its last step so that states reached at different depths coincide.
struct GraphNode {
  State state;
  std::size_t cursor = 0;
  std::size_t depth = 0;
  bool expanded = false;
};

struct GraphEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  /// Index into Machine::agents(); absent for idle environment steps.
  std::optional<std::size_t> agent;
  std::vector<std::string> fired_rules;
  UpdateSet updates;
};

struct InconsistentMove {
  std::size_t node = 0;
  std::size_t agent = 0;
  Clash clash;
};

struct StateGraph {
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;
  /// Outgoing edge indices per node.
  std::vector<std::vector<std::size_t>> out;
  std::vector<InconsistentMove> inconsistencies;
  bool truncated = false;

  /// Expanded nodes with no successor: nobody can move and the environment
  /// has nothing left to do.
  std::vector<std::size_t> terminal_nodes() const;
};

/// Breadth-first closure of all interleavings up to `depth` moves.
StateGraph enumerate_interleavings(const Machine& m, const EnvironmentScript& env,
                                   const ExploreOptions& options);

struct CoherenceFinding {
  std::size_t node = 0;
  std::size_t a = 0;
  std::size_t b = 0;
  bool independent = false;
  bool commute = false;
};

struct CoherenceSummary {
  std::size_t independent_pairs = 0;
  std::size_t dependent_pairs = 0;
  /// Independent pairs whose linearizations diverge; must be empty.
  std::vector<CoherenceFinding> violations;
  /// Dependent pairs whose linearizations diverge (order-dependent moves).
  std::vector<CoherenceFinding> order_dependent;
};

/// Checks every pair of agents with nonempty consistent moves in every
/// explored node.
CoherenceSummary check_graph_coherence(const Machine& m, const StateGraph& g);

/// Strongly connected components of the subgraph induced by `keep`, in
/// reverse topological order.
std::vector<std::vector<std::size_t>> strongly_connected_components(
    const StateGraph& g, const std::function<bool(std::size_t)>& keep);

}  // namespace asmstarve
