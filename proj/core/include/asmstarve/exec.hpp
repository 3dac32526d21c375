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
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "asmstarve/machine.hpp"
#include "asmstarve/value.hpp"

namespace asmstarve {

enum class StepStatus { kApplied, kQuiescent, kInconsistent };

/// Outcome of one agent move. `fired_rules` lists the top-level rules of the
/// agent's program that contributed at least one update.
struct StepResult {
  StepStatus status = StepStatus::kQuiescent;
  UpdateSet updates;
  std::vector<std::string> fired_rules;
  std::optional<Clash> clash;
  State next;
};

StepResult agent_step(const Machine& m, const State& state, const AgentInstance& agent);

/// Updates performed by the environment, keyed by the global step before
/// whose move they are applied.
struct EnvironmentScript {
  std::map<std::size_t, UpdateSet> batches;

  bool empty() const { return batches.empty(); }
  /// True if some batch is scheduled strictly after `step`.
  bool pending_after(std::size_t step) const;
  const UpdateSet* at(std::size_t step) const;
  std::size_t last_step() const { return batches.empty() ? 0 : batches.rbegin()->first; }
  bool operator==(const EnvironmentScript&) const = default;
};

/// Errors for batches writing anything other than monitored or shared symbols.
std::vector<std::string> validate_script(const Machine& m, const EnvironmentScript& env);

enum class SchedulerPolicy { kRoundRobin, kRandom, kScripted };

struct Scheduler {
  SchedulerPolicy policy = SchedulerPolicy::kRoundRobin;
  std::uint64_t seed = 0;
  /// Agent names for kScripted; replayed cyclically.
  std::vector<std::string> script;

  static Scheduler round_robin() { return {}; }
  static Scheduler random(std::uint64_t seed) { return {SchedulerPolicy::kRandom, seed, {}}; }
  static Scheduler scripted(std::vector<std::string> agents) {
    return {SchedulerPolicy::kScripted, 0, std::move(agents)};
  }
};

enum class Termination { kStepLimit, kQuiescent, kInconsistent };
std::string to_string(Termination t);

struct TraceStep {
  std::size_t step = 0;
  UpdateSet env_updates;
  /// Absent for idle steps, where only the environment acts.
  std::optional<Value> agent;
  std::vector<std::string> fired_rules;
  UpdateSet updates;
};

struct Trace {
  State initial;
  std::vector<TraceStep> steps;
  Termination termination = Termination::kStepLimit;
  /// Set when the run stopped on an inconsistent update set.
  std::optional<Clash> clash;
  std::optional<Value> failed_agent;
};

/// Runs a linearization of the distributed machine. Each step applies the
/// environment batch for that step and then one scheduled move. Round-robin
/// and random scheduling skip quiescent agents and stop once every agent is
/// quiescent and no environment batch is pending; scripted scheduling
/// replays its sequence to the step limit, recording empty moves.
Trace run_distributed(const Machine& m, const Scheduler& scheduler, const EnvironmentScript& env,
                      std::size_t max_steps);

/// States after each step, starting with the initial state (size = steps+1).
std::vector<State> replay_states(const Trace& trace);

/// Locations read while computing a move, and the move itself.
struct MoveFootprint {
  std::set<Location> reads;
  std::set<Location> writes;
  StepResult step;
};

MoveFootprint move_footprint(const Machine& m, const State& state, const AgentInstance& agent);

/// Neither move writes what the other reads or writes.
bool independent(const MoveFootprint& a, const MoveFootprint& b);

/// True iff a-then-b and b-then-a reach the same state, each second move being
/// recomputed in the intermediate state. An inconsistent move in either order
/// counts as divergence unless both orders fail.
bool check_coherence(const Machine& m, const State& s, const AgentInstance& a,
                     const AgentInstance& b);

}  // namespace asmstarve
