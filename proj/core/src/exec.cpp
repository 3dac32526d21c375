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

#include "asmstarve/exec.hpp"

#include <random>

namespace asmstarve {

namespace {

// agent_step without the successor state.
StepResult collect_move(const Machine& m, const State& state, const AgentInstance& agent) {
  StepResult out;
  Bindings env = m.bindings_for(agent);
  for (const Rule* unit : m.units(agent)) {
    UpdateSet u = m.collect_updates(state, env, *unit);
    if (u.empty()) continue;
    out.fired_rules.push_back(unit->id);
    out.updates.insert(u.begin(), u.end());
  }
  if (out.updates.empty()) return out;
  if (auto clash = find_clash(out.updates)) {
    out.status = StepStatus::kInconsistent;
    out.clash = std::move(clash);
    return out;
  }
  out.status = StepStatus::kApplied;
  return out;
}

}  // namespace

StepResult agent_step(const Machine& m, const State& state, const AgentInstance& agent) {
  StepResult out = collect_move(m, state, agent);
  out.next = out.status == StepStatus::kApplied ? apply_updates(state, out.updates) : state;
  return out;
}

bool EnvironmentScript::pending_after(std::size_t step) const {
  return batches.upper_bound(step) != batches.end();
}

const UpdateSet* EnvironmentScript::at(std::size_t step) const {
  auto it = batches.find(step);
  return it == batches.end() ? nullptr : &it->second;
}

std::vector<std::string> validate_script(const Machine& m, const EnvironmentScript& env) {
  std::vector<std::string> errors;
  for (const auto& [step, batch] : env.batches) {
    for (const auto& u : batch) {
      const auto* fn = m.model().find_function(u.location.symbol);
      if (!fn) {
        errors.push_back("step " + std::to_string(step) + ": unknown symbol '" + u.location.symbol + "'");
      } else if (fn->kind != FunctionKind::kMonitored && fn->kind != FunctionKind::kShared) {
        errors.push_back("step " + std::to_string(step) + ": environment writes " +
                         std::string(to_string(fn->kind)) + " symbol '" + fn->name + "'");
      } else if (fn->arity() != u.location.args.size()) {
        errors.push_back("step " + std::to_string(step) + ": arity mismatch for '" + fn->name + "'");
      }
    }
    if (auto clash = find_clash(batch)) {
      errors.push_back("step " + std::to_string(step) + ": inconsistent batch at " +
                       clash->first.location.to_string());
    }
  }
  return errors;
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::kStepLimit:
      return "step-limit";
    case Termination::kQuiescent:
      return "quiescent";
    case Termination::kInconsistent:
      return "inconsistent-update";
  }
  return "?";
}

Trace run_distributed(const Machine& m, const Scheduler& scheduler, const EnvironmentScript& env,
                      std::size_t max_steps) {
  Trace trace;
  trace.initial = m.initial_state();
  State state = trace.initial;
  const auto& agents = m.agents();
  std::mt19937_64 rng(scheduler.seed);
  std::size_t cursor = 0;

  std::vector<const AgentInstance*> script;
  for (const auto& name : scheduler.script) {
    const auto* a = m.find_agent(name);
    if (!a) throw EvalError("scripted scheduler names unknown agent '" + name + "'");
    script.push_back(a);
  }
  if (scheduler.policy == SchedulerPolicy::kScripted && script.empty() && max_steps > 0) {
    throw EvalError("scripted scheduler needs at least one agent");
  }

  for (std::size_t step = 0; step < max_steps; ++step) {
    TraceStep rec;
    rec.step = step;
    State ready = state;
    if (const auto* batch = env.at(step)) {
      if (auto clash = find_clash(*batch)) {
        trace.termination = Termination::kInconsistent;
        trace.clash = std::move(clash);
        return trace;
      }
      rec.env_updates = *batch;
      ready = apply_updates(state, *batch);
    }

    const AgentInstance* mover = nullptr;
    StepResult result;
    if (scheduler.policy == SchedulerPolicy::kScripted) {
      mover = script[step % script.size()];
      result = collect_move(m, ready, *mover);
    } else {
      std::vector<std::size_t> enabled;
      std::vector<StepResult> results(agents.size());
      for (std::size_t i = 0; i < agents.size(); ++i) {
        results[i] = collect_move(m, ready, agents[i]);
        if (results[i].status != StepStatus::kQuiescent) enabled.push_back(i);
      }
      if (!enabled.empty()) {
        std::size_t pick = 0;
        if (scheduler.policy == SchedulerPolicy::kRoundRobin) {
          // First enabled agent at or after the cursor.
          pick = enabled.front();
          for (std::size_t i : enabled) {
            if (i >= cursor) {
              pick = i;
              break;
            }
          }
          cursor = (pick + 1) % agents.size();
        } else {
          pick = enabled[rng() % enabled.size()];
        }
        mover = &agents[pick];
        result = std::move(results[pick]);
      } else if (!env.pending_after(step)) {
        if (!rec.env_updates.empty()) {
          trace.steps.push_back(std::move(rec));
          state = std::move(ready);
        }
        trace.termination = Termination::kQuiescent;
        return trace;
      }
    }

    if (mover && result.status == StepStatus::kInconsistent) {
      trace.termination = Termination::kInconsistent;
      trace.clash = result.clash;
      trace.failed_agent = mover->id;
      return trace;
    }
    if (mover) {
      rec.agent = mover->id;
      rec.fired_rules = std::move(result.fired_rules);
      state = result.status == StepStatus::kApplied ? apply_updates(ready, result.updates) : std::move(ready);
      rec.updates = std::move(result.updates);
    } else {
      state = std::move(ready);
    }
    trace.steps.push_back(std::move(rec));
  }
  trace.termination = Termination::kStepLimit;
  return trace;
}

std::vector<State> replay_states(const Trace& trace) {
  std::vector<State> out;
  out.reserve(trace.steps.size() + 1);
  out.push_back(trace.initial);
  for (const auto& s : trace.steps) {
    State next = apply_updates(out.back(), s.env_updates);
    out.push_back(apply_updates(next, s.updates));
  }
  return out;
}

namespace {

class RecordingReader : public StateReader {
 public:
  explicit RecordingReader(const State& s) : s_(s) {}
  Value read(const Location& loc) const override {
    reads_.insert(loc);
    return s_.read(loc);
  }
  std::set<Location>& reads() const { return reads_; }

 private:
  const State& s_;
  mutable std::set<Location> reads_;
};

}  // namespace

MoveFootprint move_footprint(const Machine& m, const State& state, const AgentInstance& agent) {
  MoveFootprint fp;
  RecordingReader reader(state);
  Bindings env = m.bindings_for(agent);
  for (const Rule* unit : m.units(agent)) {
    UpdateSet u = m.collect_updates(reader, env, *unit);
    if (u.empty()) continue;
    fp.step.fired_rules.push_back(unit->id);
    fp.step.updates.insert(u.begin(), u.end());
  }
  fp.reads = std::move(reader.reads());
  for (const auto& u : fp.step.updates) fp.writes.insert(u.location);
  if (fp.step.updates.empty()) {
    fp.step.next = state;
  } else if (auto clash = find_clash(fp.step.updates)) {
    fp.step.status = StepStatus::kInconsistent;
    fp.step.clash = std::move(clash);
    fp.step.next = state;
  } else {
    fp.step.status = StepStatus::kApplied;
    fp.step.next = apply_updates(state, fp.step.updates);
  }
  return fp;
}

bool independent(const MoveFootprint& a, const MoveFootprint& b) {
  auto disjoint = [](const std::set<Location>& x, const std::set<Location>& y) {
    for (const auto& l : x) {
      if (y.count(l)) return false;
    }
    return true;
  };
  return disjoint(a.writes, b.reads) && disjoint(a.writes, b.writes) && disjoint(b.writes, a.reads);
}

bool check_coherence(const Machine& m, const State& s, const AgentInstance& a,
                     const AgentInstance& b) {
  auto sequence = [&](const AgentInstance& first, const AgentInstance& second) -> std::optional<State> {
    StepResult r1 = agent_step(m, s, first);
    if (r1.status == StepStatus::kInconsistent) return std::nullopt;
    StepResult r2 = agent_step(m, r1.next, second);
    if (r2.status == StepStatus::kInconsistent) return std::nullopt;
    return r2.next;
  };
  return sequence(a, b) == sequence(b, a);
}

}  // namespace asmstarve
