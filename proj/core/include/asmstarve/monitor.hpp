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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "asmstarve/exec.hpp"
#include "asmstarve/machine.hpp"

namespace asmstarve {

struct AnnotatedRow {
  std::size_t step = 0;
  /// Mover's name; empty for idle steps.
  std::string agent;
  /// agent -> predicate -> value in the state after the step.
  std::map<std::string, std::map<std::string, bool>> predicates;
};

struct AnnotatedTrace {
  std::vector<AnnotatedRow> rows;
};

/// Evaluates every declared predicate for every agent it applies to, after
/// each step. Throws EvalError if the trace does not fit the model.
AnnotatedTrace annotate_trace(const Machine& m, const Trace& t);

struct Alarm {
  std::string agent;
  std::string predicate;
  std::size_t start = 0;
  std::size_t length = 0;
  std::size_t threshold = 0;
  bool operator==(const Alarm&) const = default;
};

struct MonitorOptions {
  /// Count every global step instead of the agent's own moves.
  bool global_steps = false;
};

/// One alarm per maximal run of at least `k` consecutive moves of an agent
/// after each of which `predicate` held for that agent. Intermediate state
/// changes do not break a run. Throws std::invalid_argument for an unknown
/// predicate or k == 0.
std::vector<Alarm> detect_cyclical_return(const AnnotatedTrace& at, const std::string& predicate,
                                          std::size_t k, const MonitorOptions& options = {});

struct ProgressEntry {
  std::string agent;
  std::string predicate;
  std::size_t longest_run = 0;
  std::size_t flips = 0;
};

/// Longest true-run (counted as in detect_cyclical_return) and number of
/// truth changes, per agent and predicate.
std::vector<ProgressEntry> progress_summary(const AnnotatedTrace& at, const MonitorOptions& options = {});

}  // namespace asmstarve
