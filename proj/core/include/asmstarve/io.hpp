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

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "asmstarve/analysis.hpp"
#include "asmstarve/exec.hpp"
#include "asmstarve/machine.hpp"
#include "asmstarve/monitor.hpp"

namespace asmstarve {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// undef is null, atoms are their names, sequences are arrays.
nlohmann::ordered_json value_to_json(const Value& v);
Value value_from_json(const Machine& m, const nlohmann::json& j);

/// Parses "f", "f(a1,a2)" or "f(a1)@agent". Arguments are atom names,
/// integers, true, false, or undef.
Location parse_location(const Machine& m, std::string_view text);

/// {"<step>": {"<location>": value, ...}, ...}
EnvironmentScript environment_from_json(const Machine& m, const nlohmann::json& j);
nlohmann::ordered_json environment_to_json(const EnvironmentScript& env);
EnvironmentScript load_environment(const Machine& m, const std::string& path);

/// One JSON object per line: step, env_updates, agent, fired_rules,
/// updates, and predicates (agent -> predicate -> value after the step).
std::string trace_to_jsonl(const Machine& m, const Trace& t);
Trace trace_from_jsonl(const Machine& m, std::istream& in);
/// Reads the predicate columns of a trace file without needing the model.
AnnotatedTrace annotated_trace_from_jsonl(std::istream& in);

nlohmann::ordered_json report_to_json(const VulnerabilityReport& r);
std::string report_to_text(const VulnerabilityReport& r);

nlohmann::ordered_json alarms_to_json(const std::vector<Alarm>& alarms);

}  // namespace asmstarve
