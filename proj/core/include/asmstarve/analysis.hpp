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
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "asmstarve/exec.hpp"
#include "asmstarve/explore.hpp"
#include "asmstarve/machine.hpp"

namespace asmstarve {

/// Symbol-level footprint of one top-level rule of a rule definition. Calls
/// are resolved through the callee's body.
struct RuleFootprint {
  std::string id;
  std::string program;
  /// Symbols read by guards and choose selections.
  std::set<std::string> reads;
  /// Symbols read by assigned values, target arguments, rankings, and call
  /// arguments.
  std::set<std::string> value_reads;
  std::set<std::string> writes;
  /// Top-level guard split on conjunction; empty for unguarded rules.
  std::vector<Formula> conjuncts;
};

std::vector<RuleFootprint> rule_footprints(const Machine& m);

struct RiskyFunction {
  std::string name;
  /// Why the symbol is risky: its kind, or the risky symbols it depends on.
  std::string chain;
};

/// A controlled symbol that stayed non-risky, with a writer that reads no
/// risky symbol.
struct EscapedFunction {
  std::string name;
  std::string writer;
};

struct RiskReport {
  std::vector<RiskyFunction> risky;
  std::vector<EscapedFunction> escaped;
  std::size_t iterations = 0;

  bool contains(const std::string& name) const;
  std::set<std::string> names() const;
};

/// Least fixpoint from the monitored and shared symbols. A controlled symbol
/// joins once every write of it outside initialization depends on a risky
/// symbol, through an enclosing guard, a choose, the target arguments, or
/// the assigned value. A derived symbol joins once its definition mentions
/// a risky symbol.
RiskReport compute_risky_functions(const Machine& m);

enum class Method { kSyntactic, kExploration };
std::string to_string(Method m);

struct AnalysisOptions {
  Method mode = Method::kSyntactic;
  /// State budget for exploration mode.
  std::size_t bound = 100000;
  /// Evaluation budget for each grounded search in syntactic mode.
  std::size_t ground_budget = 2000000;
  /// Environment used when exploring.
  EnvironmentScript env;
};

struct PredicateVerdict {
  std::string name;
  bool risky = false;
  Method method = Method::kSyntactic;
  std::vector<std::string> risky_symbols;
  /// Own rule falsifying the predicate from every state satisfying it.
  std::optional<std::string> liberating_rule;
  std::string evidence;
  /// Agent and state in which the predicate holds but the agent's own move
  /// does not falsify it.
  std::optional<std::string> witness_agent;
  std::optional<State> witness;
  bool truncated = false;
  std::vector<std::string> warnings;
};

/// Decides whether a predicate is risky. `graph` is required in exploration
/// mode; a truncated graph falls back to the syntactic check.
PredicateVerdict classify_predicate(const Machine& m, const RiskReport& risk, const PredicateDecl& p,
                                    const AnalysisOptions& options, const StateGraph* graph = nullptr);

struct RuleVerdict {
  std::string id;
  bool vulnerable = false;
  /// Verdict kept only because a search ran out of budget.
  bool over_approximate = false;
  std::string f1_evidence;
  std::string f2_evidence;
  /// "f.1" or "f.2" for cleared rules: the feature that fails.
  std::string cleared_by;
  std::vector<std::string> agents;
};

struct RankingCheck {
  std::string predicate;
  std::string counter;
  bool verified = false;
  std::string detail;
};

struct VulnerabilityReport {
  RiskReport risk;
  std::vector<PredicateVerdict> predicates;
  std::vector<RuleVerdict> rules;
  std::vector<RankingCheck> rankings;
  bool certificate = false;
  bool truncated = false;
  std::vector<std::string> notes;

  std::vector<std::string> vulnerable_ids() const;
  const PredicateVerdict* predicate(const std::string& name) const;
};

/// Full pipeline: risky functions, predicate verdicts, vulnerable rules
/// (f.1 candidates associated with a risky predicate, pruned by the f.2
/// fixpoint), ranking checks, and the certificate.
VulnerabilityReport detect_vulnerable_rules(const Machine& m, const AnalysisOptions& options = {});

/// detect_vulnerable_rules plus the certificate explanation: a certificate is
/// issued iff no agent program has a vulnerable rule and nothing was
/// truncated.
VulnerabilityReport certify_starvation_free(const Machine& m, const AnalysisOptions& options = {});

}  // namespace asmstarve
