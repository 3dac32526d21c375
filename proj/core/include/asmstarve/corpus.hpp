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
#include <utility>
#include <vector>

#include "asmstarve/exec.hpp"
#include "asmstarve/syntax.hpp"

namespace asmstarve {

enum class DpVariant { kBaseline, kBakery };

/// Ring of n philosophers and n forks. The bakery variant guards fork
/// acquisition with isMyTurn, granted round-robin by a scheduler agent that
/// moves the turn on once the holder eats. Throws std::invalid_argument for
/// n < 2.
Model build_dining_philosophers(std::size_t n, DpVariant variant = DpVariant::kBaseline);

/// Undirected links between hosts, numbered from 1.
struct Topology {
  std::size_t hosts = 2;
  std::vector<std::pair<std::size_t, std::size_t>> links;
};

/// "partitioned", "line", "ring", "full", or a link list such as "1-2,2-3".
/// Throws std::invalid_argument on malformed input.
Topology parse_topology(std::size_t hosts, const std::string& text);

struct AodvOptions {
  std::string name = "aodv";
  Topology topology;
  bool with_timeout = false;
  int timeout_init = 5;
  /// Name of the environment script referenced by the model, if any.
  std::string environment_file;
};

struct AodvInstance {
  Model model;
  EnvironmentScript env;
};

/// Host h1 initiates a route discovery towards the last host. A responder
/// agent answers requests after a delay equal to the hop distance, and
/// never when the hosts are disconnected. The environment script sets the
/// neighbourhood and the wish to communicate before the first move.
AodvInstance build_aodv(const AodvOptions& options);

struct ExpectedVerdicts {
  std::vector<std::string> risky_functions_include;
  std::vector<std::string> risky_functions_exclude;
  /// When set, the risky set must equal this exactly.
  std::optional<std::vector<std::string>> risky_functions_exact;
  std::vector<std::string> risky_predicates;
  std::vector<std::string> safe_predicates;
  std::vector<std::string> vulnerable;
  bool certificate = false;
};

struct CorpusEntry {
  std::string name;
  /// Model file relative to the corpus directory.
  std::string file;
  std::function<Model()> build;
  /// Environment for runs and exploration; empty for closed models.
  std::function<EnvironmentScript()> env;
  ExpectedVerdicts expected;
  /// Small enough for exhaustive exploration.
  bool explorable = false;
};

const std::vector<CorpusEntry>& corpus_entries();

}  // namespace asmstarve
