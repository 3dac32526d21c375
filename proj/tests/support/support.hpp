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

// Shared helpers for the unit and acceptance tests.

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "asmstarve/corpus.hpp"
#include "asmstarve/exec.hpp"
#include "asmstarve/lang.hpp"
#include "asmstarve/machine.hpp"

namespace asmstarve::testing {

std::string corpus_dir();
std::string corpus_file(const std::string& file);

/// Parses and validates a corpus file; throws std::runtime_error on errors.
Model load_corpus_model(const std::string& name);
std::unique_ptr<Machine> load_corpus_machine(const std::string& name);
nlohmann::json load_manifest(const std::string& name);
const CorpusEntry& corpus_entry(const std::string& name);

/// Parses model text; throws std::runtime_error listing the diagnostics.
Model parse_or_throw(const std::string& text);

Value atom(const Machine& m, const std::string& name);
Location loc(const Machine& m, const std::string& text);
/// `base` with each "f(args)" location set to its value.
State with(const Machine& m, State base, const std::vector<std::pair<std::string, Value>>& writes);

const AgentInstance& agent(const Machine& m, const std::string& name);
const PredicateDecl& predicate(const Machine& m, const std::string& name);

/// Predicate value per step for one agent, computed by replaying the trace.
std::vector<bool> predicate_series(const Machine& m, const Trace& t, const std::string& agent,
                                   const std::string& predicate);

/// Runs a shell command and returns its exit status; stdout goes to
/// `stdout_path`, stderr is dropped.
int run_command(const std::string& command, const std::string& stdout_path = "/dev/null");

/// Plain-array philosophers, independent of the interpreter: fork i sits
/// between philosopher i (right) and philosopher i+1 (left), 0-based, and
/// -1 marks a free fork.
struct ArrayPhilosophers {
  explicit ArrayPhilosophers(std::size_t n) : owner(n, -1) {}
  std::vector<int> owner;

  std::size_t right(std::size_t p) const { return p; }
  std::size_t left(std::size_t p) const { return (p + owner.size() - 1) % owner.size(); }
  bool can_grab(std::size_t p) const { return owner[right(p)] < 0 && owner[left(p)] < 0; }
  bool eating(std::size_t p) const {
    return owner[right(p)] == static_cast<int>(p) && owner[left(p)] == static_cast<int>(p);
  }
  bool enabled(std::size_t p) const { return can_grab(p) || eating(p); }
  void move(std::size_t p) {
    if (eating(p)) {
      owner[right(p)] = owner[left(p)] = -1;
    } else if (can_grab(p)) {
      owner[right(p)] = owner[left(p)] = static_cast<int>(p);
    }
  }
};

/// owner(f1..fn) of a philosophers state in ArrayPhilosophers form.
std::vector<int> fork_owners(const Machine& m, const State& s, std::size_t n);

// --- generators --------------------------------------------------------------

/// Random small models over a fixed signature. Every generated model parses
/// back to itself; `valid` models also pass validation.
class ModelGenerator {
 public:
  explicit ModelGenerator(std::uint64_t seed) : rng_(seed) {}
  Model model();
  Formula formula(int depth, std::vector<std::pair<std::string, std::string>>& scope);
  Term term(int depth, const std::vector<std::pair<std::string, std::string>>& scope);

 private:
  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  bool coin() { return rng_() % 2 == 0; }
  Term element(const std::string& domain, int depth, const std::vector<std::pair<std::string, std::string>>& scope);
  Rule rule(int depth, std::vector<std::pair<std::string, std::string>>& scope, int& labels);

  std::mt19937_64 rng_;
};

}  // namespace asmstarve::testing
