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
#include <map>
#include <optional>
#include <vector>

#include "asmstarve/machine.hpp"

namespace asmstarve {

/// Searches abstract states of a model for one satisfying a goal. Static
/// locations keep their initialized values; every other location is
/// enumerated lazily, only when the goal reads it, over its result domain
/// plus undef. Integer locations range over the model's integer literals and
/// their neighbours.
class GroundSearch {
 public:
  using Goal = std::function<bool(const StateReader&)>;

  GroundSearch(const Machine& m, std::size_t budget);

  /// A valuation (dynamic locations only) on which `goal` holds, or nullopt.
  /// Valuations on which the goal raises EvalError are skipped. Check
  /// truncated() before reading nullopt as "no such state".
  std::optional<State> find(const Goal& goal);

  /// True once any search ran out of budget.
  bool truncated() const { return truncated_; }
  std::size_t evaluations() const { return evaluations_; }

  /// Candidate values for a location.
  std::vector<Value> candidates(const Location& loc) const;

 private:
  bool search(const Goal& goal, std::map<Location, Value>& assigned, std::size_t& spent);

  const Machine& m_;
  std::size_t budget_;
  bool truncated_ = false;
  std::size_t evaluations_ = 0;
  std::vector<Value> integers_;
};

/// Reads `updates` first and falls back to a base reader.
class OverlayReader : public StateReader {
 public:
  OverlayReader(const StateReader& base, const UpdateSet& updates);
  Value read(const Location& loc) const override;

 private:
  const StateReader& base_;
  std::map<Location, Value> top_;
};

}  // namespace asmstarve
