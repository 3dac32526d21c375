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

#include "asmstarve/grounding.hpp"

#include <set>

namespace asmstarve {

namespace {

struct NeedLocation {
  Location loc;
};

class ValuationReader : public StateReader {
 public:
  ValuationReader(const Machine& m, const std::map<Location, Value>& assigned)
      : m_(m), assigned_(assigned) {}

  Value read(const Location& loc) const override {
    if (m_.function(loc.symbol).kind == FunctionKind::kStatic) return m_.initial_state().read(loc);
    auto it = assigned_.find(loc);
    if (it == assigned_.end()) throw NeedLocation{loc};
    return it->second;
  }

 private:
  const Machine& m_;
  const std::map<Location, Value>& assigned_;
};

}  // namespace

GroundSearch::GroundSearch(const Machine& m, std::size_t budget) : m_(m), budget_(budget) {
  std::set<std::int64_t> ints;
  for (auto i : m.integer_literals()) {
    ints.insert(i - 1);
    ints.insert(i);
    ints.insert(i + 1);
  }
  for (auto i : ints) integers_.push_back(Value::integer(i));
}

std::vector<Value> GroundSearch::candidates(const Location& loc) const {
  const auto& fn = m_.function(loc.symbol);
  std::vector<Value> out;
  if (fn.result_domain == kIntegerDomain) {
    out = integers_;
  } else if (m_.is_finite_domain(fn.result_domain)) {
    out = m_.domain_values(fn.result_domain);
  }
  out.push_back(Value::undef());
  return out;
}

std::optional<State> GroundSearch::find(const Goal& goal) {
  std::map<Location, Value> assigned;
  std::size_t spent = 0;
  if (!search(goal, assigned, spent)) return std::nullopt;
  State s;
  for (const auto& [loc, v] : assigned) s.write(loc, v);
  return s;
}

bool GroundSearch::search(const Goal& goal, std::map<Location, Value>& assigned, std::size_t& spent) {
  if (spent >= budget_) {
    truncated_ = true;
    return false;
  }
  ++spent;
  ++evaluations_;
  std::optional<Location> need;
  try {
    ValuationReader reader(m_, assigned);
    return goal(reader);
  } catch (const NeedLocation& n) {
    need = n.loc;
  } catch (const EvalError&) {
    return false;
  }
  for (const auto& v : candidates(*need)) {
    assigned.insert_or_assign(*need, v);
    if (search(goal, assigned, spent)) return true;
    if (truncated_ && spent >= budget_) break;
  }
  assigned.erase(*need);
  return false;
}

OverlayReader::OverlayReader(const StateReader& base, const UpdateSet& updates) : base_(base) {
  for (const auto& u : updates) top_.insert_or_assign(u.location, u.value);
}

Value OverlayReader::read(const Location& loc) const {
  auto it = top_.find(loc);
  return it == top_.end() ? base_.read(loc) : it->second;
}

}  // namespace asmstarve
