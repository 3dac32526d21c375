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

#include "asmstarve/value.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace asmstarve {

bool Value::as_bool() const {
  if (!is_bool()) throw std::logic_error("value " + to_string() + " is not a boolean");
  return std::get<bool>(data_);
}

std::int64_t Value::as_int() const {
  if (!is_int()) throw std::logic_error("value " + to_string() + " is not an integer");
  return std::get<std::int64_t>(data_);
}

const Atom& Value::as_atom() const {
  if (!is_atom()) throw std::logic_error("value " + to_string() + " is not an atom");
  return std::get<Atom>(data_);
}

const std::vector<Value>& Value::as_seq() const {
  if (!is_seq()) throw std::logic_error("value " + to_string() + " is not a sequence");
  return std::get<std::vector<Value>>(data_);
}

std::string Value::to_string() const {
  switch (kind()) {
    case Kind::kUndef:
      return "undef";
    case Kind::kBool:
      return std::get<bool>(data_) ? "true" : "false";
    case Kind::kInt:
      return std::to_string(std::get<std::int64_t>(data_));
    case Kind::kAtom:
      return std::get<Atom>(data_).name;
    case Kind::kSeq: {
      std::string out = "[";
      const auto& items = std::get<std::vector<Value>>(data_);
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += items[i].to_string();
      }
      return out + "]";
    }
  }
  return "?";
}

std::size_t Value::hash() const {
  std::size_t seed = data_.index();
  switch (kind()) {
    case Kind::kUndef:
      break;
    case Kind::kBool:
      hash_combine(seed, std::get<bool>(data_) ? 1 : 2);
      break;
    case Kind::kInt:
      hash_combine(seed, std::hash<std::int64_t>{}(std::get<std::int64_t>(data_)));
      break;
    case Kind::kAtom: {
      const auto& a = std::get<Atom>(data_);
      hash_combine(seed, std::hash<std::string>{}(a.domain));
      hash_combine(seed, std::hash<std::string>{}(a.name));
      break;
    }
    case Kind::kSeq:
      for (const auto& v : std::get<std::vector<Value>>(data_)) hash_combine(seed, v.hash());
      break;
  }
  return seed;
}

std::strong_ordering operator<=>(const Value& a, const Value& b) {
  if (auto c = a.data_.index() <=> b.data_.index(); c != 0) return c;
  switch (a.kind()) {
    case Value::Kind::kUndef:
      return std::strong_ordering::equal;
    case Value::Kind::kBool:
      return std::get<bool>(a.data_) <=> std::get<bool>(b.data_);
    case Value::Kind::kInt:
      return std::get<std::int64_t>(a.data_) <=> std::get<std::int64_t>(b.data_);
    case Value::Kind::kAtom:
      return std::get<Atom>(a.data_) <=> std::get<Atom>(b.data_);
    case Value::Kind::kSeq: {
      const auto& x = std::get<std::vector<Value>>(a.data_);
      const auto& y = std::get<std::vector<Value>>(b.data_);
      return std::lexicographical_compare_three_way(x.begin(), x.end(), y.begin(), y.end());
    }
  }
  return std::strong_ordering::equal;
}

std::string Location::to_string() const {
  std::string out = symbol;
  if (!args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) out += ',';
      out += args[i].to_string();
    }
    out += ')';
  }
  if (owner) out += "@" + owner->to_string();
  return out;
}

std::size_t Location::hash() const {
  std::size_t seed = std::hash<std::string>{}(symbol);
  for (const auto& a : args) hash_combine(seed, a.hash());
  if (owner) hash_combine(seed, owner->hash());
  return seed;
}

std::string Update::to_string() const { return location.to_string() + " := " + value.to_string(); }

Value State::read(const Location& loc) const {
  auto it = entries_.find(loc);
  return it == entries_.end() ? Value::undef() : it->second;
}

void State::write(const Location& loc, const Value& v) {
  if (v.is_undef()) {
    entries_.erase(loc);
  } else {
    entries_.insert_or_assign(loc, v);
  }
}

std::size_t State::hash() const {
  std::size_t seed = entries_.size();
  for (const auto& [loc, v] : entries_) {
    hash_combine(seed, loc.hash());
    hash_combine(seed, v.hash());
  }
  return seed;
}

std::string State::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& [loc, v] : entries_) {
    if (!first) os << ", ";
    first = false;
    os << loc.to_string() << " = " << v.to_string();
  }
  os << '}';
  return os.str();
}

InconsistentUpdateError::InconsistentUpdateError(Clash clash)
    : std::runtime_error("inconsistent update set: " + clash.first.to_string() + " vs " +
                         clash.second.to_string()),
      clash_(std::move(clash)) {}

std::optional<Clash> find_clash(const UpdateSet& updates) {
  // Ordered by location first, so clashing updates are adjacent.
  const Update* prev = nullptr;
  for (const auto& u : updates) {
    if (prev && prev->location == u.location && prev->value != u.value) return Clash{*prev, u};
    prev = &u;
  }
  return std::nullopt;
}

bool check_consistent(const UpdateSet& updates) { return !find_clash(updates).has_value(); }

State apply_updates(const State& state, const UpdateSet& updates) {
  if (auto clash = find_clash(updates)) throw InconsistentUpdateError(*clash);
  State next = state;
  for (const auto& u : updates) next.write(u.location, u.value);
  return next;
}

}  // namespace asmstarve
