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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace asmstarve {

struct Undef {
  auto operator<=>(const Undef&) const = default;
};

/// Element of a declared finite domain. Agents are atoms of the domain they
/// are bound from, so an agent identifier is just an Atom.
struct Atom {
  std::string domain;
  std::string name;
  auto operator<=>(const Atom&) const = default;
};

class Value {
 public:
  enum class Kind { kUndef, kBool, kInt, kAtom, kSeq };

  Value() = default;

  static Value undef() { return Value(); }
  static Value boolean(bool b) { return Value(Data(std::in_place_type<bool>, b)); }
  static Value integer(std::int64_t i) {
    return Value(Data(std::in_place_type<std::int64_t>, i));
  }
  static Value atom(std::string domain, std::string name) {
    return Value(Data(Atom{std::move(domain), std::move(name)}));
  }
  static Value sequence(std::vector<Value> items) {
    return Value(Data(std::move(items)));
  }

  Kind kind() const { return static_cast<Kind>(data_.index()); }
  bool is_undef() const { return kind() == Kind::kUndef; }
  bool is_bool() const { return kind() == Kind::kBool; }
  bool is_int() const { return kind() == Kind::kInt; }
  bool is_atom() const { return kind() == Kind::kAtom; }
  bool is_seq() const { return kind() == Kind::kSeq; }

  // Accessors throw std::logic_error on a kind mismatch.
  bool as_bool() const;
  std::int64_t as_int() const;
  const Atom& as_atom() const;
  const std::vector<Value>& as_seq() const;

  bool is_true() const { return is_bool() && std::get<bool>(data_); }

  std::string to_string() const;
  std::size_t hash() const;

  friend bool operator==(const Value&, const Value&) = default;
  friend std::strong_ordering operator<=>(const Value& a, const Value& b);

 private:
  using Data = std::variant<Undef, bool, std::int64_t, Atom, std::vector<Value>>;
  explicit Value(Data d) : data_(std::move(d)) {}
  Data data_;
};

/// A function symbol applied to an argument tuple. Agent-local symbols also
/// carry the owning agent, so each agent gets its own instance.
struct Location {
  std::string symbol;
  std::vector<Value> args;
  std::optional<Value> owner;

  auto operator<=>(const Location&) const = default;
  bool operator==(const Location&) const = default;

  /// `f(a1,a2)`, with `@agent` appended for agent-local locations.
  std::string to_string() const;
  std::size_t hash() const;
};

struct Update {
  Location location;
  Value value;

  auto operator<=>(const Update&) const = default;
  bool operator==(const Update&) const = default;
  std::string to_string() const;
};

/// Set semantics: equal updates collapse.
using UpdateSet = std::set<Update>;

/// Two updates writing different values to the same location.
using Clash = std::pair<Update, Update>;

/// Read access to a state. Evaluation only ever goes through this interface,
/// which lets the analyzer evaluate against partially known states.
class StateReader {
 public:
  virtual ~StateReader() = default;
  virtual Value read(const Location& loc) const = 0;
};

/// Finite map from locations to values. Absent locations read as undef and
/// writing undef erases the entry, so equal states compare equal.
class State : public StateReader {
 public:
  State() = default;

  Value read(const Location& loc) const override;
  void write(const Location& loc, const Value& v);

  const std::map<Location, Value>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  std::size_t hash() const;
  std::string to_string() const;

  friend bool operator==(const State& a, const State& b) { return a.entries_ == b.entries_; }
  friend auto operator<=>(const State& a, const State& b) {
    return a.entries_ <=> b.entries_;
  }

 private:
  std::map<Location, Value> entries_;
};

class InconsistentUpdateError : public std::runtime_error {
 public:
  explicit InconsistentUpdateError(Clash clash);
  const Clash& clash() const { return clash_; }

 private:
  Clash clash_;
};

/// First pair of updates targeting the same location with different values.
std::optional<Clash> find_clash(const UpdateSet& updates);

/// True iff no location receives two different values. Duplicates with equal
/// values are consistent.
bool check_consistent(const UpdateSet& updates);

/// Applies a consistent update set; throws InconsistentUpdateError otherwise.
State apply_updates(const State& state, const UpdateSet& updates);

inline void hash_combine(std::size_t& seed, std::size_t h) {
  seed ^= h + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

}  // namespace asmstarve

template <>
struct std::hash<asmstarve::Value> {
  std::size_t operator()(const asmstarve::Value& v) const { return v.hash(); }
};
template <>
struct std::hash<asmstarve::Location> {
  std::size_t operator()(const asmstarve::Location& l) const { return l.hash(); }
};
template <>
struct std::hash<asmstarve::State> {
  std::size_t operator()(const asmstarve::State& s) const { return s.hash(); }
};
