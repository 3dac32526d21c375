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

// Textual DSL for distributed ASM models.
//
//   dasm <name>
//   environment "<script.env.json>"
//   domain d = {a1, a2}
//   function f : d1 x d2 -> d3 <static|controlled|monitored|shared|out> [local] [by d]
//   derived g(x : d1) -> boolean := <formula>
//   init { <rules> }
//   rule R(x, y) = <rule>
//   agent x in d runs R(x)      |  agent a1 runs R(a2)
//   predicate p for self in d := <formula>
//   ranking <term> for p
//
// Rules: `if φ then r`, `{ r ... }`, `forall x in d do r`,
// `choose x in d with φ [maximizing t] do r`, `f(t..) := t`, `R(t..)`, `skip`,
// each optionally prefixed by a `"label":`. Formulas use `=`, `!=`, `in d`,
// `not`, `and`, `or`, `forall/exists x in d : φ`; a bare term means `t = true`.
// `//` starts a comment.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "asmstarve/syntax.hpp"

namespace asmstarve {

struct SourcePos {
  int line = 0;
  int column = 0;
};

enum class Severity { kError, kWarning };

struct Diagnostic {
  Severity severity = Severity::kError;
  SourcePos pos;
  std::string code;
  std::string message;

  /// `file:line:col: severity: message [code]`
  std::string format(std::string_view file) const;
};

bool has_errors(const std::vector<Diagnostic>& diags);

/// Source positions of declarations and rule nodes, keyed by "rule:<id>",
/// "function:<name>", "predicate:<name>", "agent:<index>", "domain:<name>".
/// Kept outside Model so that structural equality ignores layout.
using SourceMap = std::map<std::string, SourcePos>;

struct ParseResult {
  std::optional<Model> model;
  std::vector<Diagnostic> diagnostics;
  SourceMap source_map;

  bool ok() const { return model.has_value() && !has_errors(diagnostics); }
};

/// Parses a model. Syntax errors stop parsing; duplicate declarations are
/// reported but parsing continues.
ParseResult parse_model(std::string_view text);

/// Static checks of the function taxonomy, arities, scoping, and references.
std::vector<Diagnostic> validate_model(const Model& model, const SourceMap* positions = nullptr);

/// Canonical text; parse_model(pretty_print(m)) is structurally equal to m.
std::string pretty_print(const Model& model);

std::string to_text(const Term& t);
std::string to_text(const Formula& f);

/// Parse + validate a file from disk. I/O failures become a diagnostic.
ParseResult load_model_file(const std::string& path);

}  // namespace asmstarve
