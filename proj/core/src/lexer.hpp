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

#include <string>
#include <string_view>
#include <vector>

#include "asmstarve/lang.hpp"

namespace asmstarve::detail {

enum class TokenKind { kIdent, kInt, kString, kPunct, kEnd };

struct Token {
  TokenKind kind = TokenKind::kEnd;
  std::string text;
  SourcePos pos;
};

struct LexError {
  SourcePos pos;
  std::string message;
};

/// Splits DSL text into tokens. Punctuation tokens are `{ } ( ) [ ] , : ;`
/// `:= = != -> + - @`. Throws LexError on stray characters.
std::vector<Token> tokenize(std::string_view text);

}  // namespace asmstarve::detail
