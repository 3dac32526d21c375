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

#include "lexer.hpp"

#include <cctype>

namespace asmstarve::detail {

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  auto is_ident_start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
  auto is_ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; };

  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    SourcePos pos{line, col};
    if (is_ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && is_ident_char(text[j])) ++j;
      out.push_back({TokenKind::kIdent, std::string(text.substr(i, j - i)), pos});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      out.push_back({TokenKind::kInt, std::string(text.substr(i, j - i)), pos});
      advance(j - i);
      continue;
    }
    if (c == '"') {
      std::size_t j = i + 1;
      std::string s;
      while (j < text.size() && text[j] != '"' && text[j] != '\n') s += text[j++];
      if (j >= text.size() || text[j] != '"') throw LexError{pos, "unterminated string literal"};
      out.push_back({TokenKind::kString, std::move(s), pos});
      advance(j + 1 - i);
      continue;
    }
    auto two = text.substr(i, 2);
    if (two == ":=" || two == "!=" || two == "->") {
      out.push_back({TokenKind::kPunct, std::string(two), pos});
      advance(2);
      continue;
    }
    static constexpr std::string_view kSingles = "{}()[],:;=+-@";
    if (kSingles.find(c) != std::string_view::npos) {
      out.push_back({TokenKind::kPunct, std::string(1, c), pos});
      advance(1);
      continue;
    }
    throw LexError{pos, std::string("unexpected character '") + c + "'"};
  }
  out.push_back({TokenKind::kEnd, "", {line, col}});
  return out;
}

}  // namespace asmstarve::detail
