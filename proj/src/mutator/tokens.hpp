// Copyright 2026 The memprobe Authors.
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
#include <string_view>
#include <vector>

#include "memprobe/syntax/lexer.hpp"

namespace memprobe::mutator {

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

// Code tokens over a source buffer plus a matching-bracket table.
struct View {
  std::string_view src;
  std::vector<syntax::Token> code;
  std::vector<std::size_t> match;

  std::string_view text(std::size_t i) const {
    return i < code.size() ? src.substr(code[i].begin, code[i].end - code[i].begin) : std::string_view{};
  }
  bool is(std::size_t i, std::string_view w) const { return i < code.size() && text(i) == w; }
  bool ident(std::size_t i) const {
    return i < code.size() && code[i].kind == syntax::TokenKind::identifier;
  }
  bool kw(std::size_t i) const { return i < code.size() && code[i].kind == syntax::TokenKind::keyword; }
  bool open(std::size_t i) const { return is(i, "(") || is(i, "[") || is(i, "{"); }

  // Source text of tokens [b, e), including anything between them.
  std::string_view span(std::size_t b, std::size_t e) const {
    if (b >= e) return {};
    return src.substr(code[b].begin, code[e - 1].end - code[b].begin);
  }

  void build_match() {
    match.assign(code.size(), npos);
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < code.size(); ++i) {
      if (code[i].kind != syntax::TokenKind::punct) continue;
      const auto w = text(i);
      if (w == "(" || w == "[" || w == "{") {
        stack.push_back(i);
      } else if ((w == ")" || w == "]" || w == "}") && !stack.empty()) {
        match[stack.back()] = i;
        match[i] = stack.back();
        stack.pop_back();
      }
    }
  }
};

}  // namespace memprobe::mutator
