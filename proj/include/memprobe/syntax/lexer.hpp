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
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "memprobe/language.hpp"

namespace memprobe::syntax {

enum class TokenKind : std::uint8_t {
  identifier,
  keyword,
  number,
  string,
  character,
  punct,
  comment,
  preprocessor,
  // Python layout tokens; zero-width except newline (which covers '\n' when present).
  newline,
  indent,
  dedent,
};

struct Token {
  TokenKind kind;
  std::size_t begin;  // byte offsets into the lexed source
  std::size_t end;
  std::size_t line;      // 0-based line of `begin`
  std::size_t end_line;  // 0-based line of the last byte
};

// A token list over a source buffer the caller keeps alive.
struct Lexed {
  std::string_view source;
  Language language;
  std::vector<Token> tokens;

  std::string_view text(const Token& t) const { return source.substr(t.begin, t.end - t.begin); }
  std::string_view text(std::size_t index) const { return text(tokens[index]); }
};

// Throws ParseFailure on unterminated literals/comments, stray characters,
// unbalanced brackets and (Python) inconsistent indentation. Python sources
// may be uniformly indented: the first logical line sets the base column.
Lexed lex(std::string_view source, Language language);

bool is_keyword(std::string_view word, Language language);

// Tokens that carry program text: not comments and not layout.
constexpr bool is_code(TokenKind kind) {
  return kind != TokenKind::comment && kind != TokenKind::newline &&
         kind != TokenKind::indent && kind != TokenKind::dedent;
}

// The token texts with comments and whitespace removed (layout tokens dropped).
std::vector<std::string> stripped_tokens(std::string_view source, Language language);

// Language-agnostic split on identifier / number / punctuation boundaries.
// Whitespace separates tokens and is dropped; every other byte outside an
// identifier or number run is a one-byte token. Bytes >= 0x80 count as
// identifier characters so UTF-8 words stay whole.
std::vector<std::string_view> fallback_tokenize(std::string_view text);

inline std::size_t fallback_token_count(std::string_view text) {
  return fallback_tokenize(text).size();
}

inline constexpr std::string_view kFallbackTokenizerId = "fallback/1";

}  // namespace memprobe::syntax
