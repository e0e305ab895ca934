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

// Statement tree for Python sources. Token indices refer to Lexed::tokens.
namespace memprobe::syntax::py {

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

struct Stmt {
  std::size_t begin = 0;  // first code token of the statement
  std::size_t end = 0;    // one past the last token of its own line part
                          // (header up to and including ':' for compound)
  std::size_t colon = npos;   // block-introducing ':' of a compound header
  std::string_view keyword;   // leading keyword; "@" for decorators, "" otherwise
  std::vector<Stmt> body;     // nested block or inline simple statements
  bool inline_body = false;   // body follows ':' on the same logical line
  bool shares_line = false;   // one of several ';'-separated statements
  std::size_t last = 0;       // last code token of the whole statement (inclusive)
};

struct Module {
  Lexed lexed;
  std::vector<Stmt> body;
};

// Throws ParseFailure.
Module parse(std::string_view source);

// Compound statement introducers (clause keywords included).
bool is_compound_keyword(std::string_view keyword);

}  // namespace memprobe::syntax::py
