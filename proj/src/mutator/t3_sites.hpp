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
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "memprobe/language.hpp"
#include "memprobe/mutator.hpp"
#include "mutator/tokens.hpp"

namespace memprobe::mutator {

// One catalog rewrite: replace text[begin, end) with `text`.
struct Edit {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string text;
  Pattern pattern = Pattern::aug_assign;
};

// Sites offered by the catalogs, in source order. Inputs must parse.
std::vector<Edit> clike_sites(std::string_view text, Language language);
std::vector<Edit> python_sites(std::string_view text);

// ---- expression helpers shared by the catalogs ---------------------------------

// Binding strength of the binary operator at `i` (higher binds tighter), or 0
// when the token is not a binary operator in this position. `b` is the start
// of the enclosing expression.
int binary_prec(const View& v, std::size_t b, std::size_t i, Language language);

// Loosest top-level binding in [b, e): the minimum binary precedence, also
// counting a leading unary `not` and (Python) `lambda`. Returns 100 for atoms.
int root_prec(const View& v, std::size_t b, std::size_t e, Language language);

// Top-level token positions in [b, e) whose text is `w`.
std::vector<std::size_t> top_level(const View& v, std::size_t b, std::size_t e, std::string_view w);

bool wrapped_in_parens(const View& v, std::size_t b, std::size_t e);

// Literal not worth naming: 0, 1, empty strings and their spellings.
bool trivial_literal(std::string_view literal);

// First word of `pool` (then with 2, 3, ... appended) that is neither a
// keyword nor an identifier already used in `v`.
std::string fresh_name(const View& v, Language language, std::initializer_list<std::string_view> pool);

// The text before `offset` on its line is blank.
bool starts_line(std::string_view text, std::size_t offset);

}  // namespace memprobe::mutator
