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
#include <string>
#include <string_view>
#include <vector>

#include "memprobe/language.hpp"

namespace memprobe::syntax {

// A function definition found in a source file. The span starts at the
// beginning of the line holding its first attached leading comment (or
// decorator / annotation / template header) and ends after its last token.
struct FunctionSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string name;
  std::size_t line = 0;  // 0-based line of `begin`
};

// Top-level and class-member definitions, in source order. Nested functions
// stay inside their parent. Throws ParseFailure.
std::vector<FunctionSpan> find_functions(std::string_view source, Language language);

// Throws ParseFailure unless `text` is exactly one function definition,
// optionally surrounded by comments and whitespace.
void check_function(std::string_view text, Language language);

bool parses_as_function(std::string_view text, Language language) noexcept;

// Name of the single function defined by `text`. Throws ParseFailure.
std::string function_name(std::string_view text, Language language);

}  // namespace memprobe::syntax
