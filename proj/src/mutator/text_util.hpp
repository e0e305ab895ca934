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

namespace memprobe::mutator {

// Lines with trailing whitespace removed. A final newline does not start an
// extra line; "" has no lines.
std::vector<std::string_view> split_lines(std::string_view text);

std::size_t lcs_length(const std::vector<std::string_view>& a,
                       const std::vector<std::string_view>& b);

// For each line of `b`, whether it is part of one fixed LCS with `a`.
std::vector<bool> lcs_matched(const std::vector<std::string_view>& a,
                              const std::vector<std::string_view>& b);

// Leading blanks of the line containing `offset`.
std::string_view line_indent(std::string_view text, std::size_t offset);
std::size_t line_begin(std::string_view text, std::size_t offset);
// Offset just past the line's '\n' (or text end).
std::size_t line_end(std::string_view text, std::size_t offset);
std::size_t line_of(std::string_view text, std::size_t offset);

// Indentation step used by the text: the smallest positive increase between
// consecutive indented lines, or `fallback`.
std::string indent_unit(std::string_view text, std::string_view fallback = "    ");

}  // namespace memprobe::mutator
