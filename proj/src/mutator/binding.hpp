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
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "memprobe/language.hpp"

namespace memprobe::mutator {

// A source occurrence of a renamable name.
struct Occurrence {
  std::size_t begin = 0;  // byte offsets into the analysed text
  std::size_t end = 0;
  std::string name;
};

struct Bindings {
  std::vector<std::string> names;        // renamable, in first-occurrence order
  std::vector<Occurrence> occurrences;   // in source order
  std::set<std::string> taken;           // every identifier visible in the text
};

// Names bound by the function itself (name, parameters, locals) together
// with the occurrences that refer to them. Throws ParseFailure.
Bindings analyze_bindings(std::string_view text, Language language);

// Applies `rename` (original -> replacement) to the occurrences.
std::string apply_renames(std::string_view text, const Bindings& bindings,
                          const std::vector<std::pair<std::string, std::string>>& rename);

}  // namespace memprobe::mutator
